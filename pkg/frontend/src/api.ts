// Thin typed client over the server's HTTP+JSON endpoints. Field names
// mirror the wire contract exactly; values pass through verbatim.

import type { LoginChallenge } from "./state.js"

export interface LoginStatus {
  state: "pending" | "ok" | "failed"
  browser_token?: string
  redirect_url?: string
  session_expires_at?: number
}

export interface AuthzChallenge {
  auth_id: string
  o: string
  c: string
}

export interface AuthzStatus {
  auth_id: string
  state: "pending" | "confirmed" | "denied" | "expired"
  o: string
}

export interface BrowserSession {
  iu: string
  session_id: string
  expires_at: number
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`server returned ${status}: ${detail}`)
  }
}

export const SESSION_EXPIRED_STATUS = 440

async function decode<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = ""
    try {
      const body = (await response.json()) as { detail?: string }
      detail = body.detail ?? ""
    } catch {
      // non-JSON error body
    }
    throw new ApiError(response.status, detail)
  }
  if (response.status === 204) {
    return undefined as T
  }
  return (await response.json()) as T
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((response) => decode<T>(response))
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchFn(`${this.baseUrl}${path}`).then((response) =>
      decode<T>(response),
    )
  }

  loginInit(iu: string): Promise<LoginChallenge> {
    return this.post("/login/init", { iu })
  }

  loginStatus(loginId: string): Promise<LoginStatus> {
    return this.get(`/login/status/${encodeURIComponent(loginId)}`)
  }

  sessionByToken(browserToken: string): Promise<BrowserSession> {
    return this.get(`/session/by-token/${encodeURIComponent(browserToken)}`)
  }

  authzRequest(sessionId: string, operation: string): Promise<AuthzChallenge> {
    return this.post("/authz/request", { session_id: sessionId, o: operation })
  }

  authzStatus(authId: string): Promise<AuthzStatus> {
    return this.get(`/authz/status/${encodeURIComponent(authId)}`)
  }
}

// One poll in flight at a time: a tick that arrives while the previous
// request is still outstanding is skipped, not queued.
export class Poller {
  private timer: ReturnType<typeof setInterval> | null = null
  private busy = false

  constructor(private readonly intervalMs: number) {}

  start(tick: () => Promise<void>): void {
    this.stop()
    this.timer = setInterval(() => {
      if (this.busy) {
        return
      }
      this.busy = true
      void tick()
        .catch(() => undefined)
        .finally(() => {
          this.busy = false
        })
    }, this.intervalMs)
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer)
      this.timer = null
    }
  }
}
