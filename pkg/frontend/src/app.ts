// DOM wiring for the two demo pages. All protocol values (B, fingerprint,
// nonces) render exactly as received from the server; the page never
// recomputes or checks them, and no input on either page takes a
// passphrase. The authenticator device is the trusted side.

import { ApiClient, ApiError, Poller, SESSION_EXPIRED_STATUS } from "./api.js"
import {
  initialState,
  loginPayloadText,
  transition,
  type Event,
  type LoginChallenge,
  type ViewState,
} from "./state.js"
import { encodeQr, matrixToSvg, QrCapacityError } from "./qr.js"

export const POLL_INTERVAL_MS = 1000
export const CHALLENGE_WINDOW_MS = 120_000

export interface PageOptions {
  api?: ApiClient
  navigate?: (url: string) => void
  pollIntervalMs?: number
  challengeWindowMs?: number
}

function el<T extends HTMLElement>(doc: Document, id: string): T {
  const node = doc.getElementById(id)
  if (!node) {
    throw new Error(`missing element #${id}`)
  }
  return node as T
}

function renderBanner(doc: Document, state: ViewState): void {
  const banner = el(doc, "banner")
  banner.textContent = state.banner ?? ""
  banner.hidden = state.banner === null
}

// ---------------------------------------------------------------------------
// login page

export interface LoginPageHandle {
  getState(): ViewState
  stop(): void
}

export function initLoginPage(doc: Document, options: PageOptions = {}): LoginPageHandle {
  const api = options.api ?? new ApiClient()
  const navigate =
    options.navigate ?? ((url: string) => doc.defaultView?.location.assign(url))
  const poller = new Poller(options.pollIntervalMs ?? POLL_INTERVAL_MS)
  const windowMs = options.challengeWindowMs ?? CHALLENGE_WINDOW_MS

  let state: ViewState = initialState
  let challengeStartedAt = 0

  const form = el<HTMLFormElement>(doc, "identifier-form")
  const input = el<HTMLInputElement>(doc, "identifier")
  const challengeSection = el(doc, "challenge-section")
  const statusLine = el(doc, "status-line")
  const retryButton = el<HTMLButtonElement>(doc, "retry")

  function apply(event: Event): void {
    state = transition(state, event)
    render()
  }

  function render(): void {
    renderBanner(doc, state)
    challengeSection.hidden = !(
      state.phase === "show-challenge" || state.phase === "awaiting-approval"
    )
    retryButton.hidden = state.phase !== "ended"
    form.hidden = state.phase !== "enter-id"
    switch (state.phase) {
      case "enter-id":
        statusLine.textContent = ""
        break
      case "show-challenge":
      case "awaiting-approval": {
        const challenge = state.challenge as LoginChallenge
        el(doc, "fingerprint").textContent = challenge.fingerprint
        el(doc, "challenge-user").textContent =
          `${challenge.iu} at ${challenge.is}`
        const payload = loginPayloadText(challenge)
        el(doc, "payload-text").textContent = payload
        const qrHost = el(doc, "qr")
        try {
          qrHost.innerHTML = matrixToSvg(encodeQr(payload))
        } catch (error) {
          if (error instanceof QrCapacityError) {
            qrHost.textContent = "payload too large for the demo QR; use the text below"
          } else {
            throw error
          }
        }
        statusLine.textContent =
          state.phase === "awaiting-approval"
            ? "Waiting for approval on your device…"
            : "Scan or copy the payload with your authenticator."
        break
      }
      case "ended":
        statusLine.textContent = ""
        break
      case "logged-in":
      case "authz-pending":
        break
    }
  }

  async function submitIdentifier(identifier: string): Promise<void> {
    const challenge = await api.loginInit(identifier)
    apply({ kind: "challenge-received", challenge })
    challengeStartedAt = Date.now()
    poller.start(async () => {
      if (state.phase !== "show-challenge" && state.phase !== "awaiting-approval") {
        poller.stop()
        return
      }
      if (Date.now() - challengeStartedAt >= windowMs) {
        apply({ kind: "poll-timeout" })
        poller.stop()
        return
      }
      const status = await api.loginStatus(challenge.login_id)
      if (status.state === "pending") {
        apply({ kind: "poll-pending" })
      } else if (status.state === "ok") {
        poller.stop()
        const token = status.browser_token ?? ""
        const redirect = status.redirect_url ?? "/app/account.html"
        apply({
          kind: "login-ok",
          session: {
            browserToken: token,
            redirectUrl: redirect,
            sessionExpiresAt: status.session_expires_at ?? null,
          },
        })
        navigate(`${redirect}?token=${encodeURIComponent(token)}`)
      } else {
        poller.stop()
        apply({ kind: "login-failed" })
      }
    })
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault()
    const identifier = input.value.trim()
    if (!identifier) {
      return
    }
    void submitIdentifier(identifier).catch(() => {
      apply({
        kind: "init-failed",
        message: "Could not start the login. Try again in a moment.",
      })
    })
  })

  retryButton.addEventListener("click", () => {
    poller.stop()
    apply({ kind: "retry" })
  })

  render()
  return {
    getState: () => state,
    stop: () => poller.stop(),
  }
}

// ---------------------------------------------------------------------------
// account page (post-login): explicit-authorization prompts

export interface AccountPageHandle {
  getState(): ViewState
  stop(): void
}

export function initAccountPage(
  doc: Document,
  options: PageOptions = {},
): AccountPageHandle {
  const api = options.api ?? new ApiClient()
  const navigate =
    options.navigate ?? ((url: string) => doc.defaultView?.location.assign(url))
  const authzPoller = new Poller(options.pollIntervalMs ?? POLL_INTERVAL_MS)
  const sessionPoller = new Poller((options.pollIntervalMs ?? POLL_INTERVAL_MS) * 2)

  let state: ViewState = initialState
  let sessionId: string | null = null

  const whoami = el(doc, "whoami")
  const expiry = el(doc, "session-expiry")
  const panel = el(doc, "authz-panel")
  const panelStatus = el(doc, "authz-status")
  const backLink = el<HTMLAnchorElement>(doc, "back-to-login")

  function apply(event: Event): void {
    state = transition(state, event)
    render()
  }

  function render(): void {
    renderBanner(doc, state)
    backLink.hidden = state.phase !== "ended"
    panel.hidden = !(state.phase === "logged-in" || state.phase === "authz-pending")
    if (state.authz) {
      const { operation, state: verdict, authId } = state.authz
      panelStatus.dataset.authId = authId
      panelStatus.textContent =
        verdict === "pending"
          ? `Waiting for device approval: "${operation}"`
          : `Operation "${operation}" ${verdict}.`
    } else {
      panelStatus.textContent = ""
    }
  }

  function endSession(reason: "session-expired" | "session-ended"): void {
    authzPoller.stop()
    sessionPoller.stop()
    apply({ kind: reason })
  }

  async function resolveSession(token: string): Promise<void> {
    try {
      const session = await api.sessionByToken(token)
      sessionId = session.session_id
      whoami.textContent = session.iu
      expiry.textContent = new Date(session.expires_at * 1000).toISOString()
      apply({
        kind: "session-resolved",
        session: {
          browserToken: token,
          redirectUrl: null,
          sessionExpiresAt: session.expires_at,
        },
      })
      sessionPoller.start(async () => {
        try {
          await api.sessionByToken(token)
        } catch (error) {
          if (error instanceof ApiError) {
            endSession("session-ended")
          }
        }
      })
    } catch {
      endSession("session-ended")
    }
  }

  async function requestAuthorization(operation: string): Promise<void> {
    if (!sessionId || state.phase !== "logged-in") {
      return
    }
    try {
      const challenge = await api.authzRequest(sessionId, operation)
      apply({ kind: "authz-requested", authId: challenge.auth_id, operation: challenge.o })
    } catch (error) {
      if (error instanceof ApiError && error.status === SESSION_EXPIRED_STATUS) {
        endSession("session-expired")
        return
      }
      throw error
    }
    const authId = state.authz?.authId
    if (!authId) {
      return
    }
    authzPoller.start(async () => {
      const status = await api.authzStatus(authId)
      if (status.state === "confirmed") {
        authzPoller.stop()
        apply({ kind: "authz-confirmed" })
      } else if (status.state === "denied" || status.state === "expired") {
        authzPoller.stop()
        apply({ kind: "authz-denied" })
      }
    })
  }

  for (const button of Array.from(
    doc.querySelectorAll<HTMLButtonElement>("button[data-operation]"),
  )) {
    button.addEventListener("click", () => {
      void requestAuthorization(button.dataset.operation ?? "demo action")
    })
  }

  backLink.addEventListener("click", (event) => {
    event.preventDefault()
    navigate("/app/")
  })

  const token = new URL(doc.defaultView?.location.href ?? "http://localhost/").searchParams.get(
    "token",
  )
  if (token) {
    void resolveSession(token)
  } else {
    apply({ kind: "session-ended" })
  }

  render()
  return {
    getState: () => state,
    stop: () => {
      authzPoller.stop()
      sessionPoller.stop()
    },
  }
}
