// Pure view-state machine for the demo pages. The browser mirrors the
// server's login/authorization state; it never derives or checks any
// protocol value itself (the fingerprint comparison happens on the
// authenticator, the browser only displays).

export type Phase =
  | "enter-id"
  | "show-challenge"
  | "awaiting-approval"
  | "logged-in"
  | "authz-pending"
  | "ended"

export interface LoginChallenge {
  login_id: string
  iu: string
  is: string
  B: string
  fingerprint: string
}

export interface SessionInfo {
  browserToken: string
  redirectUrl: string | null
  sessionExpiresAt: number | null
}

export interface AuthzView {
  authId: string
  operation: string
  state: "pending" | "confirmed" | "denied"
}

export type EndReason = "failed" | "expired" | "session-ended"

export interface ViewState {
  phase: Phase
  challenge: LoginChallenge | null
  session: SessionInfo | null
  authz: AuthzView | null
  endReason: EndReason | null
  banner: string | null
}

export const initialState: ViewState = {
  phase: "enter-id",
  challenge: null,
  session: null,
  authz: null,
  endReason: null,
  banner: null,
}

export type Event =
  | { kind: "challenge-received"; challenge: LoginChallenge }
  | { kind: "init-failed"; message: string }
  | { kind: "poll-pending" }
  | { kind: "login-ok"; session: SessionInfo }
  | { kind: "login-failed" }
  | { kind: "poll-timeout" }
  | { kind: "session-resolved"; session: SessionInfo }
  | { kind: "authz-requested"; authId: string; operation: string }
  | { kind: "authz-confirmed" }
  | { kind: "authz-denied" }
  | { kind: "session-expired" }
  | { kind: "session-ended" }
  | { kind: "retry" }

// Legal transitions per phase; events arriving out of phase are ignored,
// which keeps late poll responses from corrupting the view.
const LEGAL: Record<Event["kind"], Phase[]> = {
  "challenge-received": ["enter-id", "ended"],
  "init-failed": ["enter-id"],
  "poll-pending": ["show-challenge", "awaiting-approval"],
  "login-ok": ["show-challenge", "awaiting-approval"],
  "login-failed": ["show-challenge", "awaiting-approval"],
  "poll-timeout": ["show-challenge", "awaiting-approval"],
  "session-resolved": ["enter-id", "logged-in"],
  "authz-requested": ["logged-in"],
  "authz-confirmed": ["authz-pending"],
  "authz-denied": ["authz-pending"],
  "session-expired": ["enter-id", "logged-in", "authz-pending"],
  "session-ended": ["enter-id", "logged-in", "authz-pending"],
  retry: ["ended"],
}

export function transition(state: ViewState, event: Event): ViewState {
  if (!LEGAL[event.kind].includes(state.phase)) {
    return state
  }
  switch (event.kind) {
    case "challenge-received":
      return {
        ...initialState,
        phase: "show-challenge",
        challenge: event.challenge,
      }
    case "init-failed":
      return {
        ...state,
        phase: "ended",
        endReason: "failed",
        banner: event.message,
      }
    case "poll-pending":
      return { ...state, phase: "awaiting-approval" }
    case "login-ok":
      return { ...state, phase: "logged-in", session: event.session, banner: null }
    case "login-failed":
      return {
        ...state,
        phase: "ended",
        endReason: "failed",
        banner: "Login failed. The device rejected or the attempt was invalid.",
      }
    case "poll-timeout":
      return {
        ...state,
        phase: "ended",
        endReason: "expired",
        banner: "The login challenge expired before it was approved.",
      }
    case "session-resolved":
      return { ...state, phase: "logged-in", session: event.session, banner: null }
    case "authz-requested":
      return {
        ...state,
        phase: "authz-pending",
        authz: { authId: event.authId, operation: event.operation, state: "pending" },
      }
    case "authz-confirmed":
      return {
        ...state,
        phase: "logged-in",
        authz: state.authz && { ...state.authz, state: "confirmed" },
      }
    case "authz-denied":
      return {
        ...state,
        phase: "logged-in",
        authz: state.authz && { ...state.authz, state: "denied" },
      }
    case "session-expired":
      return {
        ...state,
        phase: "ended",
        endReason: "session-ended",
        session: null,
        banner: "The session expired. Log in again.",
      }
    case "session-ended":
      return {
        ...state,
        phase: "ended",
        endReason: "session-ended",
        session: null,
        banner: "The session was ended from the device.",
      }
    case "retry":
      return { ...initialState }
  }
}

// The out-of-band payload the authenticator ingests; rendered both as a
// QR image and as copyable text, byte-for-byte the same JSON.
export function loginPayloadText(challenge: LoginChallenge): string {
  return JSON.stringify({
    v: 1,
    t: "login",
    login_id: challenge.login_id,
    iu: challenge.iu,
    is: challenge.is,
    B: challenge.B,
    fingerprint: challenge.fingerprint,
  })
}
