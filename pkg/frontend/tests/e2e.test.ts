// Scripted browser run against the real demo server: identifier entry,
// challenge render (QR + fingerprint), authenticator approval, redirect,
// and an explicit-authorization round trip. The server and authenticator
// are the python reference implementations driven as subprocesses.

import assert from "node:assert/strict"
import { execFile, spawn, type ChildProcess } from "node:child_process"
import { mkdtempSync, writeFileSync } from "node:fs"
import { createServer } from "node:net"
import { tmpdir } from "node:os"
import { join } from "node:path"
import { after, before, test } from "node:test"
import { promisify } from "node:util"

import { JSDOM } from "jsdom"

import { ApiClient } from "../src/api.js"
import { initAccountPage, initLoginPage } from "../src/app.js"

const execFileP = promisify(execFile)
const GROUP = "attack-demo-272" // small pinned group keeps the run fast

let serverProcess: ChildProcess
let baseUrl: string
let workDir: string
let authEnv: NodeJS.ProcessEnv

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer()
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address()
      if (address && typeof address === "object") {
        const port = address.port
        probe.close(() => resolve(port))
      } else {
        reject(new Error("no port"))
      }
    })
  })
}

async function waitFor(
  predicate: () => boolean | Promise<boolean>,
  what: string,
  timeoutMs = 20_000,
  stepMs = 50,
): Promise<void> {
  const deadline = Date.now() + timeoutMs
  while (Date.now() < deadline) {
    if (await predicate()) {
      return
    }
    await new Promise((resolve) => setTimeout(resolve, stepMs))
  }
  throw new Error(`timed out waiting for ${what}`)
}

function runAuthenticator(...args: string[]): Promise<{ stdout: string }> {
  return execFileP(
    "python3",
    [
      "-m", "zerotwo.authenticator.cli",
      "--store", join(workDir, "device.zt"),
      "--server", baseUrl,
      "--group", GROUP,
      ...args,
    ],
    { env: authEnv },
  )
}

before(async () => {
  workDir = mkdtempSync(join(tmpdir(), "zerotwo-e2e-"))
  authEnv = { ...process.env, ZEROTWO_UNLOCK_PASSWORD: "e2e unlock password" }
  const port = await freePort()
  baseUrl = `http://127.0.0.1:${port}`
  serverProcess = spawn(
    "python3",
    [
      "-m", "zerotwo.server.cli",
      "--listen", `127.0.0.1:${port}`,
      "--demo",
      "--group", GROUP,
      "--store-path", join(workDir, "server.json"),
    ],
    { stdio: "ignore" },
  )
  await waitFor(async () => {
    try {
      const response = await fetch(`${baseUrl}/openapi.json`)
      return response.ok
    } catch {
      return false
    }
  }, "server startup")

  // device setup: store, master secret, enrollment for "dave"
  await runAuthenticator("init", "--kdf-profile", "fast")
  await runAuthenticator("passphrase", "--save")
  const signup = await fetch(`${baseUrl}/signup`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ iu: "dave" }),
  })
  assert.equal(signup.status, 200)
  const payloadPath = join(workDir, "enroll.json")
  writeFileSync(payloadPath, ((await signup.json()) as { qr_payload: string }).qr_payload)
  await runAuthenticator("enroll", "--payload", payloadPath)
})

after(() => {
  serverProcess?.kill()
})

test("login flow: enter id, render challenge, device approval, redirect", async () => {
  const dom = new JSDOM(
    `<!doctype html><html><body>
      <div id="banner" hidden></div>
      <form id="identifier-form"><input id="identifier" type="text"></form>
      <section id="challenge-section" hidden>
        <span id="challenge-user"></span>
        <p id="fingerprint"></p>
        <div id="qr"></div>
        <pre id="payload-text"></pre>
        <p id="status-line"></p>
      </section>
      <button id="retry" hidden></button>
    </body></html>`,
    { url: `${baseUrl}/app/` },
  )
  const doc = dom.window.document
  const navigations: string[] = []
  const page = initLoginPage(doc, {
    api: new ApiClient(baseUrl),
    navigate: (url) => navigations.push(url),
    pollIntervalMs: 100,
  })

  const input = doc.getElementById("identifier") as HTMLInputElement
  input.value = "dave"
  doc
    .getElementById("identifier-form")!
    .dispatchEvent(new dom.window.Event("submit", { cancelable: true }))

  // challenge rendered: fingerprint, QR image, copyable payload
  await waitFor(
    () => !(doc.getElementById("challenge-section") as HTMLElement).hidden,
    "challenge render",
  )
  const payloadText = doc.getElementById("payload-text")!.textContent ?? ""
  const payload = JSON.parse(payloadText) as {
    v: number
    t: string
    login_id: string
    fingerprint: string
    B: string
  }
  assert.equal(payload.v, 1)
  assert.equal(payload.t, "login")
  assert.match(payload.B, /^[0-9a-f]+$/)
  const shownFingerprint = doc.getElementById("fingerprint")!.textContent
  assert.equal(shownFingerprint, payload.fingerprint) // hex-verbatim display
  assert.match(doc.getElementById("qr")!.innerHTML, /^<svg/)

  // the device approves after comparing fingerprints
  await runAuthenticator("--yes", "approve", "--login", payload.login_id)

  await waitFor(() => navigations.length > 0, "redirect after approval")
  page.stop()
  assert.equal(page.getState().phase, "logged-in")
  const url = new URL(navigations[0], baseUrl)
  assert.equal(url.pathname, "/app/account.html")
  const token = url.searchParams.get("token")
  assert.ok(token && token.length === 64)

  // authorization round trip on the account page
  const accountDom = new JSDOM(
    `<!doctype html><html><body>
      <div id="banner" hidden></div>
      <span id="whoami"></span><span id="session-expiry"></span>
      <section id="authz-panel" hidden>
        <button data-operation="transfer 100">go</button>
        <p id="authz-status"></p>
      </section>
      <a id="back-to-login" hidden></a>
    </body></html>`,
    { url: `${baseUrl}/app/account.html?token=${token}` },
  )
  const accountDoc = accountDom.window.document
  const account = initAccountPage(accountDoc, {
    api: new ApiClient(baseUrl),
    navigate: () => undefined,
    pollIntervalMs: 100,
  })
  await waitFor(
    () => accountDoc.getElementById("whoami")!.textContent === "dave",
    "session resolution",
  )
  ;(accountDoc.querySelector("button[data-operation]") as HTMLButtonElement).click()
  await waitFor(
    () => account.getState().phase === "authz-pending",
    "authorization pending",
  )
  const status = accountDoc.getElementById("authz-status")!
  assert.match(status.textContent ?? "", /Waiting for device approval/)
  const authId = status.dataset.authId
  assert.ok(authId)

  await runAuthenticator("--yes", "authz", "confirm", authId)
  await waitFor(
    () => account.getState().authz?.state === "confirmed",
    "authorization confirmation",
  )
  assert.match(status.textContent ?? "", /confirmed/)
  account.stop()
})

test("device logout locks the account page", async () => {
  // fresh login approved straight from the device poll
  const init = await fetch(`${baseUrl}/login/init`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ iu: "dave" }),
  })
  const challenge = (await init.json()) as { login_id: string }
  await runAuthenticator("--yes", "approve", "--login", challenge.login_id)
  const status = await fetch(`${baseUrl}/login/status/${challenge.login_id}`)
  const body = (await status.json()) as { state: string; browser_token: string }
  assert.equal(body.state, "ok")

  const dom = new JSDOM(
    `<!doctype html><html><body>
      <div id="banner" hidden></div>
      <span id="whoami"></span><span id="session-expiry"></span>
      <section id="authz-panel" hidden>
        <button data-operation="noop">go</button>
        <p id="authz-status"></p>
      </section>
      <a id="back-to-login" hidden></a>
    </body></html>`,
    { url: `${baseUrl}/app/account.html?token=${body.browser_token}` },
  )
  const doc = dom.window.document
  const page = initAccountPage(doc, {
    api: new ApiClient(baseUrl),
    navigate: () => undefined,
    pollIntervalMs: 100,
  })
  await waitFor(
    () => doc.getElementById("whoami")!.textContent === "dave",
    "session resolution",
  )

  const sessions = await runAuthenticator("sessions")
  const sessionId = sessions.stdout
    .trim()
    .split("\n")
    .at(-1)!
    .split(":")[0]
    .trim()
  await runAuthenticator("logout", sessionId)

  await waitFor(() => page.getState().phase === "ended", "session-ended state")
  assert.equal(page.getState().endReason, "session-ended")
  assert.equal((doc.getElementById("back-to-login") as HTMLElement).hidden, false)
  page.stop()
})
