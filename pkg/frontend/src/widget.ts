/**
 * Embeddable verification widget.
 *
 * Lifecycle: warning -> loading -> presenting -> submitting ->
 * passed | failed | expired | presenting (retry), with an error phase and
 * retry affordance for network failures.  No network request is made until
 * the respondent explicitly acknowledges the photosensitivity warning, at
 * most one request is ever in flight, and exactly one of onPass/onFail
 * fires per mounted lifecycle.
 *
 * Compiled as a plain classic script: include it with a <script> tag and
 * call window.DotDriftWidget.mount(container, serviceBaseUrl, callbacks).
 */

type WidgetPhase =
  | "warning"
  | "loading"
  | "presenting"
  | "submitting"
  | "passed"
  | "failed"
  | "expired"
  | "error";

interface WidgetCallbacks {
  onPass?: () => void;
  onFail?: () => void;
}

interface WidgetOptions {
  warningText?: string;
  acknowledgeLabel?: string;
}

interface IssuePayload {
  token: string;
  media_url: string;
  prompt_text: string;
  warning_text: string;
  expires_at: string;
}

interface VerifyPayload {
  verdict: "pass" | "fail" | "expired";
  attempts_remaining: number;
}

interface WidgetHandle {
  phase(): WidgetPhase;
  destroy(): void;
  root: HTMLElement;
}

const DEFAULT_WARNING =
  "Warning: this check shows rapidly flickering black-and-white noise. " +
  "If you are photosensitive or prone to seizures, do not continue and " +
  "request an alternative verification instead.";

function mount(
  container: HTMLElement,
  serviceBaseUrl: string,
  callbacks: WidgetCallbacks = {},
  options: WidgetOptions = {}
): WidgetHandle {
  let phase: WidgetPhase = "warning";
  let challenge: IssuePayload | null = null;
  let attemptsNote = "";
  let errorNote = "";
  let inFlight = false;
  let callbackFired = false;
  let destroyed = false;
  // retry() re-runs the operation that hit the network error
  let retryAction: () => void = () => startChallenge();

  const root = document.createElement("div");
  root.className = "dotdrift-widget";
  container.appendChild(root);

  function firePass(): void {
    if (!callbackFired) {
      callbackFired = true;
      if (callbacks.onPass) callbacks.onPass();
    }
  }

  function fireFail(): void {
    if (!callbackFired) {
      callbackFired = true;
      if (callbacks.onFail) callbacks.onFail();
    }
  }

  function setPhase(next: WidgetPhase): void {
    phase = next;
    render();
  }

  function button(label: string, onClick: () => void): HTMLButtonElement {
    const el = document.createElement("button");
    el.type = "button";
    el.textContent = label;
    el.addEventListener("click", onClick);
    return el;
  }

  function paragraph(text: string, className?: string): HTMLParagraphElement {
    const el = document.createElement("p");
    el.textContent = text;
    if (className) el.className = className;
    return el;
  }

  async function startChallenge(): Promise<void> {
    if (inFlight || destroyed) return;
    inFlight = true;
    retryAction = () => startChallenge();
    setPhase("loading");
    try {
      const response = await fetch(serviceBaseUrl + "/v1/challenges", { method: "POST" });
      if (!response.ok) throw new Error("challenge request failed: " + response.status);
      challenge = (await response.json()) as IssuePayload;
      attemptsNote = "";
      inFlight = false;
      setPhase("presenting");
    } catch (error) {
      inFlight = false;
      errorNote = "Could not load a challenge. Check your connection and try again.";
      setPhase("error");
    }
  }

  async function submit(answer: string): Promise<void> {
    if (inFlight || destroyed || phase !== "presenting" || !challenge) return;
    if (!/^[0-9]+$/.test(answer)) return;
    inFlight = true;
    setPhase("submitting");
    try {
      const response = await fetch(
        serviceBaseUrl + "/v1/challenges/" + challenge.token + "/verify",
        {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: JSON.stringify({ answer: answer }),
        }
      );
      if (response.status === 404) throw new Error("challenge vanished");
      if (response.status === 410) {
        inFlight = false;
        setPhase("expired");
        return;
      }
      const body = (await response.json()) as VerifyPayload;
      inFlight = false;
      if (response.status === 409) {
        // already terminal elsewhere: render the final verdict
        if (body.verdict === "pass") {
          firePass();
          setPhase("passed");
        } else if (body.verdict === "expired") {
          setPhase("expired");
        } else {
          fireFail();
          setPhase("failed");
        }
        return;
      }
      if (body.verdict === "pass") {
        firePass();
        setPhase("passed");
      } else if (body.verdict === "expired") {
        setPhase("expired");
      } else if (body.attempts_remaining > 0) {
        const plural = body.attempts_remaining === 1 ? "attempt" : "attempts";
        attemptsNote = "Incorrect. " + body.attempts_remaining + " " + plural + " left.";
        setPhase("presenting");
      } else {
        fireFail();
        setPhase("failed");
      }
    } catch (error) {
      inFlight = false;
      errorNote = "Could not submit your answer. Try again.";
      retryAction = () => setPhase("presenting");
      setPhase("error");
    }
  }

  function renderWarning(): void {
    root.appendChild(paragraph(options.warningText || DEFAULT_WARNING, "dotdrift-warning"));
    root.appendChild(
      button(options.acknowledgeLabel || "I understand, show the check", () => {
        void startChallenge();
      })
    );
  }

  function renderPresenting(): void {
    if (!challenge) return;
    if (challenge.warning_text) {
      root.appendChild(paragraph(challenge.warning_text, "dotdrift-warning-small"));
    }
    const media = document.createElement("img");
    // native size: CSS scaling would interpolate and smear the motion signal
    media.src = serviceBaseUrl + challenge.media_url;
    media.alt = "verification challenge animation";
    media.style.imageRendering = "pixelated";
    root.appendChild(media);
    root.appendChild(paragraph(challenge.prompt_text, "dotdrift-prompt"));
    if (attemptsNote) {
      root.appendChild(paragraph(attemptsNote, "dotdrift-attempts"));
    }

    const input = document.createElement("input");
    input.type = "text";
    input.inputMode = "numeric";
    input.autocomplete = "off";
    input.setAttribute("aria-label", "your answer");
    input.addEventListener("input", () => {
      // digits only, enforced live
      const digits = input.value.replace(/[^0-9]/g, "");
      if (input.value !== digits) input.value = digits;
    });
    input.addEventListener("keydown", (event: KeyboardEvent) => {
      if (event.key === "Enter") void submit(input.value);
    });
    root.appendChild(input);
    root.appendChild(
      button("Submit", () => {
        void submit(input.value);
      })
    );
  }

  function render(): void {
    if (destroyed) return;
    root.textContent = "";
    root.setAttribute("data-phase", phase);
    if (phase === "warning") {
      renderWarning();
    } else if (phase === "loading") {
      root.appendChild(paragraph("Loading challenge…"));
    } else if (phase === "presenting") {
      renderPresenting();
    } else if (phase === "submitting") {
      root.appendChild(paragraph("Checking…"));
    } else if (phase === "passed") {
      root.appendChild(paragraph("Verified. Thank you!", "dotdrift-passed"));
    } else if (phase === "failed") {
      root.appendChild(paragraph("Verification failed.", "dotdrift-failed"));
    } else if (phase === "expired") {
      root.appendChild(paragraph("This challenge expired.", "dotdrift-expired"));
      root.appendChild(
        button("Request a new challenge", () => {
          void startChallenge();
        })
      );
    } else if (phase === "error") {
      root.appendChild(paragraph(errorNote || "Something went wrong.", "dotdrift-error"));
      root.appendChild(button("Try again", () => retryAction()));
    }
  }

  render();

  return {
    phase: () => phase,
    root: root,
    destroy: () => {
      destroyed = true;
      if (root.parentNode) root.parentNode.removeChild(root);
    },
  };
}

(globalThis as any).DotDriftWidget = { mount: mount };
