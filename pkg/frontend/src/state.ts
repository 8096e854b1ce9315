import type { ComputeResponse, PinnedOutcome, PinResult, Stage } from "./types.js";

/** Anything that can answer a POST /compute — the real ApiClient in the
 * browser, a stub in tests. */
export interface ComputeTransport {
  compute(pins: readonly PinnedOutcome[]): Promise<ComputeResponse>;
}

/** Injected timer so tests can drive the debounce deterministically. */
export interface Scheduler {
  set(fn: () => void, ms: number): unknown;
  clear(handle: unknown): void;
}

const timerScheduler: Scheduler = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

export interface ViewSnapshot {
  /** Most recent successful /compute response; everything displayed —
   * probabilities, deltas, the pin list — is read from here verbatim. */
  shown: ComputeResponse | null;
  /** The no-pins response captured at startup. */
  baseline: ComputeResponse | null;
  /** Pin set queued for the next send (drafts are not displayed as state;
   * the pin set shown to the user is always shown.overrides). */
  draft: readonly PinnedOutcome[];
  busy: boolean;
  error: string | null;
  canRetry: boolean;
}

type Listener = (snapshot: ViewSnapshot) => void;

/** Client-side view state.
 *
 * One compute request is in flight at a time.  Pin toggles reset a short
 * debounce timer; when it fires the full draft pin set is POSTed.  Toggles
 * that land while a request is running are sent afterwards in one superseding
 * request.  A failed send rolls the draft back to the last pin set the server
 * accepted, so the view never drifts from the most recent successful
 * response. */
export class ViewStore {
  private draftPins: PinnedOutcome[] = [];
  private goodPins: PinnedOutcome[] = [];
  private shownResponse: ComputeResponse | null = null;
  private baselineResponse: ComputeResponse | null = null;
  private inFlight = false;
  private timer: unknown = null;
  private lastError: string | null = null;
  private failedPins: PinnedOutcome[] | null = null;
  private listeners: Listener[] = [];

  constructor(
    private readonly transport: ComputeTransport,
    private readonly debounceMs: number = 150,
    private readonly scheduler: Scheduler = timerScheduler,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((fn) => fn !== listener);
    };
  }

  snapshot(): ViewSnapshot {
    return {
      shown: this.shownResponse,
      baseline: this.baselineResponse,
      draft: this.draftPins.slice(),
      busy: this.inFlight,
      error: this.lastError,
      canRetry: this.failedPins !== null,
    };
  }

  /** Fetch the no-pins baseline; must complete before toggles are useful. */
  async init(): Promise<void> {
    await this.send([]);
    this.baselineResponse = this.shownResponse;
    this.emit();
  }

  /** Add, replace, or remove a pin, then schedule a send.  Toggling a
   * fixture to the outcome it is already pinned to removes the pin. */
  togglePin(stage: Stage, teamA: string, teamB: string, result: PinResult): void {
    if (stage === "knockout" && result === "draw") {
      throw new Error("knockout fixtures cannot be pinned as draws");
    }
    this.draftPins = mergeTogglePins(this.draftPins, {
      stage,
      team_a: teamA,
      team_b: teamB,
      result,
    });
    this.lastError = null;
    this.failedPins = null;
    this.bump(this.debounceMs);
    this.emit();
  }

  clearPins(): void {
    this.draftPins = [];
    this.lastError = null;
    this.failedPins = null;
    this.bump(this.debounceMs);
    this.emit();
  }

  /** Re-send the pin set whose request failed. */
  retry(): void {
    if (this.failedPins !== null) {
      this.draftPins = this.failedPins;
      this.failedPins = null;
      this.lastError = null;
    }
    this.bump(0);
    this.emit();
  }

  private bump(ms: number): void {
    if (this.timer !== null) {
      this.scheduler.clear(this.timer);
    }
    this.timer = this.scheduler.set(() => {
      this.timer = null;
      void this.pump();
    }, ms);
  }

  private async pump(): Promise<void> {
    if (this.inFlight) {
      return; // the running request's completion re-pumps
    }
    if (this.shownResponse !== null && samePins(this.draftPins, this.goodPins)) {
      return; // nothing new to send
    }
    await this.send(this.draftPins.slice());
  }

  private async send(pins: PinnedOutcome[]): Promise<void> {
    this.inFlight = true;
    this.emit();
    try {
      const response = await this.transport.compute(pins);
      this.shownResponse = response;
      this.goodPins = pins;
      this.lastError = null;
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
      this.failedPins = pins;
      if (samePins(this.draftPins, pins)) {
        this.draftPins = this.goodPins.slice(); // roll back
      }
    } finally {
      this.inFlight = false;
      this.emit();
    }
    if (!samePins(this.draftPins, this.goodPins)) {
      await this.pump(); // supersede: newer toggles arrived while we ran
    }
  }

  private emit(): void {
    const snapshot = this.snapshot();
    for (const listener of this.listeners) {
      listener(snapshot);
    }
  }
}

/** Fixture identity ignores orientation: stage plus the unordered pair. */
function fixtureKey(pin: PinnedOutcome): string {
  const names = [pin.team_a, pin.team_b].sort();
  return `${pin.stage}|${names[0]}|${names[1]}`;
}

/** What a pin means, independent of orientation: the winner's name, or
 * "draw". */
function pinMeaning(pin: PinnedOutcome): string {
  if (pin.result === "draw") {
    return "draw";
  }
  return pin.result === "a_wins" ? pin.team_a : pin.team_b;
}

/** Apply one toggle to a pin set: a repeat of the same outcome removes the
 * pin, a different outcome for the same fixture replaces it, anything else
 * appends. */
export function mergeTogglePins(
  pins: readonly PinnedOutcome[],
  pin: PinnedOutcome,
): PinnedOutcome[] {
  const index = pins.findIndex((p) => fixtureKey(p) === fixtureKey(pin));
  if (index === -1) {
    return [...pins, pin];
  }
  const next = pins.slice();
  if (pinMeaning(next[index]) === pinMeaning(pin)) {
    next.splice(index, 1);
  } else {
    next[index] = pin;
  }
  return next;
}

export function samePins(
  a: readonly PinnedOutcome[],
  b: readonly PinnedOutcome[],
): boolean {
  if (a.length !== b.length) {
    return false;
  }
  return a.every(
    (pin, i) =>
      pin.stage === b[i].stage &&
      pin.team_a === b[i].team_a &&
      pin.team_b === b[i].team_b &&
      pin.result === b[i].result,
  );
}
