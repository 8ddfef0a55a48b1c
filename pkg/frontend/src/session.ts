/**
 * Keyboard-driven review loop over one verification queue.
 *
 * The session is a small state machine; keystrokes only do anything in
 * the "showing" state, so a key held down or pressed twice while a
 * verdict is in flight cannot double-post.  Each acknowledged verdict
 * advances to the next leased item automatically.
 *
 * Key map (mirrors the on-screen legend):
 *   Enter  accept the proposal as shown
 *   1      accept the top-ranked candidate (always the proposal)
 *   2..9   correct: choose that slot from the ranked alternatives
 *   x / X  reject the proposal outright
 */

import { ApiError, Client, Item, QueueStats, Verdict, VerdictAck } from "./api.js";

export type SessionState =
  | "idle"
  | "loading"
  | "showing"
  | "submitting"
  | "drained"
  | "error";

export interface SessionEvents {
  onItem?: (item: Item) => void;
  onDrained?: () => void;
  onSubmitted?: (ack: VerdictAck) => void;
  onStats?: (stats: QueueStats) => void;
  onError?: (error: Error) => void;
}

/** What a keystroke resolved to; "ignored" covers every inactive case. */
export type KeyOutcome = "ignored" | "accepted" | "rejected" | "corrected";

export class Session {
  readonly queueId: string;
  private readonly client: Client;
  private readonly events: SessionEvents;
  private _state: SessionState = "idle";
  private _item: Item | null = null;
  private visit = 0;
  private idempotencyKey = "";

  constructor(client: Client, queueId: string, events: SessionEvents = {}) {
    this.client = client;
    this.queueId = queueId;
    this.events = events;
  }

  get state(): SessionState {
    return this._state;
  }

  get item(): Item | null {
    return this._item;
  }

  /** Fetch stats and lease the first item. */
  async start(): Promise<void> {
    await this.refreshStats();
    await this.advance();
  }

  /**
   * Handle one keystroke.  Returns what happened so callers can react,
   * but all state changes are also published through the event hooks.
   */
  async handleKey(key: string): Promise<KeyOutcome> {
    if (this._state !== "showing" || this._item === null) {
      return "ignored";
    }
    if (key === "Enter" || key === "1") {
      return this.submit("accept", null, "accepted");
    }
    if (key === "x" || key === "X") {
      return this.submit("reject", null, "rejected");
    }
    if (key >= "2" && key <= "9") {
      const slot = Number(key) - 1;
      const choice = this._item.payload.alternatives[slot];
      if (choice === undefined) {
        return "ignored";
      }
      return this.submit("correct", choice.id, "corrected");
    }
    return "ignored";
  }

  private async submit(
    verdict: Verdict,
    corrected: string | null,
    outcome: KeyOutcome,
  ): Promise<KeyOutcome> {
    const item = this._item;
    if (item === null) {
      return "ignored";
    }
    this._state = "submitting";
    try {
      const ack = await this.client.submitVerdict(
        item.item_id, verdict, corrected, this.idempotencyKey,
      );
      this.events.onSubmitted?.(ack);
    } catch (error) {
      // Leave the item on screen so the verifier can retry; the same
      // idempotency key keeps an invisible double-delivery harmless.
      this._state = "showing";
      this.events.onError?.(asError(error));
      return "ignored";
    }
    await this.refreshStats();
    await this.advance();
    return outcome;
  }

  private async advance(): Promise<void> {
    this._state = "loading";
    let item: Item | null;
    try {
      item = await this.client.nextItem(this.queueId);
    } catch (error) {
      this._state = "error";
      this._item = null;
      this.events.onError?.(asError(error));
      return;
    }
    if (item === null) {
      this._state = "drained";
      this._item = null;
      this.events.onDrained?.();
      return;
    }
    this._item = item;
    this.visit += 1;
    this.idempotencyKey = `${item.item_id}#v${this.visit}`;
    this._state = "showing";
    this.events.onItem?.(item);
  }

  /** Stats are cosmetic; a failed refresh never interrupts reviewing. */
  private async refreshStats(): Promise<void> {
    try {
      const stats = await this.client.stats(this.queueId);
      this.events.onStats?.(stats);
    } catch {
      // Ignore: the next successful refresh repaints the counters.
    }
  }
}

function asError(error: unknown): Error {
  if (error instanceof Error) {
    return error;
  }
  return new ApiError(0, String(error));
}
