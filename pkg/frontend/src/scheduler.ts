// Debounced, latest-wins request scheduling: while the user drags a weight
// we coalesce edits for a beat, and at most one request is ever in flight.

export const DEBOUNCE_MS = 150;

export class WhatIfScheduler {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  requestCount = 0;

  constructor(
    private readonly send: (signal: AbortSignal) => Promise<void>,
    private readonly delayMs: number = DEBOUNCE_MS,
  ) {}

  schedule(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire();
    }, this.delayMs);
  }

  fireNow(): Promise<void> {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    return this.fire();
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.controller?.abort();
    this.controller = null;
  }

  private async fire(): Promise<void> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    this.requestCount += 1;
    try {
      await this.send(controller.signal);
    } catch (err) {
      if ((err as Error)?.name !== "AbortError") throw err;
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }
}
