/**
 * Auto-refresh driver: runs the poll function every `intervalMs` while
 * enabled, with at most one poll in flight (a slow response delays the next
 * tick's work rather than stacking requests).
 *
 * Timer functions are injectable so tests can drive fake time.
 */
export interface TimerApi {
  setInterval(fn: () => void, ms: number): unknown;
  clearInterval(handle: unknown): void;
}

const realTimers: TimerApi = {
  setInterval: (fn, ms) => setInterval(fn, ms),
  clearInterval: (h) => clearInterval(h as NodeJS.Timeout),
};

export class Poller<T> {
  private handle: unknown = null;
  private inFlight = false;
  polls = 0;
  skipped = 0;
  lastResult: T | null = null;
  lastError: Error | null = null;

  constructor(
    private readonly poll: () => Promise<T>,
    private readonly intervalMs = 5000,
    private readonly timers: TimerApi = realTimers,
    private readonly onResult?: (value: T) => void,
  ) {}

  get running(): boolean {
    return this.handle !== null;
  }

  start(): void {
    if (this.handle !== null) return;
    this.handle = this.timers.setInterval(() => void this.tick(), this.intervalMs);
    void this.tick(); // immediate first poll, then the cadence
  }

  stop(): void {
    if (this.handle === null) return;
    this.timers.clearInterval(this.handle);
    this.handle = null;
  }

  async tick(): Promise<void> {
    if (this.inFlight) {
      this.skipped += 1;
      return;
    }
    this.inFlight = true;
    try {
      this.lastResult = await this.poll();
      this.lastError = null;
      this.polls += 1;
      this.onResult?.(this.lastResult);
    } catch (err) {
      this.lastError = err as Error;
      this.polls += 1;
    } finally {
      this.inFlight = false;
    }
  }
}
