import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { Poller, type TimerApi } from '../src/poller.js';

const fakeTimers: TimerApi = {
  setInterval: (fn, ms) => setInterval(fn, ms),
  clearInterval: (h) => clearInterval(h as NodeJS.Timeout),
};

describe('poller', () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it('polls immediately and then on the 5 s cadence', async () => {
    const poll = vi.fn(async () => 'state');
    const poller = new Poller(poll, 5000, fakeTimers);
    poller.start();
    await vi.advanceTimersByTimeAsync(0);
    expect(poll).toHaveBeenCalledTimes(1);

    await vi.advanceTimersByTimeAsync(15_000);
    expect(poll).toHaveBeenCalledTimes(4); // immediate + 3 ticks
    expect(poller.lastResult).toBe('state');
  });

  it('stops polling when turned off', async () => {
    const poll = vi.fn(async () => null);
    const poller = new Poller(poll, 5000, fakeTimers);
    poller.start();
    await vi.advanceTimersByTimeAsync(5000);
    poller.stop();
    const before = poll.mock.calls.length;
    await vi.advanceTimersByTimeAsync(20_000);
    expect(poll).toHaveBeenCalledTimes(before);
    expect(poller.running).toBe(false);
  });

  it('never stacks polls: a slow response skips ticks instead', async () => {
    let release: (() => void) | null = null;
    const poll = vi.fn(
      () => new Promise<void>((resolve) => { release = resolve; }),
    );
    const poller = new Poller(poll, 5000, fakeTimers);
    poller.start();
    await vi.advanceTimersByTimeAsync(0);
    await vi.advanceTimersByTimeAsync(12_000); // two ticks while in flight
    expect(poll).toHaveBeenCalledTimes(1);
    expect(poller.skipped).toBe(2);

    release!();
    await vi.advanceTimersByTimeAsync(5000);
    expect(poll).toHaveBeenCalledTimes(2);
  });

  it('records errors and keeps going', async () => {
    let calls = 0;
    const poll = vi.fn(async () => {
      calls += 1;
      if (calls === 1) throw new Error('backend down');
      return 'recovered';
    });
    const poller = new Poller(poll, 5000, fakeTimers);
    poller.start();
    await vi.advanceTimersByTimeAsync(0);
    expect(poller.lastError?.message).toBe('backend down');
    await vi.advanceTimersByTimeAsync(5000);
    expect(poller.lastResult).toBe('recovered');
    expect(poller.lastError).toBeNull();
    poller.stop();
  });
});
