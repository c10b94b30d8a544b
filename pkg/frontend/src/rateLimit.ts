/**
 * Gesture coalescing for slider drags.
 *
 * A drag fires dozens of input events per second; the protocol budget
 * is 30 messages/s. The limiter sends the first value immediately,
 * then at most one per interval, always ending on the newest value
 * (trailing send), so the server never misses where the slider landed.
 */

export interface Clock {
  now(): number;
  setTimeout(fn: () => void, ms: number): unknown;
  clearTimeout(handle: unknown): void;
}

export const systemClock: Clock = {
  now: () => Date.now(),
  setTimeout: (fn, ms) => setTimeout(fn, ms),
  clearTimeout: (handle) => clearTimeout(handle as Parameters<typeof clearTimeout>[0]),
};

export interface RateLimited<T> {
  push(value: T): void;
  /** Send any held trailing value now and cancel the timer. */
  flush(): void;
}

export function rateLimiter<T>(
  send: (value: T) => void,
  maxPerSecond: number,
  clock: Clock = systemClock,
): RateLimited<T> {
  const interval = 1000 / maxPerSecond;
  let lastSent = -Infinity;
  let held: { value: T } | null = null;
  let timer: unknown = null;

  const fire = (value: T) => {
    lastSent = clock.now();
    send(value);
  };

  const onTimer = () => {
    timer = null;
    if (held !== null) {
      const { value } = held;
      held = null;
      fire(value);
    }
  };

  return {
    push(value: T) {
      const wait = lastSent + interval - clock.now();
      if (wait <= 0 && timer === null) {
        fire(value);
        return;
      }
      held = { value };
      if (timer === null) {
        timer = clock.setTimeout(onTimer, Math.max(wait, 0));
      }
    },
    flush() {
      if (timer !== null) {
        clock.clearTimeout(timer);
        timer = null;
      }
      if (held !== null) {
        const { value } = held;
        held = null;
        fire(value);
      }
    },
  };
}
