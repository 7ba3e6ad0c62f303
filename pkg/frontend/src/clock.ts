/**
 * Session clock: maps the browser's high-resolution time to session
 * milliseconds.  The server is the timing authority — it only advances
 * when a click or poll carries a timestamp — so pausing the clock
 * genuinely freezes the session.
 */

function hrNow(): number {
  return typeof performance !== "undefined" ? performance.now() : Date.now();
}

export class SessionClock {
  private origin = 0;
  private pausedAt: number | null = null;

  /** Restart at session time zero. */
  reset(): void {
    this.origin = hrNow();
    this.pausedAt = null;
  }

  /** Current session time in milliseconds (fractional). */
  nowMs(): number {
    const at = this.pausedAt ?? hrNow();
    return at - this.origin;
  }

  /**
   * Session time of an input event, using the event's own high-resolution
   * timestamp (same origin as performance.now) when available.
   */
  fromEvent(event: { timeStamp?: number }): number {
    if (this.pausedAt !== null) return this.nowMs();
    const stamp = event.timeStamp;
    if (typeof stamp === "number" && stamp > 0 && typeof performance !== "undefined") {
      return stamp - this.origin;
    }
    return this.nowMs();
  }

  get paused(): boolean {
    return this.pausedAt !== null;
  }

  pause(): void {
    if (this.pausedAt === null) this.pausedAt = hrNow();
  }

  resume(): void {
    if (this.pausedAt !== null) {
      this.origin += hrNow() - this.pausedAt;
      this.pausedAt = null;
    }
  }
}
