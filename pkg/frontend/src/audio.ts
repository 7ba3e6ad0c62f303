/**
 * Optional audio tick.  Browsers gate audio behind a user gesture, so the
 * context is created lazily when the user enables the checkbox; the visual
 * highlight stays the primary cue.
 */

export class TickAudio {
  private context: AudioContext | null = null;
  enabled = false;

  setEnabled(on: boolean): void {
    this.enabled = on;
    if (on && this.context === null && typeof AudioContext !== "undefined") {
      this.context = new AudioContext();
    }
    if (on) void this.context?.resume();
  }

  /** A short soft blip, slightly higher for the tick cell. */
  blip(isTick: boolean): void {
    if (!this.enabled || this.context === null) return;
    const ctx = this.context;
    const osc = ctx.createOscillator();
    const gain = ctx.createGain();
    osc.frequency.value = isTick ? 880 : 660;
    gain.gain.setValueAtTime(0.08, ctx.currentTime);
    gain.gain.exponentialRampToValueAtTime(0.0001, ctx.currentTime + 0.06);
    osc.connect(gain).connect(ctx.destination);
    osc.start();
    osc.stop(ctx.currentTime + 0.07);
  }
}
