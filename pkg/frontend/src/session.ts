/**
 * Demo controller: owns one live session and wires the clock, highlight
 * loop, board, feedback, and stats panel together.  The browser only
 * measures local keypress times and reports them; all outcomes, noise,
 * and statistics come back from the service.
 */

import { ClickQueue, ScanApi } from "./api";
import { TickAudio } from "./audio";
import { ScanBoard } from "./board";
import { SessionClock } from "./clock";
import { FeedbackPanel } from "./feedback";
import { HighlightLoop, type Highlight } from "./loop";
import { StatsPanel } from "./stats";
import type { SessionConfig, SessionInfo, StateView } from "./types";

export interface DemoElements {
  board: HTMLElement;
  badge: HTMLElement;
  detail: HTMLElement;
  counters: HTMLElement;
  progress: HTMLElement;
  stats: HTMLElement;
  status: HTMLElement;
  log: HTMLElement;
}

export class Demo {
  private readonly clock = new SessionClock();
  private readonly board: ScanBoard;
  private readonly feedback: FeedbackPanel;
  private readonly statsPanel: StatsPanel;
  private readonly loop: HighlightLoop;
  readonly audio = new TickAudio();

  private info: SessionInfo | null = null;
  private config: SessionConfig | null = null;
  private queue: ClickQueue | null = null;
  private view: StateView | null = null;
  private polling = false;
  private statsShown = false;

  constructor(
    private readonly api: ScanApi,
    private readonly elements: DemoElements,
  ) {
    this.board = new ScanBoard(elements.board);
    this.feedback = new FeedbackPanel(
      elements.badge,
      elements.detail,
      elements.counters,
      elements.progress,
    );
    this.statsPanel = new StatsPanel(elements.stats);
    this.loop = new HighlightLoop(() => this.clock.nowMs(), {
      onHighlight: (h) => this.onHighlight(h),
      onStale: (now) => void this.poll(now),
    });
  }

  get active(): boolean {
    return this.info !== null && this.view !== null && !this.view.done;
  }

  get currentConfig(): SessionConfig | null {
    return this.config;
  }

  async start(config: SessionConfig): Promise<SessionInfo> {
    this.loop.stop();
    const info = await this.api.createSession(config);
    this.info = info;
    this.config = config;
    this.queue = new ClickQueue(this.api, info.id);
    this.view = info.state;
    this.statsShown = false;
    this.feedback.reset();
    this.board.setLayout(info.layout);
    this.feedback.showProgress(info.phrase, info.state);
    this.statsPanel.renderRaw(null);
    this.elements.log.textContent = "";
    this.elements.status.textContent =
      `session ${info.id.slice(0, 8)} · ${info.mode} scan · ` +
      `${info.latency} decode · ${info.engine} engine · seed ${info.seed}`;
    this.clock.reset();
    this.loop.start(info.state);
    return info;
  }

  /** Register a switch press observed at the given input event. */
  press(event: { timeStamp?: number }): void {
    if (!this.active || this.queue === null || this.clock.paused) return;
    const tMs = this.clock.fromEvent(event);
    void this.queue
      .send(tMs)
      .then((result) => {
        this.feedback.showClick(result);
        this.absorb(result.state);
      })
      .catch((error) => {
        this.elements.detail.textContent = String(error);
      });
  }

  pause(): void {
    this.clock.pause();
  }

  resume(): void {
    this.clock.resume();
  }

  get paused(): boolean {
    return this.clock.paused;
  }

  private onHighlight(h: Highlight): void {
    this.board.apply(h, this.view);
    if (h.kind === "tick" || h.kind === "cell") this.audio.blip(h.kind === "tick");
  }

  private async poll(nowMs: number): Promise<void> {
    if (this.info === null || this.polling) return;
    this.polling = true;
    try {
      const view = await this.api.state(this.info.id, nowMs);
      this.absorb(view);
    } catch (error) {
      this.elements.detail.textContent = String(error);
    } finally {
      this.polling = false;
    }
  }

  /** Take a fresh server view: progress, notes, loop state, completion. */
  private absorb(view: StateView): void {
    this.view = view;
    if (this.info !== null) this.feedback.showProgress(this.info.phrase, view);
    if (view.applied !== undefined && view.applied.length > 0) {
      this.feedback.applyNotes(view.applied);
    }
    this.loop.update(view);
    const wordEnded = view.applied?.some((n) => n.kind === "word-end") ?? false;
    if ((view.done || wordEnded) && !this.statsShown) {
      void this.refreshStats(view.done);
    }
  }

  private async refreshStats(final: boolean): Promise<void> {
    if (this.info === null) return;
    const raw = await this.api.statsRaw(this.info.id);
    this.statsPanel.renderRaw(raw);
    if (final) {
      this.statsShown = true;
      this.elements.log.textContent = await this.api.logText(this.info.id);
    }
  }

  /** Show a finished scripted run's results in the same panels. */
  showScripted(statsRaw: string | null, logText: string): void {
    this.statsPanel.renderRaw(statsRaw);
    this.elements.log.textContent = logText;
  }
}
