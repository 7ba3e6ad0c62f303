/**
 * Page bootstrap: the configuration form, key bindings, and the demo
 * controller.  The form state round-trips through the URL hash so a page
 * reload restores the same configuration — with the same seed, a scripted
 * replay reproduces the identical session.
 */

import { ScanApi } from "./api";
import { runScripted } from "./script";
import { Demo } from "./session";
import type { SessionConfig, SessionParams } from "./types";

const api = new ScanApi("");

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing element #${id}`);
  return found as T;
}

const demo = new Demo(api, {
  board: el("board"),
  badge: el("badge"),
  detail: el("detail"),
  counters: el("counters"),
  progress: el("progress"),
  stats: el("stats"),
  status: el("status"),
  log: el("log"),
});

// -- form ------------------------------------------------------------------

const form = {
  layout: el<HTMLSelectElement>("cfg-layout"),
  phrase: el<HTMLInputElement>("cfg-phrase"),
  mode: el<HTMLSelectElement>("cfg-mode"),
  latency: el<HTMLSelectElement>("cfg-latency"),
  engine: el<HTMLSelectElement>("cfg-engine"),
  seed: el<HTMLInputElement>("cfg-seed"),
  delta: el<HTMLInputElement>("cfg-delta"),
  sigma: el<HTMLInputElement>("cfg-sigma"),
  f: el<HTMLInputElement>("cfg-f"),
  lambda: el<HTMLInputElement>("cfg-lambda"),
  tScan: el<HTMLInputElement>("cfg-t-scan"),
  tFast: el<HTMLInputElement>("cfg-t-fast"),
  undoWindow: el<HTMLInputElement>("cfg-undo-window"),
  errorLimit: el<HTMLInputElement>("cfg-error-limit"),
  kappa: el<HTMLInputElement>("cfg-kappa"),
};

function numberOf(input: HTMLInputElement): number | undefined {
  const text = input.value.trim();
  if (text === "") return undefined;
  const value = Number(text);
  return Number.isFinite(value) ? value : undefined;
}

function configFromForm(): SessionConfig {
  const params: SessionParams = {};
  const set = (key: keyof SessionParams, value: number | undefined) => {
    if (value !== undefined) params[key] = value;
  };
  set("delta", numberOf(form.delta));
  set("sigma", numberOf(form.sigma));
  set("f", numberOf(form.f));
  set("lambda", numberOf(form.lambda));
  set("t_scan", numberOf(form.tScan));
  set("undo_window", numberOf(form.undoWindow));
  set("error_limit", numberOf(form.errorLimit));
  set("kappa", numberOf(form.kappa));

  const config: SessionConfig = {
    phrase: form.phrase.value,
    layout: form.layout.value,
    mode: form.mode.value as SessionConfig["mode"],
    latency: form.latency.value as SessionConfig["latency"],
    engine: form.engine.value as SessionConfig["engine"],
    seed: Math.trunc(numberOf(form.seed) ?? 0),
    params,
  };
  if (config.mode === "fast") {
    config.t_fast = numberOf(form.tFast) ?? 0.1;
  }
  return config;
}

function fillForm(config: SessionConfig): void {
  form.phrase.value = config.phrase;
  if (config.layout !== undefined) form.layout.value = config.layout;
  if (config.mode !== undefined) form.mode.value = config.mode;
  if (config.latency !== undefined) form.latency.value = config.latency;
  if (config.engine !== undefined) form.engine.value = config.engine;
  form.seed.value = String(config.seed ?? 0);
  const p = config.params ?? {};
  const put = (input: HTMLInputElement, value: number | undefined) => {
    if (value !== undefined) input.value = String(value);
  };
  put(form.delta, p.delta);
  put(form.sigma, p.sigma);
  put(form.f, p.f);
  put(form.lambda, p.lambda);
  put(form.tScan, p.t_scan);
  put(form.undoWindow, p.undo_window);
  put(form.errorLimit, p.error_limit);
  put(form.kappa, p.kappa);
  put(form.tFast, config.t_fast);
  syncModeFields();
}

function syncModeFields(): void {
  const fast = form.mode.value === "fast";
  el("t-fast-field").style.display = fast ? "" : "none";
}

function configToHash(config: SessionConfig): void {
  location.hash = encodeURIComponent(JSON.stringify(config));
}

function configFromHash(): SessionConfig | null {
  if (location.hash.length < 2) return null;
  try {
    const parsed = JSON.parse(decodeURIComponent(location.hash.slice(1))) as SessionConfig;
    return typeof parsed.phrase === "string" ? parsed : null;
  } catch {
    return null;
  }
}

// -- actions ----------------------------------------------------------------

const startButton = el<HTMLButtonElement>("btn-start");
const pauseButton = el<HTMLButtonElement>("btn-pause");
const scriptButton = el<HTMLButtonElement>("btn-script");
const audioToggle = el<HTMLInputElement>("cfg-audio");
const detail = el("detail");

async function start(): Promise<void> {
  const config = configFromForm();
  try {
    await demo.start(config);
    configToHash(config);
    detail.textContent = "press space (or tap the board) when the target cell lights up";
    pauseButton.textContent = "pause";
  } catch (error) {
    detail.textContent = String(error);
  }
}

async function playScripted(): Promise<void> {
  const config = configFromForm();
  scriptButton.disabled = true;
  detail.textContent = "auto-play running against the service…";
  try {
    const report = await runScripted(api, config);
    configToHash(config);
    demo.showScripted(report.statsRaw, report.logText);
    detail.textContent =
      `auto-play finished: wrote "${report.written}" with ${report.clicksSent} clicks ` +
      `(seed ${report.seed}; rerun for a byte-identical replay)`;
  } catch (error) {
    detail.textContent = String(error);
  } finally {
    scriptButton.disabled = false;
  }
}

startButton.addEventListener("click", () => void start());
scriptButton.addEventListener("click", () => void playScripted());
pauseButton.addEventListener("click", () => {
  if (demo.paused) {
    demo.resume();
    pauseButton.textContent = "pause";
  } else {
    demo.pause();
    pauseButton.textContent = "resume";
  }
});
audioToggle.addEventListener("change", () => demo.audio.setEnabled(audioToggle.checked));
form.mode.addEventListener("change", syncModeFields);

document.addEventListener("keydown", (event) => {
  if (event.code !== "Space" || event.repeat) return;
  const target = event.target as HTMLElement | null;
  if (target !== null && (target.tagName === "INPUT" || target.tagName === "SELECT")) return;
  event.preventDefault();
  demo.press(event);
});
el("board").addEventListener("pointerdown", (event) => demo.press(event));

// -- boot --------------------------------------------------------------------

async function boot(): Promise<void> {
  try {
    const { layouts } = await api.layouts();
    form.layout.textContent = "";
    for (const layout of layouts) {
      const option = document.createElement("option");
      option.value = layout.name;
      option.textContent = `${layout.name} (${layout.rows.join(" / ")})`;
      form.layout.appendChild(option);
    }
  } catch (error) {
    detail.textContent = `service unreachable: ${String(error)}`;
    startButton.disabled = true;
    scriptButton.disabled = true;
    return;
  }
  const remembered = configFromHash();
  if (remembered !== null) fillForm(remembered);
  syncModeFields();
}

void boot();
