/**
 * Grid rendering: one cell per layout character plus a leading tick strip,
 * highlighted according to the server-issued pass windows.
 */

import type { Highlight } from "./loop";
import type { LayoutDict, StateView } from "./types";

export class ScanBoard {
  private rowElements: HTMLElement[] = [];
  private cellElements: HTMLElement[][] = [];
  private tickElement: HTMLElement | null = null;
  private layout: LayoutDict | null = null;

  constructor(private readonly root: HTMLElement) {}

  setLayout(layout: LayoutDict): void {
    this.layout = layout;
    this.root.textContent = "";
    this.rowElements = [];
    this.cellElements = [];

    const tick = document.createElement("div");
    tick.className = "tick-strip";
    tick.textContent = "tick";
    this.tickElement = tick;
    this.root.appendChild(tick);

    for (const rowText of layout.rows) {
      const row = document.createElement("div");
      row.className = "board-row";
      const cells: HTMLElement[] = [];
      for (const symbol of rowText) {
        const cell = document.createElement("div");
        cell.className = "board-cell";
        if (symbol === layout.delete) cell.classList.add("delete-cell");
        if (symbol === "_") cell.classList.add("space-cell");
        cell.textContent = symbol === "_" ? "␣" : symbol;
        row.appendChild(cell);
        cells.push(cell);
      }
      this.root.appendChild(row);
      this.rowElements.push(row);
      this.cellElements.push(cells);
    }
  }

  /** Light whatever `h` says is active; `view` supplies phase and row. */
  apply(h: Highlight, view: Pick<StateView, "phase" | "row"> | null): void {
    this.clearLit();
    if (this.layout === null) return;
    if (h.kind === "tick") {
      this.tickElement?.classList.add("lit");
      return;
    }
    if (h.kind !== "cell" || view === null) return;
    if (view.phase === "row") {
      this.rowElements[h.cell - 1]?.classList.add("lit");
      return;
    }
    if (view.phase === "column" && view.row != null) {
      this.cellElements[view.row - 1]?.[h.cell - 1]?.classList.add("lit");
    }
  }

  private clearLit(): void {
    this.tickElement?.classList.remove("lit");
    for (const row of this.rowElements) row.classList.remove("lit");
    for (const cells of this.cellElements) {
      for (const cell of cells) cell.classList.remove("lit");
    }
  }
}
