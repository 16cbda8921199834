/** DOM rendering: state in, markup out.
 *
 * The only arithmetic here is display formatting and chart axis scaling.
 * Numeric cells carry the server's exact value in data-value so tests can
 * reconcile them without parsing display text.
 */

import type { CatalogEntry, Totals } from "./api.js";
import { canDeal, canDecide, type ConsoleState } from "./state.js";

export interface ConsoleElements {
  doc: Document;
  banner: HTMLElement;
  sessionInfo: HTMLElement;
  startButton: HTMLButtonElement;
  dealButton: HTMLButtonElement;
  playIndex: HTMLElement;
  playY: HTMLElement;
  coachBadge: HTMLElement;
  switchButton: HTMLButtonElement;
  stayButton: HTMLButtonElement;
  totalPlays: HTMLElement;
  totalUser: HTMLElement;
  totalAlways: HTMLElement;
  totalNever: HTMLElement;
  totalOptimal: HTMLElement;
  historyBody: HTMLElement;
  chart: SVGSVGElement;
}

export function bindElements(doc: Document): ConsoleElements {
  const get = <T>(id: string): T => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`console markup is missing #${id}`);
    return el as unknown as T;
  };
  return {
    doc,
    banner: get("banner"),
    sessionInfo: get("session-info"),
    startButton: get("start"),
    dealButton: get("deal"),
    playIndex: get("play-index"),
    playY: get("play-y"),
    coachBadge: get("coach-badge"),
    switchButton: get("act-switch"),
    stayButton: get("act-stay"),
    totalPlays: get("total-plays"),
    totalUser: get("total-user"),
    totalAlways: get("total-always"),
    totalNever: get("total-never"),
    totalOptimal: get("total-optimal"),
    historyBody: get("history-rows"),
    chart: get("chart"),
  };
}

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  if (x === 0) return "0";
  const mag = Math.abs(x);
  if (mag >= 1e6 || mag < 1e-4) return x.toExponential(3);
  return String(Number(x.toPrecision(6)));
}

function signed(x: number): string {
  return (x >= 0 ? "+" : "") + fmt(x);
}

export function fillDensityOptions(doc: Document, entries: CatalogEntry[]): void {
  const select = doc.getElementById("density") as HTMLSelectElement | null;
  if (!select) throw new Error("console markup is missing #density");
  select.replaceChildren();
  for (const entry of entries) {
    const option = doc.createElement("option");
    option.value = entry.name;
    // improper priors evaluate analytically but cannot be dealt from
    option.disabled = !entry.proper;
    option.textContent = entry.proper ? entry.name : `${entry.name} (analytic only)`;
    option.title = entry.description;
    select.appendChild(option);
  }
}

export function render(state: ConsoleState, els: ConsoleElements): void {
  els.banner.hidden = state.error === null;
  els.banner.textContent = state.error ?? "";

  if (state.session) {
    const modes = [state.session.blind ? "blind" : "", state.session.coach ? "coach" : ""]
      .filter(Boolean)
      .join(" + ");
    els.sessionInfo.textContent =
      `${state.session.density.name} / ${state.session.process} / seed ${state.session.seed}` +
      (modes ? ` / ${modes}` : "");
  } else {
    els.sessionInfo.textContent = "no session";
  }

  els.startButton.disabled = state.busy;
  els.dealButton.disabled = !canDeal(state);
  els.switchButton.disabled = !canDecide(state);
  els.stayButton.disabled = !canDecide(state);

  renderPlayCard(state, els);
  renderTotals(state.totals, els);
  renderHistory(state, els);
  renderChart(state, els);
}

function renderPlayCard(state: ConsoleState, els: ConsoleElements): void {
  const pending = state.pending;
  if (!pending) {
    els.playIndex.textContent = state.session ? "ready to deal" : "-";
    els.playY.textContent = "-";
    delete els.playY.dataset.value;
    els.coachBadge.hidden = true;
    return;
  }
  els.playIndex.textContent = `play ${pending.index + 1}`;
  if (pending.y === null) {
    els.playY.textContent = "(hidden)";
    delete els.playY.dataset.value;
  } else {
    els.playY.textContent = fmt(pending.y);
    els.playY.dataset.value = String(pending.y);
  }
  const rec = pending.recommendation;
  els.coachBadge.hidden = rec === null;
  if (rec) {
    els.coachBadge.dataset.decision = rec.decision;
    els.coachBadge.textContent =
      rec.expected_benefit === null
        ? rec.decision
        : `${rec.decision}, ${signed(rec.expected_benefit)} expected`;
  }
}

function renderTotals(totals: Totals, els: ConsoleElements): void {
  els.totalPlays.textContent = String(totals.plays);
  const cells: [HTMLElement, number][] = [
    [els.totalUser, totals.user],
    [els.totalAlways, totals.always_switch],
    [els.totalNever, totals.never_switch],
    [els.totalOptimal, totals.analytic_optimal],
  ];
  for (const [el, value] of cells) {
    el.textContent = fmt(value);
    el.dataset.value = String(value);
  }
}

function renderHistory(state: ConsoleState, els: ConsoleElements): void {
  els.historyBody.replaceChildren();
  for (const row of state.history) {
    const tr = els.doc.createElement("tr");
    tr.dataset.action = row.action;
    const cells = [
      String(row.play_index + 1),
      fmt(row.y),
      row.recommendation.decision,
      row.action,
      fmt(row.z),
      signed(row.b),
      signed(row.realized_gain),
    ];
    for (const text of cells) {
      const td = els.doc.createElement("td");
      td.textContent = text;
      tr.appendChild(td);
    }
    els.historyBody.appendChild(tr);
  }
}

const SVG_NS = "http://www.w3.org/2000/svg";

const SERIES: { key: Exclude<keyof Totals, "plays">; cls: string }[] = [
  { key: "user", cls: "series-user" },
  { key: "always_switch", cls: "series-always" },
  { key: "never_switch", cls: "series-never" },
  { key: "analytic_optimal", cls: "series-optimal" },
];

function renderChart(state: ConsoleState, els: ConsoleElements): void {
  const svg = els.chart;
  svg.replaceChildren();
  if (state.series.length === 0) return;

  const width = 400;
  const height = 120;
  const pad = 6;
  // every series starts at the origin so the first play draws a segment
  const points = [null, ...state.series];

  let lo = 0;
  let hi = 0;
  for (const totals of state.series) {
    for (const { key } of SERIES) {
      lo = Math.min(lo, totals[key]);
      hi = Math.max(hi, totals[key]);
    }
  }
  if (hi === lo) hi = lo + 1;

  const xAt = (i: number): number => pad + (i / (points.length - 1)) * (width - 2 * pad);
  const yAt = (v: number): number => height - pad - ((v - lo) / (hi - lo)) * (height - 2 * pad);

  const axis = els.doc.createElementNS(SVG_NS, "line");
  axis.setAttribute("x1", String(pad));
  axis.setAttribute("x2", String(width - pad));
  axis.setAttribute("y1", String(yAt(0)));
  axis.setAttribute("y2", String(yAt(0)));
  axis.setAttribute("class", "axis");
  svg.appendChild(axis);

  for (const { key, cls } of SERIES) {
    const coords = points
      .map((totals, i) => `${xAt(i)},${yAt(totals === null ? 0 : totals[key])}`)
      .join(" ");
    const line = els.doc.createElementNS(SVG_NS, "polyline");
    line.setAttribute("points", coords);
    line.setAttribute("class", cls);
    svg.appendChild(line);
  }
}
