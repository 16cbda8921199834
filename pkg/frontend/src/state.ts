/** Console state and its transitions.
 *
 * State only ever changes by folding in a server response, so the view is
 * always a rendering of what the server said, never a prediction of it.
 */

import type {
  DealResponse,
  DecideResponse,
  PlayRow,
  Recommendation,
  SessionDescriptor,
  Totals,
} from "./api.js";

export interface PendingPlay {
  index: number;
  /** null while a blind session hides the amount */
  y: number | null;
  recommendation: Recommendation | null;
}

export interface ConsoleState {
  session: SessionDescriptor | null;
  pending: PendingPlay | null;
  history: PlayRow[];
  totals: Totals;
  /** totals snapshot after each decided play, drives the chart */
  series: Totals[];
  /** a request is in flight; blocks double submits */
  busy: boolean;
  error: string | null;
}

export function zeroTotals(): Totals {
  return { plays: 0, user: 0, always_switch: 0, never_switch: 0, analytic_optimal: 0 };
}

export function initialState(): ConsoleState {
  return {
    session: null,
    pending: null,
    history: [],
    totals: zeroTotals(),
    series: [],
    busy: false,
    error: null,
  };
}

// guards mirror the server's sequence rules: if one of these is false the
// server would answer 409, so the console refuses to issue the request
export function canStart(state: ConsoleState): boolean {
  return !state.busy;
}

export function canDeal(state: ConsoleState): boolean {
  return state.session !== null && state.pending === null && !state.busy;
}

export function canDecide(state: ConsoleState): boolean {
  return state.pending !== null && !state.busy;
}

/** A new session replaces everything: one session per tab. */
export function applySession(state: ConsoleState, desc: SessionDescriptor): ConsoleState {
  void state;
  return { ...initialState(), session: desc };
}

export function applyDeal(state: ConsoleState, deal: DealResponse): ConsoleState {
  return {
    ...state,
    pending: {
      index: deal.play_index,
      y: deal.y,
      recommendation: deal.recommendation ?? null,
    },
    error: null,
  };
}

export function applyDecision(state: ConsoleState, res: DecideResponse): ConsoleState {
  const { totals, ...row } = res;
  return {
    ...state,
    pending: null,
    history: [...state.history, row],
    totals,
    series: [...state.series, totals],
    error: null,
  };
}
