/** Console state and its transitions.
 *
 * State only ever changes by folding in a server response, so the view is
 * always a rendering of what the server said, never a prediction of it.
 */
export function zeroTotals() {
    return { plays: 0, user: 0, always_switch: 0, never_switch: 0, analytic_optimal: 0 };
}
export function initialState() {
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
export function canStart(state) {
    return !state.busy;
}
export function canDeal(state) {
    return state.session !== null && state.pending === null && !state.busy;
}
export function canDecide(state) {
    return state.pending !== null && !state.busy;
}
/** A new session replaces everything: one session per tab. */
export function applySession(state, desc) {
    void state;
    return { ...initialState(), session: desc };
}
export function applyDeal(state, deal) {
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
export function applyDecision(state, res) {
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
