/** Console wiring: one session per tab, no optimistic updates.
 *
 * Every user action runs on a single promise chain; each step issues at
 * most one request and folds the response into state before rendering.
 * Guards reject invalid actions client-side before any request is made,
 * mirroring the server's own sequence rules.
 */
import { Api, ApiError } from "./api.js";
import { applyDeal, applyDecision, applySession, canStart, initialState, } from "./state.js";
import { bindElements, fillDensityOptions, render } from "./render.js";
function failureText(exc) {
    if (exc instanceof ApiError)
        return exc.message;
    if (exc instanceof Error)
        return `network error: ${exc.message} (retry)`;
    return String(exc);
}
function readSettings(doc) {
    const field = (id) => doc.getElementById(id);
    const seed = Number.parseInt(field("seed").value, 10);
    return {
        density: field("density").value,
        process: field("process").value,
        seed: Number.isNaN(seed) ? 0 : seed,
        blind: field("blind").checked,
        coach: field("coach").checked,
    };
}
export function initConsole(opts = {}) {
    const doc = opts.doc ?? document;
    const api = new Api(opts.base ?? "");
    const els = bindElements(doc);
    let state = initialState();
    let chain = Promise.resolve();
    const update = (next) => {
        state = next;
        render(state, els);
    };
    // tasks never reject: failures land in state.error, so the chain lives on
    const enqueue = (task) => {
        chain = chain.then(task);
        return chain;
    };
    const loadCatalog = () => enqueue(async () => {
        try {
            const { densities } = await api.catalog();
            fillDensityOptions(doc, densities);
        }
        catch (exc) {
            update({ ...state, error: failureText(exc) });
        }
    });
    const startSession = (settings) => enqueue(async () => {
        if (!canStart(state))
            return;
        update({ ...state, busy: true });
        try {
            const desc = await api.createSession(settings);
            update(applySession(state, desc));
        }
        catch (exc) {
            update({ ...state, busy: false, error: failureText(exc) });
        }
    });
    const deal = () => enqueue(async () => {
        if (state.busy)
            return;
        if (state.session === null) {
            update({ ...state, error: "start a session first" });
            return;
        }
        if (state.pending !== null) {
            // the server would answer 409; refuse without a request
            update({ ...state, error: "decide the pending play first" });
            return;
        }
        const sid = state.session.id;
        update({ ...state, busy: true });
        try {
            const dealt = await api.deal(sid);
            update({ ...applyDeal(state, dealt), busy: false });
        }
        catch (exc) {
            update({ ...state, busy: false, error: failureText(exc) });
        }
    });
    const decide = (action) => enqueue(async () => {
        if (state.busy)
            return;
        if (state.session === null || state.pending === null) {
            update({ ...state, error: "deal a play first" });
            return;
        }
        const sid = state.session.id;
        const playIndex = state.pending.index;
        update({ ...state, busy: true });
        try {
            const res = await api.decide(sid, playIndex, action);
            update({ ...applyDecision(state, res), busy: false });
        }
        catch (exc) {
            update({ ...state, busy: false, error: failureText(exc) });
        }
    });
    const form = doc.getElementById("session-form");
    if (form) {
        form.addEventListener("submit", (ev) => {
            ev.preventDefault();
            void startSession(readSettings(doc));
        });
    }
    els.dealButton.addEventListener("click", () => void deal());
    els.switchButton.addEventListener("click", () => void decide("switch"));
    els.stayButton.addEventListener("click", () => void decide("stay"));
    render(state, els);
    return {
        api,
        els,
        state: () => state,
        loadCatalog,
        startSession,
        deal,
        decide,
        idle: () => chain,
    };
}
// boot in a real browser tab; tests construct the console explicitly
const autoRoot = typeof document === "undefined" ? null : document.getElementById("envlab-console");
if (autoRoot?.hasAttribute("data-autoinit")) {
    const handle = initConsole();
    void handle.loadCatalog();
}
