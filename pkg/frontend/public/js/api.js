/** Typed client for the play server's JSON API.
 *
 * Every shape here mirrors a server response verbatim; the console never
 * derives game quantities itself.
 */
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
        this.name = "ApiError";
    }
}
async function request(url, init) {
    const res = await fetch(url, init);
    const text = await res.text();
    let body = null;
    if (text) {
        try {
            body = JSON.parse(text);
        }
        catch {
            body = null;
        }
    }
    if (!res.ok) {
        const detail = body !== null && typeof body === "object" && "error" in body
            ? String(body.error)
            : `HTTP ${res.status}`;
        throw new ApiError(res.status, detail);
    }
    return body;
}
function post(url, payload) {
    return request(url, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
    });
}
/** All endpoints, rooted at `base` ("" means same origin). */
export class Api {
    base;
    constructor(base = "") {
        this.base = base;
    }
    catalog() {
        return request(`${this.base}/api/catalog`);
    }
    evaluate(density, process, y) {
        return post(`${this.base}/api/eval`, { density, process, y });
    }
    createSession(settings) {
        return post(`${this.base}/api/session`, settings);
    }
    deal(sessionId) {
        return post(`${this.base}/api/session/${sessionId}/deal`, {});
    }
    decide(sessionId, playIndex, action) {
        return post(`${this.base}/api/session/${sessionId}/decide`, {
            play_index: playIndex,
            action,
        });
    }
    history(sessionId) {
        return request(`${this.base}/api/session/${sessionId}/history`);
    }
}
