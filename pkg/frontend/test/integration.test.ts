// @vitest-environment happy-dom
//
// Scripted end-to-end session against the real Python server: 100 items,
// 16 flagged (13 truly synthetic), rendered metrics must equal the
// server-side /api/results values: P 81.25 / R 26.00 / F1 39.39, and no
// payload may reveal which sentences are synthetic.
import { spawn, ChildProcess } from "node:child_process";
import { mkdtemp, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { asPercent } from "../src/format.js";
import { createApp, AppHandle } from "../src/app.js";

// the test (not the client!) recognises synthetic sentences by this marker
const MARKER = "glorbix";
const N = 50;

let server: ChildProcess;
let base: string;

async function waitForServer(url: string): Promise<void> {
    for (let i = 0; i < 200; i += 1) {
        try {
            const response = await fetch(url + "/api/session");
            if (response.ok) return;
        } catch {
            // not up yet
        }
        await new Promise((resolve) => setTimeout(resolve, 50));
    }
    throw new Error("server did not come up");
}

beforeAll(async () => {
    const dir = await mkdtemp(join(tmpdir(), "turing-ui-"));
    const real = Array.from(
        { length: N + 5 },
        (_, i) => `the calm reader number ${i} holds a letter .`,
    );
    const synthetic = Array.from(
        { length: N + 5 },
        (_, i) => `a ${MARKER} walker number ${i} drops the coin .`,
    );
    await writeFile(join(dir, "real.txt"), real.join("\n") + "\n");
    await writeFile(join(dir, "synthetic.txt"), synthetic.join("\n") + "\n");
    const port = 20000 + Math.floor(Math.random() * 20000);
    base = `http://127.0.0.1:${port}`;
    server = spawn("python3", [
        "-m", "wrongsmith", "turing", "serve",
        "--real", join(dir, "real.txt"),
        "--synthetic", join(dir, "synthetic.txt"),
        "--n", String(N),
        "--port", String(port),
        "--seed", "12",
        "--out", join(dir, "metrics.json"),
    ]);
    // the real deployment serves the UI from the same origin; mirror that
    // here so happy-dom's CORS rules treat the API as same-origin
    (window as unknown as { happyDOM: { setURL(url: string): void } }).happyDOM.setURL(base);
    await waitForServer(base);
}, 30_000);

afterAll(() => {
    server?.kill();
});

describe("turing UI integration", () => {
    let app: AppHandle;
    let root: HTMLElement;

    it("loads 100 items and the payload never leaks the key", async () => {
        const raw = await (await fetch(base + "/api/session")).text();
        expect(raw).not.toContain("synthetic");
        expect(raw).not.toContain("is_synthetic");
        expect(raw).not.toContain("key");
        const payload = JSON.parse(raw) as { items: Array<Record<string, string>> };
        expect(payload.items).toHaveLength(2 * N);
        for (const item of payload.items) {
            expect(Object.keys(item).sort()).toEqual(["id", "text"]);
        }

        root = document.createElement("main");
        document.body.appendChild(root);
        app = createApp(root, new ApiClient(base), () => true);
        await app.reload();
        expect(app.store.size).toBe(2 * N);
        expect(root.querySelectorAll(".review-item")).toHaveLength(2 * N);
    });

    it("flags 16 items (13 synthetic) via buttons and keyboard", async () => {
        // decide flags up front: first 13 synthetic + first 3 real items
        const flags = new Map<string, boolean>();
        let syntheticFlags = 0;
        let realFlags = 0;
        for (const item of app.store.items) {
            const isSynthetic = item.text.includes(MARKER);
            if (isSynthetic && syntheticFlags < 13) {
                flags.set(item.id, true);
                syntheticFlags += 1;
            } else if (!isSynthetic && realFlags < 3) {
                flags.set(item.id, true);
                realFlags += 1;
            } else {
                flags.set(item.id, false);
            }
        }

        // the first two via the arrow keys, the rest straight through the app
        for (let i = 0; i < 2; i += 1) {
            const current = app.store.current!;
            const key = flags.get(current.id) ? "ArrowRight" : "ArrowLeft";
            document.dispatchEvent(new KeyboardEvent("keydown", { key }));
            for (let tick = 0; tick < 100; tick += 1) {
                if (app.store.judgmentFor(current.id) !== undefined) break;
                await new Promise((resolve) => setTimeout(resolve, 10));
            }
            expect(app.store.judgmentFor(current.id)).toBe(flags.get(current.id));
        }
        while (!app.store.atEnd) {
            const current = app.store.current!;
            await app.judgeCurrent(flags.get(current.id)!);
        }
        expect(app.store.judgedCount).toBe(2 * N);
        expect(app.store.flaggedCount).toBe(16);
    });

    it("renders exactly the server metrics: 81.25 / 26.00 / 39.39", async () => {
        const metrics = await app.finish();
        expect(metrics).toBeDefined();

        const served = await new ApiClient(base).results();
        expect(served).toEqual(metrics);

        const read = (key: string): string =>
            root.querySelector(`[data-metric="${key}"]`)!.textContent ?? "";
        expect(read("precision")).toBe(asPercent(served.precision));
        expect(read("recall")).toBe(asPercent(served.recall));
        expect(read("f1")).toBe(asPercent(served.f));
        expect(read("precision")).toBe("81.25");
        expect(read("recall")).toBe("26.00");
        expect(read("f1")).toBe("39.39");
    });
});
