import { ApiClient, Metrics, SessionItem } from "./api.js";
import { asPercent } from "./format.js";
import { SessionStore } from "./session.js";

export interface AppHandle {
    store: SessionStore;
    judgeCurrent(isSynthetic: boolean): Promise<void>;
    judgeItem(id: string, isSynthetic: boolean): Promise<void>;
    finish(): Promise<Metrics | undefined>;
    reload(): Promise<void>;
}

type ConfirmFn = (message: string) => boolean;

/** Wire the whole single-page app into `root`.
 *
 *  Keyboard: left arrow marks the current sentence real, right arrow marks
 *  it synthetic; both advance to the next sentence. The review list allows
 *  revisiting any item. Closing with unjudged items asks for confirmation
 *  (unjudged counts as "not flagged"). After closing, the app renders the
 *  server-computed precision/recall/F1 without recomputing anything.
 */
export function createApp(
    root: HTMLElement,
    api: ApiClient,
    confirmFn: ConfirmFn = (msg) => window.confirm(msg),
): AppHandle {
    let store = new SessionStore([]);
    let metrics: Metrics | undefined;
    let loadError: string | undefined;
    let loaded = false;

    const handle: AppHandle = {
        get store() {
            return store;
        },
        judgeCurrent,
        judgeItem,
        finish,
        reload,
    };

    async function reload(): Promise<void> {
        loadError = undefined;
        metrics = undefined;
        loaded = false;
        render();
        try {
            const payload = await api.loadSession();
            if (!payload.items.length) {
                loadError = "the server returned an empty session";
            } else {
                store = new SessionStore(payload.items);
                loaded = true;
            }
        } catch (err) {
            loadError = `could not load the session: ${String(err)}`;
        }
        render();
    }

    async function judgeItem(id: string, isSynthetic: boolean): Promise<void> {
        await api.judge(id, isSynthetic);
        store.recordJudgment(id, isSynthetic);
        if (store.current && store.current.id === id) {
            store.advance();
        }
        render();
    }

    async function judgeCurrent(isSynthetic: boolean): Promise<void> {
        const item = store.current;
        if (!item) return;
        await judgeItem(item.id, isSynthetic);
    }

    async function finish(): Promise<Metrics | undefined> {
        if (store.unjudgedCount > 0) {
            const ok = confirmFn(
                `${store.unjudgedCount} sentences are unjudged and will count ` +
                    "as not flagged. Close the session?",
            );
            if (!ok) return undefined;
        }
        metrics = await api.closeSession();
        render();
        return metrics;
    }

    function onKey(event: KeyboardEvent): void {
        if (metrics || !loaded || store.atEnd) return;
        if (event.key === "ArrowLeft") {
            void judgeCurrent(false);
        } else if (event.key === "ArrowRight") {
            void judgeCurrent(true);
        }
    }

    function el(tag: string, className: string, text?: string): HTMLElement {
        const node = root.ownerDocument.createElement(tag);
        node.className = className;
        if (text !== undefined) node.textContent = text;
        return node;
    }

    function renderMetrics(into: HTMLElement, m: Metrics): void {
        const panel = el("div", "metrics-panel");
        panel.appendChild(el("h2", "", "Session closed"));
        const table = el("div", "metrics-row");
        const cells: Array<[string, string, string]> = [
            ["precision", "Precision", asPercent(m.precision)],
            ["recall", "Recall", asPercent(m.recall)],
            ["f1", `F${m.beta === 1 ? "1" : m.beta}`, asPercent(m.f)],
        ];
        for (const [key, label, value] of cells) {
            const cell = el("div", "metric");
            cell.appendChild(el("div", "metric-label", label));
            const valueNode = el("div", "metric-value", value);
            valueNode.setAttribute("data-metric", key);
            cell.appendChild(valueNode);
            table.appendChild(cell);
        }
        panel.appendChild(table);
        panel.appendChild(
            el(
                "p",
                "metrics-note",
                `${m.tp} of your flags were truly synthetic (${m.fp} were real;` +
                    ` ${m.fn} synthetic sentences slipped past).`,
            ),
        );
        into.appendChild(panel);
    }

    function renderCard(into: HTMLElement): void {
        const item = store.current;
        const card = el("div", "card");
        if (item) {
            card.appendChild(
                el("div", "card-counter", `Sentence ${store.cursor + 1} of ${store.size}`),
            );
            const sentence = el("p", "card-text", item.text);
            sentence.setAttribute("data-item-id", item.id);
            card.appendChild(sentence);
            const controls = el("div", "card-controls");
            const realBtn = el("button", "btn-real", "Real (←)") as HTMLButtonElement;
            realBtn.addEventListener("click", () => void judgeCurrent(false));
            const synthBtn = el("button", "btn-synthetic", "Synthetic (→)") as HTMLButtonElement;
            synthBtn.addEventListener("click", () => void judgeCurrent(true));
            controls.appendChild(realBtn);
            controls.appendChild(synthBtn);
            card.appendChild(controls);
        } else {
            card.appendChild(
                el("p", "card-text", "All sentences seen. Review below or close the session."),
            );
        }
        into.appendChild(card);
    }

    function renderReview(into: HTMLElement): void {
        const review = el("ol", "review");
        store.items.forEach((item: SessionItem, index: number) => {
            const entry = el("li", "review-item");
            const judgment = store.judgmentFor(item.id);
            const state =
                judgment === undefined ? "unjudged" : judgment ? "synthetic" : "real";
            entry.classList.add(`review-${state}`);
            const link = el("a", "review-link", item.text) as HTMLAnchorElement;
            link.href = "#";
            link.addEventListener("click", (event: Event) => {
                event.preventDefault();
                store.goTo(index);
                render();
            });
            entry.appendChild(link);
            entry.appendChild(el("span", "review-state", state));
            review.appendChild(entry);
        });
        into.appendChild(review);
    }

    function render(): void {
        root.textContent = "";
        const header = el("header", "header");
        header.appendChild(el("h1", "", "Real or synthetic?"));
        header.appendChild(
            el(
                "p",
                "subtitle",
                "Flag the sentences you believe were generated by a machine.",
            ),
        );
        root.appendChild(header);

        if (loadError) {
            const banner = el("div", "error-banner");
            banner.appendChild(el("span", "", loadError));
            const retry = el("button", "btn-retry", "Retry") as HTMLButtonElement;
            retry.addEventListener("click", () => void reload());
            banner.appendChild(retry);
            root.appendChild(banner);
            return;
        }
        if (!loaded) {
            root.appendChild(el("p", "loading", "Loading session…"));
            return;
        }
        if (metrics) {
            renderMetrics(root, metrics);
            return;
        }

        renderCard(root);
        const status = el(
            "p",
            "status",
            `${store.judgedCount}/${store.size} judged, ${store.flaggedCount} flagged`,
        );
        root.appendChild(status);
        const finishBtn = el("button", "btn-finish", "Close session") as HTMLButtonElement;
        finishBtn.addEventListener("click", () => void finish());
        root.appendChild(finishBtn);
        renderReview(root);
    }

    root.ownerDocument.addEventListener("keydown", onKey as EventListener);
    render();
    return handle;
}
