import { SessionItem } from "./api.js";

/** Client-side session state: items in server order, a cursor for the
 *  one-sentence-at-a-time presentation, and the judgments made so far.
 *  Judging the same item again overwrites the earlier judgment. */
export class SessionStore {
    readonly items: SessionItem[];
    private cursorIndex = 0;
    private judgments = new Map<string, boolean>();

    constructor(items: SessionItem[]) {
        this.items = items.slice();
    }

    get size(): number {
        return this.items.length;
    }

    get cursor(): number {
        return this.cursorIndex;
    }

    /** Undefined once the cursor has moved past the last item. */
    get current(): SessionItem | undefined {
        return this.items[this.cursorIndex];
    }

    judgmentFor(id: string): boolean | undefined {
        return this.judgments.get(id);
    }

    recordJudgment(id: string, isSynthetic: boolean): void {
        if (!this.items.some((item) => item.id === id)) {
            throw new Error(`unknown item ${id}`);
        }
        this.judgments.set(id, isSynthetic);
    }

    advance(): void {
        if (this.cursorIndex < this.items.length) {
            this.cursorIndex += 1;
        }
    }

    goTo(index: number): void {
        if (index < 0 || index > this.items.length) {
            throw new Error(`cursor ${index} out of range`);
        }
        this.cursorIndex = index;
    }

    get judgedCount(): number {
        return this.judgments.size;
    }

    get unjudgedCount(): number {
        return this.items.length - this.judgments.size;
    }

    get flaggedCount(): number {
        let n = 0;
        this.judgments.forEach((synthetic) => {
            if (synthetic) n += 1;
        });
        return n;
    }

    get atEnd(): boolean {
        return this.cursorIndex >= this.items.length;
    }
}
