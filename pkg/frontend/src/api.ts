export interface SessionItem {
    id: string;
    text: string;
}

export interface SessionPayload {
    items: SessionItem[];
}

export interface Metrics {
    precision: number;
    recall: number;
    f: number;
    beta: number;
    tp: number;
    fp: number;
    fn: number;
}

export class ApiError extends Error {
    constructor(public status: number, message: string) {
        super(message);
    }
}

/** Thin client over the four session endpoints; the server owns all state
 *  and all metric computation. */
export class ApiClient {
    constructor(private baseUrl: string = "") {}

    async loadSession(): Promise<SessionPayload> {
        return (await this.get("/api/session")) as SessionPayload;
    }

    async judge(id: string, synthetic: boolean): Promise<void> {
        await this.post("/api/judgment", { id, synthetic });
    }

    async closeSession(): Promise<Metrics> {
        return (await this.post("/api/close", {})) as Metrics;
    }

    async results(): Promise<Metrics> {
        return (await this.get("/api/results")) as Metrics;
    }

    private async get(path: string): Promise<unknown> {
        const response = await fetch(this.baseUrl + path);
        if (!response.ok) {
            throw new ApiError(response.status, `GET ${path} -> ${response.status}`);
        }
        return response.json();
    }

    private async post(path: string, body: unknown): Promise<unknown> {
        const response = await fetch(this.baseUrl + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        if (!response.ok) {
            throw new ApiError(response.status, `POST ${path} -> ${response.status}`);
        }
        if (response.status === 204) {
            return undefined;
        }
        return response.json();
    }
}
