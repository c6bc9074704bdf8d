import type { ActionRequest, ActionResponse, SessionState } from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly errorName: string,
    detail: string,
  ) {
    super(`${errorName}: ${detail}`);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client for the session service. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (response.status === 204) {
      return undefined as T;
    }
    const body = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(
        response.status,
        body.error ?? "HttpError",
        body.detail ?? JSON.stringify(body),
      );
    }
    return body as T;
  }

  createSession(
    terminals: [number, number][],
  ): Promise<{ session_id: string; state: SessionState }> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ terminals }),
    });
  }

  createSessionFromFile(
    fileText: string,
  ): Promise<{ session_id: string; state: SessionState }> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ file_text: fileText }),
    });
  }

  getState(sessionId: string): Promise<{ session_id: string; state: SessionState }> {
    return this.request(`/sessions/${sessionId}`);
  }

  postAction(sessionId: string, action: ActionRequest): Promise<ActionResponse> {
    return this.request(`/sessions/${sessionId}/actions`, {
      method: "POST",
      body: JSON.stringify(action),
    });
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request(`/sessions/${sessionId}`, { method: "DELETE" });
  }
}
