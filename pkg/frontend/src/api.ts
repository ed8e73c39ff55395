import type {
  DiffTable,
  DocumentSummary,
  MergeResponse,
  MergeSelection,
  StateSnapshot,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

/** Thin typed client for the /v1/ JSON API. Identity travels in the
 * X-User-Id header; engine errors arrive as {code, message} bodies. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly userId: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = {
      method,
      headers: {
        "X-User-Id": this.userId,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
    };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.baseUrl}/v1${path}`, init);
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(
        response.status,
        payload.code ?? "Unknown",
        payload.message ?? response.statusText,
      );
    }
    return payload as T;
  }

  listDocuments(): Promise<{ id: string; name: string }[]> {
    return this.request("GET", "/documents");
  }

  getDocument(docId: string): Promise<DocumentSummary> {
    return this.request("GET", `/documents/${docId}`);
  }

  getState(docId: string, stateId: string): Promise<StateSnapshot> {
    return this.request("GET", `/documents/${docId}/states/${stateId}`);
  }

  getDiff(docId: string, a: string, b: string): Promise<DiffTable> {
    const query = new URLSearchParams({ a, b });
    return this.request("GET", `/documents/${docId}/diff?${query}`);
  }

  merge(
    docId: string,
    targetBranch: string,
    stateA: string,
    stateB: string,
    selection: MergeSelection,
    message?: string,
  ): Promise<MergeResponse> {
    return this.request("POST", `/documents/${docId}/merge`, {
      targetBranch,
      stateA,
      stateB,
      selection,
      ...(message ? { message } : {}),
    });
  }

  acknowledge(
    docId: string,
    stateId: string,
    updateId: string,
  ): Promise<{ ok: boolean }> {
    return this.request(
      "POST",
      `/documents/${docId}/states/${stateId}/acknowledge`,
      { updateId },
    );
  }

  setReportFlag(
    docId: string,
    stateId: string,
    flag: boolean,
  ): Promise<{ ok: boolean }> {
    return this.request("POST", `/documents/${docId}/report-flag`, {
      stateId,
      flag,
    });
  }
}
