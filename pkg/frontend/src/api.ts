/** Typed client for the dictionary HTTP API.
 *
 * The UI holds no business logic: verified flags, versions and revisions
 * always come back from the server, and optimistic-concurrency conflicts
 * (HTTP 409) surface as ApiError rather than being retried.
 */

export interface LexemeRec {
  id: number;
  lemma: string;
  language: string;
  pos: string;
  contlex: string | null;
  homonym_index: number;
  verified: boolean;
  notes: string;
  external_links: { title: string; url: string }[];
  version: number;
}

export interface RelationRec {
  id: number;
  left: number;
  right: number;
  type: string;
  verified: boolean;
  sources: { source_id: number; locus: string | null; source_name: string }[];
  examples: { text: string; language: string }[];
  metadata: Record<string, string>;
  version: number;
  left_lemma: string;
  left_pos: string;
  right_lemma: string;
  right_pos: string;
}

export interface PageOf<T> {
  items: T[];
  total: number;
  page: number;
  page_size: number;
}

export interface ParadigmFormRec {
  msd: string;
  form: string | null;
  origin: "generated" | "override";
  weight: number;
}

export interface RevisionRec {
  id: number;
  entity_kind: string;
  entity_id: string;
  editor: string;
  at: string;
  kind: string;
  before: Record<string, unknown> | null;
  after: Record<string, unknown> | null;
}

export interface ApproveReport {
  approved: number;
  already: number;
  failed: { kind: string; id: number; error: string }[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public locus: string | null = null,
  ) {
    super(message);
  }
}

export class Api {
  token: string | null = null;

  constructor(
    private base: string = "",
    private fetcher: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const resp = await this.fetcher(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    const payload = text ? JSON.parse(text) : {};
    if (!resp.ok) {
      throw new ApiError(
        resp.status,
        payload.code ?? "error",
        payload.message ?? resp.statusText,
        payload.locus ?? null,
      );
    }
    return payload as T;
  }

  searchLexemes(params: URLSearchParams): Promise<PageOf<LexemeRec>> {
    return this.request("GET", `/api/lexemes?${params}`);
  }

  searchRelations(params: URLSearchParams): Promise<PageOf<RelationRec>> {
    return this.request("GET", `/api/relations?${params}`);
  }

  getLexeme(id: number): Promise<{ lexeme: LexemeRec; relations: RelationRec[] }> {
    return this.request("GET", `/api/lexemes/${id}`);
  }

  paradigm(id: number, full: boolean): Promise<{ forms: ParadigmFormRec[]; generated: boolean }> {
    return this.request("GET", `/api/lexemes/${id}/paradigm?full=${full}`);
  }

  putOverride(id: number, msd: string, form: string): Promise<unknown> {
    return this.request("PUT", `/api/lexemes/${id}/paradigm/${encodeURIComponent(msd)}`, { form });
  }

  neighbors(
    id: number,
    params: URLSearchParams,
  ): Promise<{ prev: number | null; next: number | null }> {
    return this.request("GET", `/api/lexemes/${id}/neighbors?${params}`);
  }

  approve(refs: { kind: string; id: number }[]): Promise<ApproveReport> {
    return this.request("POST", "/api/approve", refs);
  }

  history(kind: string, id: string | number): Promise<{ revisions: RevisionRec[] }> {
    return this.request("GET", `/api/history/${kind}/${id}`);
  }

  revert(revisionId: number): Promise<{ revision: RevisionRec }> {
    return this.request("POST", `/api/revert/${revisionId}`);
  }

  whoami(): Promise<{ username: string; display_name: string; role: string }> {
    return this.request("GET", "/api/whoami");
  }

  meta(): Promise<{
    languages: Record<string, { has_generator: boolean; paradigm_pos: string[] }>;
    default_language: string | null;
    relation_types: string[];
    sort_keys: string[];
  }> {
    return this.request("GET", "/api/meta");
  }
}
