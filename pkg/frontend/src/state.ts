/** Search-page state: the query form, the current rows, and the selection
 * used by bulk approving mode. The selection invariant — selected rows are
 * always a subset of the rows on the current page — is enforced here, not
 * in the views.
 */

export type SearchTarget = "lexemes" | "relations";

export interface SearchForm {
  target: SearchTarget;
  lemma: string;
  mode: "exact" | "substring" | "regex";
  language: string;
  pos: string;
  verified: "" | "true" | "false";
  sort: "lemma" | "assonance" | "consonance" | "ending";
  desc: boolean;
  page: number;
  pageSize: number;
}

export function emptyForm(target: SearchTarget = "lexemes"): SearchForm {
  return {
    target,
    lemma: "",
    mode: "exact",
    language: "",
    pos: "",
    verified: "",
    sort: "lemma",
    desc: false,
    page: 1,
    pageSize: 50,
  };
}

/** Query params understood by /api/lexemes and /api/export/csv; relation
 * search uses `left` for the lemma pattern instead. */
export function formToParams(form: SearchForm, paging = true): URLSearchParams {
  const params = new URLSearchParams();
  if (form.lemma) params.set(form.target === "relations" ? "left" : "lemma", form.lemma);
  if (form.mode !== "exact") params.set("mode", form.mode);
  if (form.language) params.set("language", form.language);
  if (form.pos) params.set("pos", form.pos);
  if (form.verified) params.set("verified", form.verified);
  if (form.sort !== "lemma") params.set("sort", form.sort);
  if (form.desc) params.set("desc", "true");
  if (paging) {
    params.set("page", String(form.page));
    params.set("page_size", String(form.pageSize));
  }
  return params;
}

export function paramsToForm(params: URLSearchParams, target: SearchTarget = "lexemes"): SearchForm {
  const form = emptyForm(target);
  form.lemma = params.get(target === "relations" ? "left" : "lemma") ?? "";
  const mode = params.get("mode");
  if (mode === "substring" || mode === "regex") form.mode = mode;
  form.language = params.get("language") ?? "";
  form.pos = params.get("pos") ?? "";
  const verified = params.get("verified");
  if (verified === "true" || verified === "false") form.verified = verified;
  const sort = params.get("sort");
  if (sort === "assonance" || sort === "consonance" || sort === "ending") form.sort = sort;
  form.desc = params.get("desc") === "true";
  form.page = Math.max(1, Number(params.get("page") ?? "1") || 1);
  form.pageSize = Math.max(1, Number(params.get("page_size") ?? "50") || 50);
  return form;
}

export class Selection {
  private ids = new Set<number>();
  private pageIds = new Set<number>();

  /** Call whenever the visible page changes; prunes stale selections. */
  setPage(rowIds: number[]): void {
    this.pageIds = new Set(rowIds);
    for (const id of [...this.ids]) {
      if (!this.pageIds.has(id)) this.ids.delete(id);
    }
  }

  toggle(id: number, on?: boolean): void {
    if (!this.pageIds.has(id)) return;
    const want = on ?? !this.ids.has(id);
    if (want) this.ids.add(id);
    else this.ids.delete(id);
  }

  selectAllOnPage(): void {
    this.ids = new Set(this.pageIds);
  }

  clear(): void {
    this.ids.clear();
  }

  has(id: number): boolean {
    return this.ids.has(id);
  }

  selected(): number[] {
    return [...this.ids].sort((a, b) => a - b);
  }

  get size(): number {
    return this.ids.size;
  }
}
