/** Advanced search page for lexemes and relations.
 *
 * Verified rows render with the `verified` class (light green). Bulk
 * approving mode adds per-row checkboxes and an approve-selected action;
 * after the server confirms, the page refetches the same query so every
 * verified flag on screen is server-assigned — no page reload. The
 * download button exports the entire current query as CSV / checklist.
 */

import { ApiError, LexemeRec, RelationRec } from "../api.js";
import { clear, el } from "../dom.js";
import { t } from "../i18n.js";
import { Selection, SearchForm, SearchTarget, formToParams, paramsToForm } from "../state.js";
import { Deps } from "./deps.js";

export interface SearchPageHandle {
  root: HTMLElement;
  form: SearchForm;
  selection: Selection;
  bulkMode: boolean;
  refresh(): Promise<void>;
  approveSelected(): Promise<void>;
  toggleBulkMode(): void;
  rowElements(): HTMLTableRowElement[];
}

export async function createSearchPage(
  deps: Deps,
  params: URLSearchParams,
  target: SearchTarget = "lexemes",
): Promise<SearchPageHandle> {
  const form = paramsToForm(params, target);
  const selection = new Selection();
  const root = el("section", { class: "search-page" });
  const banner = el("div", { class: "banner hidden" });
  const formBox = el("form", { class: "search-form" });
  const results = el("div", { class: "results" });
  root.append(el("h2", {}, t("search.title")), banner, formBox, results);

  let rows: (LexemeRec | RelationRec)[] = [];
  let total = 0;

  const handle: SearchPageHandle = {
    root,
    form,
    selection,
    bulkMode: false,
    refresh,
    approveSelected,
    toggleBulkMode() {
      handle.bulkMode = !handle.bulkMode;
      selection.clear();
      renderResults();
    },
    rowElements() {
      return [...results.querySelectorAll("tbody tr")] as HTMLTableRowElement[];
    },
  };

  function showBanner(text: string, kind: "error" | "ok"): void {
    banner.textContent = text;
    banner.className = `banner ${kind}`;
  }

  function hideBanner(): void {
    banner.className = "banner hidden";
  }

  function input(name: string, value: string, label: string): HTMLElement {
    return el(
      "label",
      { class: "field" },
      label,
      el("input", { name, value, onchange: readForm, type: "text" }),
    );
  }

  function select(name: string, value: string, label: string, options: [string, string][]): HTMLElement {
    const sel = el("select", { name, onchange: readForm });
    for (const [optValue, optLabel] of options) {
      const opt = el("option", { value: optValue }, optLabel);
      if (optValue === value) opt.setAttribute("selected", "");
      sel.append(opt);
    }
    return el("label", { class: "field" }, label, sel);
  }

  function readForm(): void {
    const data = new FormData(formBox as HTMLFormElement);
    form.lemma = String(data.get("lemma") ?? "");
    form.mode = (data.get("mode") as SearchForm["mode"]) ?? "exact";
    form.language = String(data.get("language") ?? "");
    form.pos = String(data.get("pos") ?? "");
    form.verified = (data.get("verified") as SearchForm["verified"]) ?? "";
    form.sort = (data.get("sort") as SearchForm["sort"]) ?? "lemma";
    form.desc = data.get("desc") === "on";
  }

  function renderForm(): void {
    clear(formBox);
    formBox.append(
      input("lemma", form.lemma, t("search.lemma")),
      select("mode", form.mode, t("search.mode"), [
        ["exact", t("search.mode.exact")],
        ["substring", t("search.mode.substring")],
        ["regex", t("search.mode.regex")],
      ]),
      input("language", form.language, t("search.language")),
      input("pos", form.pos, t("search.pos")),
      select("verified", form.verified, t("search.verified"), [
        ["", t("search.verified.any")],
        ["true", t("search.verified.yes")],
        ["false", t("search.verified.no")],
      ]),
      select("sort", form.sort, t("search.sort"), [
        ["lemma", t("search.sort.lemma")],
        ["assonance", t("search.sort.assonance")],
        ["consonance", t("search.sort.consonance")],
        ["ending", t("search.sort.ending")],
      ]),
      el(
        "label",
        { class: "field checkbox" },
        el("input", { type: "checkbox", name: "desc", ...(form.desc ? { checked: "" } : {}) }),
        t("search.descending"),
      ),
      el(
        "button",
        {
          type: "submit",
          onclick: (ev: Event) => {
            ev.preventDefault();
            readForm();
            form.page = 1;
            deps.navigate(`#/${target}?${formToParams(form)}`);
            void refresh();
          },
        },
        t("search.submit"),
      ),
    );
  }

  function rowId(row: LexemeRec | RelationRec): number {
    return row.id;
  }

  function renderResults(): void {
    clear(results);
    const toolbar = el("div", { class: "toolbar" });
    toolbar.append(
      el("span", { class: "total" }, `${total} ${t("search.results")}`),
      el(
        "button",
        { type: "button", class: handle.bulkMode ? "active" : "", onclick: () => handle.toggleBulkMode() },
        t("actions.bulk_mode"),
      ),
      el(
        "a",
        {
          class: "download",
          href:
            target === "lexemes"
              ? `/api/export/csv?${formToParams(form, false)}`
              : `/api/export/checklist?${formToParams(form, false)}`,
          download: "",
        },
        target === "lexemes" ? t("actions.download_csv") : t("actions.download_checklist"),
      ),
    );
    if (handle.bulkMode) {
      toolbar.append(
        el(
          "button",
          { type: "button", onclick: () => void handle.approveSelected() },
          t("actions.approve_selected"),
        ),
        el(
          "button",
          {
            type: "button",
            onclick: () => {
              selection.selectAllOnPage();
              renderResults();
            },
          },
          t("actions.select_all"),
        ),
      );
    }
    results.append(toolbar);

    if (rows.length === 0) {
      results.append(el("p", { class: "empty" }, t("search.empty")));
      return;
    }

    const head = el("tr", {});
    if (handle.bulkMode) head.append(el("th", {}));
    if (target === "lexemes") {
      head.append(
        el("th", {}, t("table.lemma")),
        el("th", {}, t("table.language")),
        el("th", {}, t("table.pos")),
        el("th", {}, t("table.verified")),
      );
    } else {
      head.append(
        el("th", {}, t("table.left")),
        el("th", {}, t("table.right")),
        el("th", {}, t("table.type")),
        el("th", {}, t("table.verified")),
      );
    }
    const body = el("tbody", {});
    for (const row of rows) {
      const tr = el("tr", {
        class: row.verified ? "row verified" : "row",
        "data-id": String(row.id),
      });
      if (handle.bulkMode) {
        const box = el("input", {
          type: "checkbox",
          onchange: (ev: Event) => {
            selection.toggle(rowId(row), (ev.target as HTMLInputElement).checked);
          },
        });
        if (selection.has(rowId(row))) box.setAttribute("checked", "");
        tr.append(el("td", {}, box));
      }
      if (target === "lexemes") {
        const lx = row as LexemeRec;
        tr.append(
          el("td", {}, el("a", { href: `#/lexeme/${lx.id}?${formToParams(form, false)}` }, lx.lemma)),
          el("td", {}, lx.language),
          el("td", {}, lx.pos),
          el("td", {}, lx.verified ? "✓" : ""),
        );
      } else {
        const rel = row as RelationRec;
        tr.append(
          el("td", {}, el("a", { href: `#/lexeme/${rel.left}?${formToParams(form, false)}` }, rel.left_lemma)),
          el("td", {}, rel.right_lemma),
          el("td", {}, rel.type),
          el("td", {}, rel.verified ? "✓" : ""),
        );
      }
      body.append(tr);
    }
    results.append(el("table", { class: "rows" }, el("thead", {}, head), body));

    const pages = el("div", { class: "pager" });
    if (form.page > 1) {
      pages.append(
        el(
          "button",
          {
            type: "button",
            onclick: () => {
              form.page -= 1;
              void refresh();
            },
          },
          "←",
        ),
      );
    }
    pages.append(el("span", {}, String(form.page)));
    if (form.page * form.pageSize < total) {
      pages.append(
        el(
          "button",
          {
            type: "button",
            onclick: () => {
              form.page += 1;
              void refresh();
            },
          },
          "→",
        ),
      );
    }
    results.append(pages);
  }

  async function refresh(): Promise<void> {
    try {
      const params = formToParams(form);
      const page =
        target === "lexemes"
          ? await deps.api.searchLexemes(params)
          : await deps.api.searchRelations(params);
      rows = page.items;
      total = page.total;
      selection.setPage(rows.map(rowId));
      hideBanner();
      renderResults();
    } catch (err) {
      // the form state is preserved; only the banner appears
      if (err instanceof ApiError) {
        showBanner(`${t("search.error")} ${err.message}`, "error");
      } else {
        showBanner(t("error.generic"), "error");
      }
    }
  }

  async function approveSelected(): Promise<void> {
    const kind = target === "lexemes" ? "lexeme" : "relation";
    const refs = selection.selected().map((id) => ({ kind, id }));
    if (refs.length === 0) return;
    try {
      const report = await deps.api.approve(refs);
      selection.clear();
      await refresh(); // server-assigned flags, no page reload
      if (report.failed.length > 0) {
        showBanner(t("actions.approve_failed"), "error");
      } else {
        showBanner(t("actions.approved_ok", { n: report.approved + report.already }), "ok");
      }
    } catch (err) {
      showBanner(err instanceof ApiError ? err.message : t("error.generic"), "error");
    }
  }

  renderForm();
  await refresh();
  return handle;
}
