/** Lexeme detail page: fields, relations with their sources/examples/
 * metadata, the mini/full paradigm with inline correction, external links,
 * and prev/next navigation that follows the search the editor came from
 * (the originating query travels in the page's hash parameters).
 */

import { ApiError, ParadigmFormRec } from "../api.js";
import { clear, el } from "../dom.js";
import { t } from "../i18n.js";
import { Deps } from "./deps.js";

export interface LexemePageHandle {
  root: HTMLElement;
  currentId(): number;
  load(): Promise<void>;
  goPrev(): Promise<boolean>;
  goNext(): Promise<boolean>;
  toggleFull(): Promise<void>;
  saveOverride(msd: string, form: string): Promise<void>;
}

export async function createLexemePage(
  deps: Deps,
  lexemeId: number,
  context: URLSearchParams,
): Promise<LexemePageHandle> {
  const root = el("section", { class: "lexeme-page" });
  let id = lexemeId;
  let fullParadigm = false;

  const handle: LexemePageHandle = {
    root,
    currentId: () => id,
    load,
    goPrev: () => step("prev"),
    goNext: () => step("next"),
    async toggleFull() {
      fullParadigm = !fullParadigm;
      await load();
    },
    async saveOverride(msd: string, form: string) {
      await deps.api.putOverride(id, msd, form);
      await load(); // re-render with the server's view of the paradigm
    },
  };

  async function step(direction: "prev" | "next"): Promise<boolean> {
    const around = await deps.api.neighbors(id, context);
    const target = direction === "prev" ? around.prev : around.next;
    if (target == null) return false;
    id = target;
    deps.navigate(`#/lexeme/${id}?${context}`);
    await load();
    return true;
  }

  function paradigmRow(form: ParadigmFormRec): HTMLElement {
    const editBox = el("input", {
      type: "text",
      value: form.form ?? "",
      class: "override-input hidden",
    }) as HTMLInputElement;
    const editButton = el(
      "button",
      {
        type: "button",
        class: "small",
        onclick: () => {
          if (editBox.classList.contains("hidden")) {
            editBox.classList.remove("hidden");
            editButton.textContent = t("lexeme.paradigm.save");
            editBox.focus();
          } else if (editBox.value.trim()) {
            void handle.saveOverride(form.msd, editBox.value.trim());
          }
        },
      },
      t("lexeme.paradigm.edit"),
    );
    return el(
      "tr",
      { class: form.origin === "override" ? "paradigm-row override" : "paradigm-row" },
      el("td", { class: "msd" }, form.msd),
      el(
        "td",
        {},
        form.form ?? el("em", {}, t("lexeme.paradigm.gap")),
        form.origin === "override" ? el("span", { class: "badge" }, t("lexeme.paradigm.override")) : null,
      ),
      el("td", {}, editBox, editButton),
    );
  }

  async function load(): Promise<void> {
    clear(root);
    let data;
    try {
      data = await deps.api.getLexeme(id);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        root.append(el("p", { class: "not-found" }, t("lexeme.not_found")));
        return;
      }
      throw err;
    }
    const lx = data.lexeme;

    const nav = el(
      "div",
      { class: "lexeme-nav" },
      el("button", { type: "button", onclick: () => void handle.goPrev() }, `← ${t("lexeme.prev")}`),
      el("button", { type: "button", onclick: () => void handle.goNext() }, `${t("lexeme.next")} →`),
    );
    root.append(
      nav,
      el(
        "h2",
        {},
        lx.lemma,
        lx.verified ? el("span", { class: "badge verified-badge" }, "✓") : null,
      ),
    );

    const facts = el("dl", { class: "facts" });
    const fact = (label: string, value: string | null) => {
      if (!value) return;
      facts.append(el("dt", {}, label), el("dd", {}, value));
    };
    fact(t("lexeme.language"), lx.language);
    fact(t("lexeme.pos"), lx.pos);
    fact(t("lexeme.contlex"), lx.contlex);
    if (lx.homonym_index > 1) fact(t("lexeme.homonym"), String(lx.homonym_index));
    fact(t("lexeme.notes"), lx.notes);
    root.append(facts);

    if (lx.external_links.length > 0) {
      const links = el("ul", { class: "external-links" });
      for (const link of lx.external_links) {
        links.append(
          el("li", {}, el("a", { href: link.url, target: "_blank", rel: "noopener" }, link.title)),
        );
      }
      root.append(el("h3", {}, t("lexeme.links")), links);
    }

    // paradigm
    const paradigm = await deps.api.paradigm(id, fullParadigm);
    const table = el("table", { class: "paradigm" });
    for (const form of paradigm.forms) table.append(paradigmRow(form));
    root.append(
      el("h3", {}, t("lexeme.paradigm")),
      table,
      el(
        "button",
        { type: "button", class: "expander", onclick: () => void handle.toggleFull() },
        fullParadigm ? t("lexeme.paradigm.mini") : t("lexeme.paradigm.full"),
      ),
    );

    // relations
    const relations = el("ul", { class: "relations" });
    for (const rel of data.relations) {
      const li = el(
        "li",
        { class: rel.verified ? "relation verified" : "relation" },
        el("a", { href: `#/lexeme/${rel.left}?${context}` }, rel.left_lemma),
        ` → `,
        el("a", { href: `#/lexeme/${rel.right}?${context}` }, rel.right_lemma),
        el("span", { class: "type" }, ` (${rel.type})`),
      );
      if (rel.sources.length > 0) {
        li.append(
          el(
            "div",
            { class: "sources" },
            `${t("lexeme.sources")}: ` +
              rel.sources.map((s) => (s.locus ? `${s.source_name}, ${s.locus}` : s.source_name)).join("; "),
          ),
        );
      }
      for (const example of rel.examples) {
        li.append(el("div", { class: "example" }, `${example.text} (${example.language})`));
      }
      const metaKeys = Object.keys(rel.metadata);
      if (metaKeys.length > 0) {
        li.append(
          el(
            "div",
            { class: "metadata" },
            metaKeys.map((key) => `${key}=${rel.metadata[key]}`).join(", "),
          ),
        );
      }
      relations.append(li);
    }
    root.append(el("h3", {}, t("lexeme.relations")), relations);
    root.append(
      el("p", {}, el("a", { href: `#/history/lexeme/${id}` }, t("history.title"))),
    );
  }

  await load();
  return handle;
}
