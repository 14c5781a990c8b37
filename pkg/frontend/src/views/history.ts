/** Revision history for one entity: editor, timestamp, field-level diff,
 * and a per-revision revert action. A revert conflict from the server is
 * shown in a toast and leaves the list untouched.
 */

import { ApiError, RevisionRec } from "../api.js";
import { clear, el } from "../dom.js";
import { t } from "../i18n.js";
import { Deps } from "./deps.js";

export interface HistoryViewHandle {
  root: HTMLElement;
  load(): Promise<void>;
  revert(revisionId: number): Promise<boolean>;
  revisionCount(): number;
}

function diffLines(rev: RevisionRec): HTMLElement {
  const box = el("div", { class: "diff" });
  const before = rev.before ?? {};
  const after = rev.after ?? {};
  const keys = [...new Set([...Object.keys(before), ...Object.keys(after)])].sort();
  for (const key of keys) {
    const from = JSON.stringify(before[key] ?? null);
    const to = JSON.stringify(after[key] ?? null);
    if (from === to) continue;
    box.append(el("div", { class: "diff-line" }, `${key}: ${from} → ${to}`));
  }
  return box;
}

export async function createHistoryView(
  deps: Deps,
  kind: string,
  entityId: string,
): Promise<HistoryViewHandle> {
  const root = el("section", { class: "history-view" });
  const toast = el("div", { class: "toast hidden" });
  const list = el("ol", { class: "revisions" });
  root.append(el("h2", {}, t("history.title")), toast, list);

  let revisions: RevisionRec[] = [];

  const handle: HistoryViewHandle = {
    root,
    load,
    revert,
    revisionCount: () => revisions.length,
  };

  function showToast(text: string, kind_: "error" | "ok"): void {
    toast.textContent = text;
    toast.className = `toast ${kind_}`;
  }

  async function load(): Promise<void> {
    const payload = await deps.api.history(kind, entityId);
    revisions = payload.revisions;
    clear(list);
    for (const rev of [...revisions].reverse()) {
      list.append(
        el(
          "li",
          { class: `revision kind-${rev.kind}`, "data-revision": String(rev.id) },
          el("span", { class: "kind" }, rev.kind),
          el("span", { class: "editor" }, ` ${t("history.editor")}: ${rev.editor}`),
          el("span", { class: "at" }, ` ${t("history.when")}: ${rev.at}`),
          diffLines(rev),
          el(
            "button",
            { type: "button", onclick: () => void handle.revert(rev.id) },
            t("history.revert"),
          ),
        ),
      );
    }
  }

  async function revert(revisionId: number): Promise<boolean> {
    try {
      await deps.api.revert(revisionId);
      showToast(t("history.reverted"), "ok");
      await load();
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        showToast(`${t("history.conflict")}: ${err.message}`, "error");
      } else {
        showToast(t("error.generic"), "error");
      }
      return false; // list stays as it was
    }
  }

  await load();
  return handle;
}
