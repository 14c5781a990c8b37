// Green-highlight acceptance: rows render green iff verified, and bulk
// approving N selected rows turns exactly those N green without a reload.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { PageOf, LexemeRec } from "../src/api.js";
import { createSearchPage } from "../src/views/search.js";
import { fakeApi, lexeme, useEnglishCatalog } from "./helpers.js";

function pageOf(items: LexemeRec[]): PageOf<LexemeRec> {
  return { items, total: items.length, page: 1, page_size: 50 };
}

describe("verified highlighting and bulk approval", () => {
  beforeEach(() => useEnglishCatalog());

  it("a row is green exactly when the server says verified", async () => {
    const rows = [
      lexeme({ id: 1, lemma: "kuss", verified: true }),
      lexeme({ id: 2, lemma: "puk" }),
      lexeme({ id: 3, lemma: "veʹrdd", verified: false }),
    ];
    const api = fakeApi({
      searchLexemes: vi.fn(async () => pageOf(rows)),
    });
    const page = await createSearchPage({ api, navigate: () => {} }, new URLSearchParams());
    const trs = page.rowElements();
    expect(trs).toHaveLength(3);
    expect(trs[0].classList.contains("verified")).toBe(true);
    expect(trs[1].classList.contains("verified")).toBe(false);
    expect(trs[2].classList.contains("verified")).toBe(false);
  });

  it("bulk approving N selected rows turns exactly those N green, no reload", async () => {
    // a tiny server double: approve mutates its own state, search reflects it
    const state = new Map<number, LexemeRec>(
      [1, 2, 3, 4].map((id) => [id, lexeme({ id, lemma: `w${id}` })]),
    );
    let searches = 0;
    const approve = vi.fn(async (refs: { kind: string; id: number }[]) => {
      for (const ref of refs) state.get(ref.id)!.verified = true;
      return { approved: refs.length, already: 0, failed: [] };
    });
    const api = fakeApi({
      searchLexemes: vi.fn(async () => {
        searches += 1;
        return pageOf([...state.values()].map((lx) => ({ ...lx })));
      }),
      approve,
    });
    const page = await createSearchPage({ api, navigate: () => {} }, new URLSearchParams());
    const root = page.root;

    page.toggleBulkMode();
    page.selection.toggle(2, true);
    page.selection.toggle(4, true);
    await page.approveSelected();

    expect(approve).toHaveBeenCalledWith([
      { kind: "lexeme", id: 2 },
      { kind: "lexeme", id: 4 },
    ]);
    const green = page
      .rowElements()
      .filter((tr) => tr.classList.contains("verified"))
      .map((tr) => Number(tr.getAttribute("data-id")));
    expect(green).toEqual([2, 4]);
    // same page object, same root node: state changed without a reload
    expect(page.root).toBe(root);
    expect(searches).toBe(2); // initial load + post-approve refetch
    const banner = root.querySelector(".banner.ok");
    expect(banner?.textContent).toContain("2");
  });

  it("API failure shows a banner and preserves the form", async () => {
    const api = fakeApi({
      searchLexemes: vi.fn(async () => {
        const err = new (await import("../src/api.js")).ApiError(400, "bad_query", "invalid regular expression");
        throw err;
      }),
    });
    const params = new URLSearchParams({ lemma: "(", mode: "regex" });
    const page = await createSearchPage({ api, navigate: () => {} }, params);
    const banner = page.root.querySelector(".banner.error");
    expect(banner?.textContent).toContain("invalid regular expression");
    const lemmaInput = page.root.querySelector('input[name="lemma"]') as HTMLInputElement;
    expect(lemmaInput.value).toBe("(");
  });

  it("selection never leaves the current page rows", async () => {
    const api = fakeApi({
      searchLexemes: vi.fn(async () => pageOf([lexeme({ id: 7, lemma: "a" })])),
    });
    const page = await createSearchPage({ api, navigate: () => {} }, new URLSearchParams());
    page.toggleBulkMode();
    page.selection.toggle(7, true);
    page.selection.toggle(99, true); // not on this page: ignored
    expect(page.selection.selected()).toEqual([7]);
  });
});
