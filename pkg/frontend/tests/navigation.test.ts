// Navigation-fidelity acceptance: prev/next from the lexeme page follows
// the originating search ordering across at least 3 consecutive steps.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { createLexemePage } from "../src/views/lexeme.js";
import { fakeApi, lexeme, useEnglishCatalog } from "./helpers.js";

function apiForOrdering(ordering: number[]) {
  const neighbors = vi.fn(async (id: number, params: URLSearchParams) => {
    expect(params.get("sort")).toBe("ending"); // the search context travels along
    const index = ordering.indexOf(id);
    if (index < 0) return { prev: null, next: null };
    return {
      prev: index > 0 ? ordering[index - 1] : null,
      next: index + 1 < ordering.length ? ordering[index + 1] : null,
    };
  });
  const api = fakeApi({
    neighbors,
    getLexeme: vi.fn(async (id: number) => ({
      lexeme: lexeme({ id, lemma: `w${id}` }),
      relations: [],
    })),
    paradigm: vi.fn(async () => ({ forms: [], generated: false })),
  });
  return { api, neighbors };
}

describe("prev/next follows the originating search ordering", () => {
  beforeEach(() => useEnglishCatalog());

  it("three consecutive next steps walk the ordering", async () => {
    const ordering = [31, 5, 12, 44, 9];
    const { api } = apiForOrdering(ordering);
    const visited: string[] = [];
    const page = await createLexemePage(
      { api, navigate: (hash) => visited.push(hash) },
      31,
      new URLSearchParams({ sort: "ending" }),
    );

    expect(await page.goNext()).toBe(true);
    expect(page.currentId()).toBe(5);
    expect(await page.goNext()).toBe(true);
    expect(page.currentId()).toBe(12);
    expect(await page.goNext()).toBe(true);
    expect(page.currentId()).toBe(44);
    expect(visited).toEqual([
      "#/lexeme/5?sort=ending",
      "#/lexeme/12?sort=ending",
      "#/lexeme/44?sort=ending",
    ]);
  });

  it("prev walks backwards and stops at the boundary", async () => {
    const ordering = [31, 5, 12];
    const { api } = apiForOrdering(ordering);
    const page = await createLexemePage(
      { api, navigate: () => {} },
      12,
      new URLSearchParams({ sort: "ending" }),
    );
    expect(await page.goPrev()).toBe(true);
    expect(page.currentId()).toBe(5);
    expect(await page.goPrev()).toBe(true);
    expect(page.currentId()).toBe(31);
    expect(await page.goPrev()).toBe(false); // first item: stays put
    expect(page.currentId()).toBe(31);
  });

  it("a lexeme outside its own search context has no neighbors", async () => {
    const { api } = apiForOrdering([1, 2, 3]);
    const page = await createLexemePage(
      { api, navigate: () => {} },
      99,
      new URLSearchParams({ sort: "ending" }),
    );
    expect(await page.goNext()).toBe(false);
    expect(await page.goPrev()).toBe(false);
  });
});
