import { readFileSync, readdirSync, statSync } from "node:fs";
import { join } from "node:path";

import { Api, LexemeRec, RelationRec } from "../src/api.js";
import { installCatalog } from "../src/i18n.js";

export const REPO_ROOT = join(__dirname, "..", "..");
export const CATALOG_DIR = join(REPO_ROOT, "src", "verdd", "i18n");

export function readCatalog(locale: string): Record<string, string> {
  return JSON.parse(readFileSync(join(CATALOG_DIR, `${locale}.json`), "utf-8"));
}

/** Install the real English catalog so views render real strings. */
export function useEnglishCatalog(): void {
  installCatalog("en", readCatalog("en"));
}

export function lexeme(partial: Partial<LexemeRec> & { id: number; lemma: string }): LexemeRec {
  return {
    language: "sms",
    pos: "N",
    contlex: null,
    homonym_index: 1,
    verified: false,
    notes: "",
    external_links: [],
    version: 1,
    ...partial,
  };
}

export function relation(
  partial: Partial<RelationRec> & { id: number; left: number; right: number },
): RelationRec {
  return {
    type: "translation",
    verified: false,
    sources: [],
    examples: [],
    metadata: {},
    version: 1,
    left_lemma: `left${partial.left}`,
    left_pos: "N",
    right_lemma: `right${partial.right}`,
    right_pos: "N",
    ...partial,
  };
}

/** An Api whose methods are plain stubs; pass only what the view needs. */
export function fakeApi(overrides: Partial<Record<keyof Api, unknown>>): Api {
  const api = Object.create(Api.prototype) as Api;
  api.token = null;
  Object.assign(api, overrides);
  return api;
}

export function walkTsFiles(dir: string): string[] {
  const out: string[] = [];
  for (const entry of readdirSync(dir)) {
    const full = join(dir, entry);
    if (statSync(full).isDirectory()) out.push(...walkTsFiles(full));
    else if (entry.endsWith(".ts")) out.push(full);
  }
  return out;
}
