import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { installCatalog, t } from "../src/i18n.js";
import { readCatalog, walkTsFiles } from "./helpers.js";

describe("locale catalogs", () => {
  const en = readCatalog("en");
  const fi = readCatalog("fi");

  it("en and fi define exactly the same keys", () => {
    expect(Object.keys(fi).sort()).toEqual(Object.keys(en).sort());
  });

  it("every key used in the UI resolves in both locales (no fallback leaks)", () => {
    const used = new Set<string>();
    for (const file of walkTsFiles(join(__dirname, "..", "src"))) {
      const source = readFileSync(file, "utf-8");
      for (const match of source.matchAll(/\bt\(\s*"([^"]+)"/g)) {
        used.add(match[1]);
      }
    }
    expect(used.size).toBeGreaterThan(30);
    const missingEn = [...used].filter((key) => !(key in en));
    const missingFi = [...used].filter((key) => !(key in fi));
    expect(missingEn).toEqual([]);
    expect(missingFi).toEqual([]);
  });

  it("no catalog value is empty", () => {
    for (const [key, value] of [...Object.entries(en), ...Object.entries(fi)]) {
      expect(value.length, key).toBeGreaterThan(0);
    }
  });

  it("t() interpolates variables and marks unknown keys", () => {
    installCatalog("en", { "greet": "hello {name}" });
    expect(t("greet", { name: "maria" })).toBe("hello maria");
    expect(t("nope")).toBe("⟨nope⟩");
  });

  it("switching catalogs changes every string without any reload hook", () => {
    installCatalog("en", readCatalog("en"));
    const before = t("search.title");
    installCatalog("fi", readCatalog("fi"));
    const after = t("search.title");
    expect(before).not.toBe(after);
    expect(after).toBe(readCatalog("fi")["search.title"]);
  });
});
