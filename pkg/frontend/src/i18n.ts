/** Locale catalogs served by the backend at /i18n/<code>.json.
 *
 * Every user-visible string in the UI goes through t(); an unresolved key
 * renders as ⟨key⟩ so leaks are visible instead of silent. Switching the
 * locale only swaps the catalog and asks the app to re-render: no page
 * reload.
 */

export type Catalog = Record<string, string>;

let activeLocale = "en";
let catalog: Catalog = {};

export const SUPPORTED_LOCALES = ["en", "fi"] as const;

export function currentLocale(): string {
  return activeLocale;
}

export function installCatalog(locale: string, data: Catalog): void {
  activeLocale = locale;
  catalog = data;
}

export async function loadLocale(
  locale: string,
  fetcher: typeof fetch = fetch,
): Promise<void> {
  const resp = await fetcher(`/i18n/${locale}.json`);
  if (!resp.ok) throw new Error(`no catalog for ${locale}`);
  installCatalog(locale, (await resp.json()) as Catalog);
}

export function t(key: string, vars?: Record<string, string | number>): string {
  let text = catalog[key];
  if (text === undefined) return `⟨${key}⟩`;
  if (vars) {
    for (const [name, value] of Object.entries(vars)) {
      text = text.replaceAll(`{${name}}`, String(value));
    }
  }
  return text;
}

export function otherLocale(): string {
  return activeLocale === "fi" ? "en" : "fi";
}
