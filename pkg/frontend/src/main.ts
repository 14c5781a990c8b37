/** App bootstrap: hash routing, top bar with locale switch and token
 * sign-in, and dispatch into the three views. Switching locale swaps the
 * catalog and re-renders in place; the route (and thus all page state
 * encoded in it) survives.
 */

import { Api } from "./api.js";
import { clear, el } from "./dom.js";
import { currentLocale, loadLocale, otherLocale, t } from "./i18n.js";
import { createHistoryView } from "./views/history.js";
import { createLexemePage } from "./views/lexeme.js";
import { createSearchPage } from "./views/search.js";

const api = new Api();

function navigate(hash: string): void {
  if (location.hash !== hash) {
    history.pushState(null, "", hash);
  }
}

const deps = { api, navigate };

interface Route {
  name: "lexemes" | "relations" | "lexeme" | "history";
  id?: string;
  kind?: string;
  params: URLSearchParams;
}

export function parseHash(hash: string): Route {
  const raw = hash.replace(/^#\/?/, "");
  const [path, query = ""] = raw.split("?", 2);
  const params = new URLSearchParams(query);
  const segments = path.split("/").filter(Boolean);
  if (segments[0] === "lexeme" && segments[1]) {
    return { name: "lexeme", id: segments[1], params };
  }
  if (segments[0] === "history" && segments[1] && segments[2]) {
    return { name: "history", kind: segments[1], id: segments[2], params };
  }
  if (segments[0] === "relations") {
    return { name: "relations", params };
  }
  return { name: "lexemes", params };
}

async function renderRoute(container: HTMLElement): Promise<void> {
  const route = parseHash(location.hash);
  clear(container);
  container.append(el("p", { class: "loading" }, "…"));
  try {
    let view: HTMLElement;
    if (route.name === "lexeme") {
      view = (await createLexemePage(deps, Number(route.id), route.params)).root;
    } else if (route.name === "history") {
      view = (await createHistoryView(deps, route.kind!, route.id!)).root;
    } else {
      view = (await createSearchPage(deps, route.params, route.name)).root;
    }
    clear(container);
    container.append(view);
  } catch (err) {
    clear(container);
    container.append(el("p", { class: "banner error" }, t("error.generic")));
    console.error(err);
  }
}

function topBar(rerender: () => void): HTMLElement {
  const who = el("span", { class: "who" });
  const tokenInput = el("input", {
    type: "password",
    placeholder: t("login.token"),
    value: api.token ?? "",
  }) as HTMLInputElement;
  const signIn = async () => {
    api.token = tokenInput.value.trim() || null;
    if (api.token) {
      try {
        const me = await api.whoami();
        localStorage.setItem("token", api.token);
        who.textContent = `${t("login.signed_in_as")} ${me.display_name}`;
      } catch {
        who.textContent = t("error.unauthorized");
      }
    }
  };
  return el(
    "header",
    { class: "topbar" },
    el("h1", {}, t("app.title")),
    el("nav", {},
      el("a", { href: "#/lexemes" }, t("nav.lexemes")),
      " ",
      el("a", { href: "#/relations" }, t("nav.relations")),
    ),
    el("span", { class: "spacer" }),
    tokenInput,
    el("button", { type: "button", onclick: () => void signIn() }, t("login.submit")),
    who,
    el(
      "button",
      {
        type: "button",
        class: "locale-switch",
        onclick: () => {
          void loadLocale(otherLocale()).then(() => {
            localStorage.setItem("locale", currentLocale());
            rerender();
          });
        },
      },
      t("nav.locale"),
    ),
  );
}

export async function boot(root: HTMLElement): Promise<void> {
  const saved = localStorage.getItem("locale") ?? "en";
  await loadLocale(saved).catch(() => loadLocale("en"));
  api.token = localStorage.getItem("token");

  const content = el("main", { id: "content" });

  const rerender = () => {
    clear(root);
    root.append(topBar(rerender), content);
    void renderRoute(content);
  };
  rerender();
  window.addEventListener("hashchange", () => void renderRoute(content));
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot(document.getElementById("app")!);
}
