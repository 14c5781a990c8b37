import { Api } from "../api.js";

/** What every view needs injected; tests pass fakes. */
export interface Deps {
  api: Api;
  navigate: (hash: string) => void;
}
