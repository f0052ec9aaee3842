/** Browser entry point.

The API base URL comes from the `api` query parameter when present, so the
page can point at any running server without a rebuild; it defaults to the
local development address.
*/

import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import { mountApp } from "./ui.js";

const DEFAULT_BASE = "http://127.0.0.1:8000";

export function apiBase(location: { search: string }): string {
  const params = new URLSearchParams(location.search);
  return params.get("api") ?? DEFAULT_BASE;
}

function boot(): void {
  const root = document.getElementById("app");
  if (root === null) throw new Error("page is missing the #app element");
  const controller = new SessionController(new ApiClient(apiBase(window.location)));
  mountApp(root, controller);
}

if (typeof document !== "undefined" && document.getElementById("app") !== null) {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
