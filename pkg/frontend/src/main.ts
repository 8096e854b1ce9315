import { ApiClient } from "./api.js";
import { renderApp } from "./render.js";
import { ViewStore } from "./state.js";

/** Boot: fetch the tournament document, render the shell, then load the
 * no-pins baseline.  The page is served from /ui/ by the same process that
 * answers /tournament and /compute, so relative-to-root paths suffice. */
async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app container");
  }
  const client = new ApiClient("");
  try {
    await client.health();
    const doc = await client.tournament();
    const store = new ViewStore(client);
    renderApp(root, doc, store);
    await store.init();
  } catch (err) {
    root.textContent = "";
    const banner = document.createElement("div");
    banner.className = "banner error";
    banner.textContent =
      "cannot reach the probability service: " +
      (err instanceof Error ? err.message : String(err));
    const retry = document.createElement("button");
    retry.className = "retry";
    retry.textContent = "retry";
    retry.addEventListener("click", () => void boot());
    banner.appendChild(retry);
    root.appendChild(banner);
  }
}

void boot();
