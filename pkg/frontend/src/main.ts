import { ApiClient } from "./api.js";
import { mountApp } from "./app.js";

function boot(): void {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app mount point");
  }
  const baseInput = document.getElementById("base-url") as HTMLInputElement | null;
  const app = mountApp(root, new ApiClient(baseInput?.value ?? ""));
  baseInput?.addEventListener("change", () => {
    app.setApi(new ApiClient(baseInput.value));
  });
}

boot();
