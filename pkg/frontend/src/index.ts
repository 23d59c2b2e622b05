import { ApiClient } from "./api.js";
import { App, type AppRegions } from "./app.js";

export * from "./api.js";
export * from "./app.js";
export * from "./controls.js";
export * from "./cpc.js";
export * from "./glyphs.js";
export * from "./graph.js";
export * from "./matrix.js";
export * from "./onehot.js";
export * from "./types.js";

function region(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing region #${id}`);
  return el;
}

export async function mount(baseUrl: string, collectionId: string): Promise<App> {
  const api = new ApiClient(baseUrl);
  const session = await api.createSession(collectionId);
  const regions: AppRegions = {
    controls: region("controls"),
    matrix: region("matrix"),
    onehot: region("onehot"),
    cpc: region("cpc"),
    graph: region("graph"),
    errors: region("errors"),
  };
  const app = new App(api, regions, session.session_id);
  await app.start();
  return app;
}
