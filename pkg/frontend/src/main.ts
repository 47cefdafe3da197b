/** Browser wiring: binds the app's sinks to the five view containers,
 * translates DOM events into state transitions via data-* attributes, and
 * mirrors the state into the address bar so any view can be shared or
 * restored by URL. */

import { App } from "./app.js";
import "../style.css";

function mount(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing container #${id}`);
  return el;
}

function start(): void {
  const containers = {
    accounts: mount("view-accounts"),
    network: mount("view-network"),
    entities: mount("view-entities"),
    compare: mount("view-compare"),
    tweets: mount("view-tweets"),
  };

  const app = new App({
    fetchImpl: (url) => fetch(url),
    sinks: {
      accounts: (html) => (containers.accounts.innerHTML = html),
      network: (html) => (containers.network.innerHTML = html),
      entities: (html) => (containers.entities.innerHTML = html),
      compare: (html) => (containers.compare.innerHTML = html),
      tweets: (html) => (containers.tweets.innerHTML = html),
      url: (query) => {
        const target = query ? `?${query}` : location.pathname;
        history.replaceState(null, "", target);
      },
    },
  });

  document.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement | null)?.closest<HTMLElement>(
      "[data-handle],[data-entity],[data-word],[data-image],[data-sort],[data-page]",
    );
    if (!target) return;
    const d = target.dataset;
    if (d.sort !== undefined) void app.setSort(d.sort);
    else if (d.page !== undefined) void app.setPage(Number(d.page));
    else if (d.word !== undefined) void app.selectWord(d.word);
    else if (d.image !== undefined) void app.selectImage(d.image);
    else if (d.entity !== undefined) void app.selectEntity(d.entity);
    else if (d.handle !== undefined) void app.selectAccount(d.handle);
  });

  // Network node hover drives edge highlighting and the community cloud.
  containers.network.addEventListener("mouseover", (event) => {
    const node = (event.target as HTMLElement | null)?.closest<SVGElement>("[data-node]");
    const handle = node?.getAttribute("data-node") ?? null;
    if (handle !== app.state.hover) void app.setHover(handle);
  });
  containers.network.addEventListener("mouseleave", () => {
    if (app.state.hover !== null) void app.setHover(null);
  });

  // Wheel zoom and drag pan on the network view.
  containers.network.addEventListener(
    "wheel",
    (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
      const zoom = Math.min(Math.max(app.state.zoom * factor, 0.2), 8);
      void app.setViewport(zoom, app.state.pan);
    },
    { passive: false },
  );
  let dragging: { x: number; y: number; pan: [number, number] } | null = null;
  containers.network.addEventListener("mousedown", (event) => {
    dragging = { x: event.clientX, y: event.clientY, pan: [...app.state.pan] };
  });
  window.addEventListener("mousemove", (event) => {
    if (!dragging) return;
    const pan: [number, number] = [
      dragging.pan[0] + (event.clientX - dragging.x),
      dragging.pan[1] + (event.clientY - dragging.y),
    ];
    void app.setViewport(app.state.zoom, pan);
  });
  window.addEventListener("mouseup", () => {
    dragging = null;
  });

  window.addEventListener("popstate", () => {
    void app.boot(location.search);
  });

  void app.boot(location.search);
}

start();
