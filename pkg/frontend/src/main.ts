// DOM wiring: search panel, linked chronogram + map, segment stepper.

import { ApiClient, ApiError, loadConfig } from "./api.js";
import { chronogramLayout, chronogramSvg } from "./chronogram.js";
import { CoastlineFeatureCollection, mapSvg } from "./mapview.js";
import { SelectionStore } from "./store.js";
import { Stepper } from "./stepper.js";
import { ExplorerConfig, ShipSummary, segmentsOf } from "./types.js";

const CHRONOGRAM_VIEW = { width: 560, height: 420, margin: 30 };
const MAP_VIEW = { width: 640, height: 420 };

interface AppState {
  config: ExplorerConfig;
  api: ApiClient;
  store: SelectionStore;
  coastline: CoastlineFeatureCollection | null;
  steppers: Map<string, Stepper>;
  highlight: number | null;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function notice(text: string): void {
  const box = el<HTMLElement>("notice");
  box.textContent = text;
  box.hidden = text === "";
}

function renderSummaries(state: AppState, items: ShipSummary[]): void {
  const list = el<HTMLElement>("results");
  list.innerHTML = "";
  if (items.length === 0) {
    list.innerHTML = '<li class="empty">no itineraries match this search</li>';
    return;
  }
  for (const item of items) {
    const row = document.createElement("li");
    row.innerHTML =
      `<strong>${item.ship_name || item.ship_id}</strong> ` +
      `<span class="muted">${item.ship_id}</span> — ` +
      `${item.first_date} → ${item.last_date}, ${item.stop_count} stops, ` +
      `worst ${item.worst_travel_uncertainty}`;
    row.addEventListener("click", () => {
      const result = state.store.select(item);
      if (!result.ok) notice(result.reason);
      else notice("");
    });
    list.appendChild(row);
  }
}

function renderSelections(state: AppState): void {
  const host = el<HTMLElement>("views");
  host.innerHTML = "";
  for (const selection of state.store.list()) {
    const panel = document.createElement("section");
    panel.className = `track-${selection.track}`;
    const head = document.createElement("header");
    head.innerHTML =
      `<h2>${selection.summary.ship_name} ` +
      `<span class="muted">${selection.summary.ship_id} · track ` +
      `${selection.track}</span></h2>`;
    const drop = document.createElement("button");
    drop.textContent = "remove";
    drop.addEventListener("click", () =>
      state.store.deselect(selection.summary.ship_id));
    head.appendChild(drop);
    panel.appendChild(head);

    if (!selection.itinerary) {
      panel.insertAdjacentHTML("beforeend", '<p class="muted">loading…</p>');
      host.appendChild(panel);
      continue;
    }
    const fc = selection.itinerary;
    const shipId = selection.summary.ship_id;
    let stepper = state.steppers.get(shipId);
    if (!stepper) {
      stepper = new Stepper(segmentsOf(fc).length, state.config.stepperMode);
      state.steppers.set(shipId, stepper);
    }

    const controls = document.createElement("p");
    const prev = document.createElement("button");
    prev.textContent = "← prev leg";
    prev.disabled = !stepper.canPrev;
    const next = document.createElement("button");
    next.textContent = "next leg →";
    next.disabled = !stepper.canNext;
    const label = document.createElement("span");
    label.className = "muted";
    label.textContent = ` leg ${stepper.current + 1}/${stepper.count}`;
    prev.addEventListener("click", () => { stepper!.prev(); renderSelections(state); });
    next.addEventListener("click", () => { stepper!.next(); renderSelections(state); });
    controls.append(prev, next, label);
    panel.appendChild(controls);

    const split = document.createElement("div");
    split.className = "split";
    const chrono = document.createElement("div");
    chrono.innerHTML = chronogramSvg(
      chronogramLayout(fc, CHRONOGRAM_VIEW), CHRONOGRAM_VIEW,
      state.highlight ?? stepper.current);
    const map = document.createElement("div");
    map.innerHTML = mapSvg(fc, {
      ...MAP_VIEW,
      focusSegment: stepper.count > 0 ? stepper.current : null,
      tileUrl: state.config.offline ? null : state.config.tileUrl,
      coastline: state.coastline,
      highlightIndex: state.highlight,
    });
    for (const [container, other] of [[chrono, map], [map, chrono]] as const) {
      container.addEventListener("mouseover", (event) => {
        const target = (event.target as Element).closest("[data-seg]");
        if (!target) return;
        const idx = target.getAttribute("data-seg");
        for (const twin of other.querySelectorAll(`[data-seg="${idx}"]`)) {
          twin.setAttribute("stroke-width", "5");
        }
      });
      container.addEventListener("mouseout", () => {
        for (const line of other.querySelectorAll("[data-seg]")) {
          line.setAttribute("stroke-width", "2");
        }
      });
    }
    split.append(chrono, map);
    panel.appendChild(split);
    host.appendChild(panel);
  }
}

async function runSearch(state: AppState): Promise<void> {
  const q = el<HTMLInputElement>("query").value.trim();
  const by = el<HTMLSelectElement>("search-kind").value;
  const filters: Record<string, string> = {
    flag: el<HTMLInputElement>("flag").value.trim(),
    homeport: el<HTMLInputElement>("homeport").value.trim(),
    tonnage_min: el<HTMLInputElement>("tonnage-min").value.trim(),
    tonnage_max: el<HTMLInputElement>("tonnage-max").value.trim(),
    date_from: el<HTMLInputElement>("date-from").value.trim(),
    date_to: el<HTMLInputElement>("date-to").value.trim(),
  };
  try {
    const page = by === "captain"
      ? await state.api.searchCaptains(q)
      : await state.api.searchShips(q, filters);
    notice("");
    renderSummaries(state, page.items);
  } catch (err) {
    if (err instanceof ApiError) notice(`search failed: ${err.message}`);
    else throw err;
  }
}

async function start(): Promise<void> {
  const config = await loadConfig();
  const api = new ApiClient(config.apiBaseUrl);
  const store = new SelectionStore((id) => api.itinerary(id));
  const state: AppState = {
    config,
    api,
    store,
    coastline: null,
    steppers: new Map(),
    highlight: null,
  };
  if (config.offline && config.coastlineUrl) {
    try {
      const res = await fetch(config.coastlineUrl);
      state.coastline = (await res.json()) as CoastlineFeatureCollection;
    } catch {
      notice("coastline layer unavailable");
    }
  }
  store.onChange(() => renderSelections(state));
  el<HTMLFormElement>("search-form").addEventListener("submit", (event) => {
    event.preventDefault();
    void runSearch(state);
  });
}

if (typeof document !== "undefined") {
  void start();
}
