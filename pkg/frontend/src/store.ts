// Selection state: at most two itineraries side by side, each fetched
// exactly once; chronogram and map render from the same response object.

import { ItineraryCollection, ShipSummary } from "./types.js";

export const MAX_SELECTED = 2;

export interface Selection {
  summary: ShipSummary;
  track: "a" | "b";
  itinerary: ItineraryCollection | null;
}

export type SelectResult =
  | { ok: true; selection: Selection }
  | { ok: false; reason: string };

export type FetchItinerary = (shipId: string) => Promise<ItineraryCollection>;

export class SelectionStore {
  private selections: Selection[] = [];
  private cache = new Map<string, Promise<ItineraryCollection>>();
  private fetches = new Map<string, number>();
  private listeners: Array<() => void> = [];

  constructor(private fetchItinerary: FetchItinerary) {}

  list(): readonly Selection[] {
    return this.selections;
  }

  fetchCount(shipId: string): number {
    return this.fetches.get(shipId) ?? 0;
  }

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  select(summary: ShipSummary): SelectResult {
    if (this.selections.some((s) => s.summary.ship_id === summary.ship_id)) {
      return { ok: false, reason: `${summary.ship_id} is already selected` };
    }
    if (this.selections.length >= MAX_SELECTED) {
      return {
        ok: false,
        reason: "two itineraries at most: deselect one first",
      };
    }
    const track = this.selections.length === 0 ? "a" : "b";
    const selection: Selection = { summary, track, itinerary: null };
    this.selections.push(selection);
    void this.load(selection);
    this.emit();
    return { ok: true, selection };
  }

  deselect(shipId: string): void {
    this.selections = this.selections.filter(
      (s) => s.summary.ship_id !== shipId,
    );
    this.selections.forEach((s, i) => {
      s.track = i === 0 ? "a" : "b";
    });
    this.emit();
  }

  clear(): void {
    this.selections = [];
    this.emit();
  }

  /** Resolve the itinerary for a selection, fetching at most once per
   * ship for the lifetime of the store. */
  async load(selection: Selection): Promise<ItineraryCollection> {
    const id = selection.summary.ship_id;
    let pending = this.cache.get(id);
    if (!pending) {
      this.fetches.set(id, (this.fetches.get(id) ?? 0) + 1);
      pending = this.fetchItinerary(id);
      this.cache.set(id, pending);
    }
    const itinerary = await pending;
    selection.itinerary = itinerary;
    this.emit();
    return itinerary;
  }
}
