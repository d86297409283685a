/** Clinician dashboard controller: aggregates, charts, filterable cards. */

import type { ApiClient } from "./api.js";
import type {
  Band,
  DashboardPayload,
  RecordingCardPayload,
  RecordingFilters,
} from "./types.js";
import { renderDashboard } from "./views.js";

export class DashboardScreen {
  private data: DashboardPayload | null = null;
  private cards: RecordingCardPayload[] = [];
  private filters: RecordingFilters = {};

  constructor(
    private api: ApiClient,
    private childId: string,
  ) {}

  async load(): Promise<void> {
    this.data = await this.api.dashboard(this.childId);
    this.cards = (await this.api.recordings(this.childId, this.filters)).cards;
  }

  /** Filters re-query the server; the client never re-buckets locally. */
  async setWordFilter(word: string): Promise<void> {
    if (word) this.filters.word = word;
    else delete this.filters.word;
    this.cards = (await this.api.recordings(this.childId, this.filters)).cards;
  }

  async setBandFilter(band: Band | ""): Promise<void> {
    if (band) this.filters.band = band;
    else delete this.filters.band;
    this.cards = (await this.api.recordings(this.childId, this.filters)).cards;
  }

  get dashboard(): DashboardPayload | null {
    return this.data;
  }

  get visibleCards(): RecordingCardPayload[] {
    return this.cards;
  }

  async exportReport(): Promise<string> {
    const report = await this.api.report(this.childId);
    return JSON.stringify(report, null, 2);
  }

  render(): string {
    if (!this.data) {
      return `<div class="loading">loading…</div>`;
    }
    return renderDashboard(this.data, this.cards);
  }
}
