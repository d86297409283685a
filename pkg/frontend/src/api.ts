/** Typed client for the /v1 API; the UI's only data source. */

import type {
  DashboardPayload,
  Mode,
  RecordingCardPayload,
  RecordingFilters,
  SessionSummary,
  StorySummary,
  SubmitResponse,
  TurnPayload,
  ValidateResponse,
  WordCard,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body.code ?? "Error", body.message ?? "request failed");
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  // --- stories and configuration ---

  listStories(): Promise<StorySummary[]> {
    return this.request("/v1/stories");
  }

  getStory(storyId: string): Promise<Record<string, unknown>> {
    return this.request(`/v1/stories/${encodeURIComponent(storyId)}`);
  }

  recommendWords(phoneme: string, position: string, count: number): Promise<{ words: string[] }> {
    const params = new URLSearchParams({ phoneme, position, count: String(count) });
    return this.request(`/v1/lexicon/recommend?${params}`);
  }

  generateStory(spec: {
    target_phonemes: string[];
    words: string[];
    template_id: string;
    seed: number;
  }): Promise<Record<string, unknown>> {
    return this.post("/v1/stories/generate", spec);
  }

  validateStory(doc: Record<string, unknown>): Promise<ValidateResponse> {
    return this.post("/v1/stories/validate", doc);
  }

  saveStory(doc: Record<string, unknown>): Promise<{ story_id: string }> {
    return this.post("/v1/stories", doc);
  }

  wordCard(word: string): Promise<WordCard> {
    return this.request(`/v1/words/${encodeURIComponent(word)}/practice`);
  }

  // --- practice sessions ---

  createSession(childId: string, storyId: string, mode: Mode): Promise<SessionSummary> {
    return this.post("/v1/sessions", { child_id: childId, story_id: storyId, mode });
  }

  sessionSummary(sessionId: string): Promise<SessionSummary> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}`);
  }

  currentTurn(sessionId: string): Promise<TurnPayload> {
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}/turn`);
  }

  /** Dev mode: submit a pre-seeded stub reference instead of audio. */
  submitStubAttempt(sessionId: string, audioRef: string): Promise<SubmitResponse> {
    return this.post(`/v1/sessions/${encodeURIComponent(sessionId)}/attempts`, {
      audio_ref: audioRef,
    });
  }

  /** Upload a recorded blob; the server content-addresses it. */
  async submitRecording(sessionId: string, audio: Blob): Promise<SubmitResponse> {
    const form = new FormData();
    form.append("audio", audio, "attempt.webm");
    return this.request(`/v1/sessions/${encodeURIComponent(sessionId)}/attempts`, {
      method: "POST",
      body: form,
    });
  }

  applyChoice(sessionId: string, optionId: string): Promise<SessionSummary> {
    return this.post(`/v1/sessions/${encodeURIComponent(sessionId)}/choice`, {
      option_id: optionId,
    });
  }

  replayRef(sessionId: string, attemptId: string): Promise<{ audio_ref: string }> {
    return this.request(
      `/v1/sessions/${encodeURIComponent(sessionId)}/attempts/${encodeURIComponent(attemptId)}/audio`,
    );
  }

  audioUrl(ref: string): string {
    return `${this.baseUrl}/v1/audio/${encodeURIComponent(ref)}`;
  }

  // --- clinician dashboard ---

  dashboard(childId: string): Promise<DashboardPayload> {
    return this.request(`/v1/children/${encodeURIComponent(childId)}/dashboard`);
  }

  recordings(childId: string, filters: RecordingFilters = {}): Promise<{ cards: RecordingCardPayload[] }> {
    const params = new URLSearchParams();
    if (filters.word) params.set("word", filters.word);
    if (filters.band) params.set("band", filters.band);
    if (filters.session) params.set("session", filters.session);
    const query = params.toString();
    return this.request(`/v1/children/${encodeURIComponent(childId)}/recordings${query ? `?${query}` : ""}`);
  }

  report(childId: string): Promise<Record<string, unknown>> {
    return this.request(`/v1/children/${encodeURIComponent(childId)}/report`);
  }
}
