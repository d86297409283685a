/** Story player controller: drives the child's practice screen.
 *
 * All state lives on the server; this class only caches the latest API
 * payloads, so reloading mid-session restores the identical view. Attempt
 * outcomes are never shown optimistically: the UI waits for the server's
 * score before rendering feedback.
 */

import type { ApiClient } from "./api.js";
import type { SubmitResponse, TurnPayload } from "./types.js";
import { renderFeedback, renderTurnView } from "./views.js";

export class StoryPlayer {
  private turn: TurnPayload | null = null;
  private lastResult: SubmitResponse | null = null;
  private recording = false;

  constructor(
    private api: ApiClient,
    private sessionId: string,
  ) {}

  /** Pull the current turn from the server (also used on reload). */
  async refresh(): Promise<void> {
    this.turn = await this.api.currentTurn(this.sessionId);
  }

  get currentTurn(): TurnPayload | null {
    return this.turn;
  }

  get lastOutcome(): SubmitResponse | null {
    return this.lastResult;
  }

  get isRecording(): boolean {
    return this.recording;
  }

  startRecording(): void {
    this.recording = true;
  }

  stopRecording(): void {
    this.recording = false;
  }

  /** Submit a recorded blob and refresh from server state. */
  async submitRecording(audio: Blob): Promise<SubmitResponse> {
    const result = await this.api.submitRecording(this.sessionId, audio);
    return this.afterSubmit(result);
  }

  /** Dev mode: submit a pre-seeded stub reference. */
  async submitStub(audioRef: string): Promise<SubmitResponse> {
    const result = await this.api.submitStubAttempt(this.sessionId, audioRef);
    return this.afterSubmit(result);
  }

  private async afterSubmit(result: SubmitResponse): Promise<SubmitResponse> {
    this.lastResult = result;
    this.recording = false;
    await this.refresh();
    return result;
  }

  async choose(optionId: string): Promise<void> {
    await this.api.applyChoice(this.sessionId, optionId);
    this.lastResult = null;
    await this.refresh();
  }

  async replayUrl(attemptId: string): Promise<string> {
    const { audio_ref } = await this.api.replayRef(this.sessionId, attemptId);
    return this.api.audioUrl(audio_ref);
  }

  render(): string {
    if (!this.turn) {
      return `<div class="loading">loading…</div>`;
    }
    const feedback = this.lastResult ? renderFeedback(this.lastResult) : "";
    return feedback + renderTurnView(this.turn, { recording: this.recording });
  }
}
