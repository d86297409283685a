/** SLP story configuration flow: phonemes -> recommended words -> generate
 * -> validate -> save. Validation failures surface inline and block save. */

import type { ApiClient } from "./api.js";
import type { Violation } from "./types.js";
import { escapeHtml } from "./views.js";

export class ConfigScreen {
  phonemes: string[] = [];
  position = "initial";
  recommended: string[] = [];
  chosenWords: string[] = [];
  templateId = "journey";
  seed = 0;
  story: Record<string, unknown> | null = null;
  violations: Violation[] = [];
  savedStoryId = "";

  constructor(private api: ApiClient) {}

  async recommend(count = 8): Promise<void> {
    const lists = await Promise.all(
      this.phonemes.map((p) => this.api.recommendWords(p, this.position, count)),
    );
    this.recommended = [...new Set(lists.flatMap((r) => r.words))];
  }

  async generate(): Promise<void> {
    this.story = await this.api.generateStory({
      target_phonemes: this.phonemes,
      words: this.chosenWords,
      template_id: this.templateId,
      seed: this.seed,
    });
    const result = await this.api.validateStory(this.story);
    this.violations = result.violations;
  }

  async save(): Promise<string> {
    if (!this.story) {
      throw new Error("generate a story first");
    }
    if (this.violations.length > 0) {
      throw new Error("story has validation violations");
    }
    const saved = await this.api.saveStory(this.story);
    this.savedStoryId = saved.story_id;
    return saved.story_id;
  }

  render(): string {
    const words = this.recommended
      .map(
        (word) =>
          `<label><input type="checkbox" data-action="toggle-word" value="${escapeHtml(word)}"` +
          `${this.chosenWords.includes(word) ? " checked" : ""}> ${escapeHtml(word)}</label>`,
      )
      .join("");
    const violations = this.violations
      .map(
        (v) =>
          `<li class="violation" data-code="${escapeHtml(v.code)}">` +
          `${escapeHtml(v.code)}: ${escapeHtml(v.message)}</li>`,
      )
      .join("");
    return `
<form class="story-config">
  <input name="phonemes" placeholder="target phonemes, e.g. l r"
         value="${escapeHtml(this.phonemes.join(" "))}">
  <button data-action="recommend">suggest words</button>
  <div class="recommended-words">${words}</div>
  <button data-action="generate">generate story</button>
  <ul class="violations">${violations}</ul>
  <button data-action="save"${this.violations.length ? " disabled" : ""}>save</button>
  ${this.savedStoryId ? `<p class="saved">saved as ${escapeHtml(this.savedStoryId)}</p>` : ""}
</form>`;
  }
}
