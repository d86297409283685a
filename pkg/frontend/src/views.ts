/** HTML renderers for every screen fragment.
 *
 * All views are pure string builders over API payloads. Bands, labels,
 * distances, and counts are printed exactly as the server sent them; the
 * client never recomputes a score. Child-facing controls always pair an
 * icon with an audio button so pre-readers can navigate.
 */

import type {
  ChoiceOptionPayload,
  DashboardPayload,
  MouthCue,
  RecordingCardPayload,
  SubmitResponse,
  TurnPayload,
  WordCard,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const MARKUP = /\[\[([^\[\]]+)\]\]/g;

/** Character dialogue with tappable highlighted target words. */
export function renderCharacterLine(line: string): string {
  const parts: string[] = [];
  let last = 0;
  for (const match of line.matchAll(MARKUP)) {
    parts.push(escapeHtml(line.slice(last, match.index)));
    const word = match[1];
    parts.push(
      `<button class="target-word" data-action="practice-word" data-word="${escapeHtml(word)}">` +
        `${escapeHtml(word)}</button>`,
    );
    last = (match.index ?? 0) + match[0].length;
  }
  parts.push(escapeHtml(line.slice(last)));
  return `<p class="character-line">${parts.join("")}</p>`;
}

/** Madlib sentence: blanks render as slots, the active one marked. */
export function renderMadlib(
  template: string,
  blanks: { slot: number; allowed_words: string[] }[],
  blankIndex: number,
  filled: Record<number, string> = {},
): string {
  let html = escapeHtml(template);
  blanks.forEach((blank, position) => {
    const token = escapeHtml(`{${blank.slot}}`);
    let slotHtml: string;
    if (blank.slot in filled) {
      slotHtml = `<span class="blank filled">${escapeHtml(filled[blank.slot])}</span>`;
    } else if (position === blankIndex) {
      slotHtml = `<span class="blank active" data-slot="${blank.slot}">say it!</span>`;
    } else {
      slotHtml = `<span class="blank" data-slot="${blank.slot}"></span>`;
    }
    html = html.replace(token, slotHtml);
  });
  return `<p class="madlib">${html}</p>`;
}

export function renderParentTip(tip: string): string {
  return `<aside class="parent-tip"><span class="tip-icon">💡</span> ${escapeHtml(tip)}</aside>`;
}

export function renderMouthCues(cues: MouthCue[]): string {
  const items = cues
    .map(
      (cue) => `
  <li class="mouth-cue" data-phoneme="${escapeHtml(cue.phoneme)}">
    <img src="assets/${escapeHtml(cue.image_ref)}.png" alt="mouth shape for ${escapeHtml(cue.phoneme)}">
    <p class="placement">${escapeHtml(cue.placement)}</p>
    <p class="gesture">${escapeHtml(cue.gesture_tip)}</p>
    <button class="icon-button" data-action="play-cue" data-phoneme="${escapeHtml(cue.phoneme)}">🔊</button>
  </li>`,
    )
    .join("");
  return `<ul class="mouth-cue-sidebar">${items}</ul>`;
}

/** Target-word sidebar: replay + per-word practice for every story word. */
export function renderTargetWordSidebar(words: string[], highlighted: string[]): string {
  const items = words
    .map((word) => {
      const active = highlighted.includes(word) ? " highlighted" : "";
      return (
        `<li class="word-chip${active}">` +
        `<button data-action="play-word" data-word="${escapeHtml(word)}">🔊</button>` +
        `<span>${escapeHtml(word)}</span>` +
        `<button data-action="practice-word" data-word="${escapeHtml(word)}">🎤</button>` +
        `</li>`
      );
    })
    .join("");
  return `<ul class="target-word-sidebar">${items}</ul>`;
}

export function renderChoice(prompt: string, options: ChoiceOptionPayload[]): string {
  const buttons = options
    .map(
      (option) =>
        `<button class="choice-option" data-action="choose" data-option="${escapeHtml(option.option_id)}">` +
        `${escapeHtml(option.label)}</button>`,
    )
    .join("");
  return `<div class="choice-box"><p>${escapeHtml(prompt)}</p>${buttons}</div>`;
}

export function renderRecordControls(recording: boolean): string {
  const toggle = recording
    ? `<button class="icon-button recording" data-action="stop-recording">⏹</button>`
    : `<button class="icon-button" data-action="start-recording">🎙️</button>`;
  return (
    `<div class="record-controls">${toggle}` +
    `<button class="icon-button" data-action="play-back">▶️</button>` +
    `<button class="icon-button" data-action="submit-attempt">✅</button></div>`
  );
}

/** Feedback panel after an attempt; the server decides everything. */
export function renderFeedback(result: SubmitResponse): string {
  if (result.outcome === "advance") {
    const readback = result.readback_text
      ? `<p class="readback" data-action="play-readback">🔊 ${escapeHtml(result.readback_text)}</p>`
      : "";
    return `<div class="feedback advance"><p>⭐ Great job!</p>${readback}</div>`;
  }
  if (result.outcome === "retry" && result.feedback === "voice_prompt") {
    return (
      `<div class="feedback retry voice-prompt">` +
      `<p>👂 Listen and try again!</p>` +
      `<button class="icon-button" data-action="play-prompt">🔊</button></div>`
    );
  }
  if (result.outcome === "retry") {
    return (
      `<div class="feedback retry transcription-cue">` +
      `<p>We heard:</p>` +
      `<p class="transcription-cue-text">${escapeHtml(result.score.orthographic_transcript)}</p>` +
      `<button class="icon-button" data-action="play-own-recording" ` +
      `data-ref="${escapeHtml(result.score.audio_ref)}">🔊 your voice</button>` +
      `<p>One more try!</p></div>`
    );
  }
  return `<div class="feedback proceed"><p>🌈 Good trying! The story goes on.</p></div>`;
}

/** The child's story player screen for one turn. */
export function renderTurnView(turn: TurnPayload, options: { recording?: boolean } = {}): string {
  if (turn.status !== "active" || !turn.turn) {
    return `<div class="session-over" data-status="${escapeHtml(turn.status)}">` +
      `<p>🎉 The story is over. See you next time!</p></div>`;
  }
  const t = turn.turn;
  const scene = `<img class="scene-image" src="assets/${escapeHtml(turn.image_ref ?? "")}.png" alt="scene">`;
  const madlib =
    turn.mode === "word"
      ? renderMadlib(t.expected_response, t.blanks, t.blank_index)
      : `<p class="sentence-prompt">🗣️ ${escapeHtml(t.expected_response)}</p>`;
  const choice =
    turn.pending_choice && turn.choice ? renderChoice(turn.choice.prompt, turn.choice.options) : "";
  return `
<div class="story-player" data-turn="${escapeHtml(t.turn_id)}">
  ${scene}
  ${renderCharacterLine(t.character_line)}
  ${madlib}
  ${choice}
  ${renderRecordControls(options.recording ?? false)}
  ${renderTargetWordSidebar(turn.target_words ?? [], t.highlighted_words)}
  ${renderMouthCues(turn.mouth_cues ?? [])}
  ${renderParentTip(t.parent_tip)}
</div>`;
}

export function renderWordCard(card: WordCard): string {
  return `
<div class="word-card" data-word="${escapeHtml(card.word)}">
  <h3>${escapeHtml(card.word)}</h3>
  <p class="ipa">/${card.ipa.map(escapeHtml).join(" ")}/</p>
  <button data-action="play-ref" data-ref="${escapeHtml(card.audio_ref)}">🔊 listen</button>
  <button data-action="record-practice" data-word="${escapeHtml(card.word)}">🎤 practice</button>
  ${renderMouthCues(card.mouth_cues)}
</div>`;
}

// --- clinician dashboard -----------------------------------------------

const BAND_ORDER = ["excellent", "good", "fair", "needs_practice"] as const;
const BAND_LABELS: Record<string, string> = {
  excellent: "Excellent",
  good: "Good",
  fair: "Fair",
  needs_practice: "Need Practice",
};

/** Per-word production bar chart; counts come straight from the payload. */
export function renderProductionBars(dashboard: DashboardPayload): string {
  const max = Math.max(1, ...dashboard.per_word.map((w) => w.production_count));
  const rows = dashboard.per_word
    .map(
      (w) => `
  <div class="bar-row" data-word="${escapeHtml(w.word)}">
    <span class="bar-label">${escapeHtml(w.word)}</span>
    <span class="bar" style="width: ${(100 * w.production_count) / max}%"></span>
    <span class="bar-count">${w.production_count}</span>
  </div>`,
    )
    .join("");
  return `<div class="production-bars">${rows}</div>`;
}

/** Band distribution donut rendered as labeled segments. */
export function renderBandDonut(dashboard: DashboardPayload): string {
  const total = dashboard.total_attempts;
  const segments = BAND_ORDER.map((band) => {
    const count = dashboard.band_distribution[band] ?? 0;
    return (
      `<div class="donut-segment band-${band}" data-band="${band}" data-count="${count}">` +
      `${BAND_LABELS[band]}: ${count}</div>`
    );
  }).join("");
  return `<div class="band-donut" data-total="${total}">${segments}</div>`;
}

export function renderRecordingCard(card: RecordingCardPayload): string {
  return `
<div class="recording-card" data-attempt="${escapeHtml(card.attempt_id)}">
  <span class="band-chip band-${escapeHtml(card.band)}">${escapeHtml(card.band_label)}</span>
  <h4>${escapeHtml(card.word)}</h4>
  <p class="phonemic">/${escapeHtml(card.phonemic_transcript)}/</p>
  <p class="orthographic">"${escapeHtml(card.orthographic_transcript)}"</p>
  <p class="prompt">${escapeHtml(card.prompt_text)}</p>
  <p class="distance">distance ${card.distance}</p>
  <button data-action="play-ref" data-ref="${escapeHtml(card.audio_ref)}">▶️ ${escapeHtml(card.ts)}</button>
</div>`;
}

export function renderDashboard(
  dashboard: DashboardPayload,
  cards: RecordingCardPayload[],
): string {
  const filters = `
<div class="card-filters">
  <select data-action="filter-word">
    <option value="">all words</option>
    ${dashboard.per_word.map((w) => `<option value="${escapeHtml(w.word)}">${escapeHtml(w.word)}</option>`).join("")}
  </select>
  <select data-action="filter-band">
    <option value="">all bands</option>
    ${BAND_ORDER.map((b) => `<option value="${b}">${BAND_LABELS[b]}</option>`).join("")}
  </select>
  <button data-action="export-report">⬇ export report</button>
</div>`;
  return `
<div class="dashboard" data-child="${escapeHtml(dashboard.child_id)}">
  <h2>Progress (${dashboard.total_attempts} productions)</h2>
  ${renderProductionBars(dashboard)}
  ${renderBandDonut(dashboard)}
  ${filters}
  <div class="recording-cards">${cards.map(renderRecordingCard).join("")}</div>
</div>`;
}
