import { describe, expect, it } from "vitest";

import type {
  DashboardPayload,
  RecordingCardPayload,
  SubmitResponse,
  TurnPayload,
  WordCard,
} from "../src/types.js";
import {
  renderBandDonut,
  renderCharacterLine,
  renderFeedback,
  renderMadlib,
  renderProductionBars,
  renderRecordingCard,
  renderTurnView,
  renderWordCard,
} from "../src/views.js";
import { fixture } from "./helpers.js";

describe("story player views", () => {
  const turn = fixture<TurnPayload>("turn_initial");

  it("renders highlighted target words as tappable buttons", () => {
    const html = renderCharacterLine(turn.turn!.character_line);
    expect(html).toContain('data-action="practice-word" data-word="rabbit"');
    expect(html).toContain('data-action="practice-word" data-word="lake"');
    expect(html.match(/class="target-word"/g)).toHaveLength(2);
  });

  it("escapes dialogue text", () => {
    const html = renderCharacterLine("A <script> says [[rabbit]]!");
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("renders madlib blanks with the active slot marked", () => {
    const html = renderMadlib(turn.turn!.expected_response, turn.turn!.blanks, 0);
    expect(html).toContain('class="blank active"');
    expect(html).not.toContain("{0}");
  });

  it("renders filled madlib slots", () => {
    const html = renderMadlib("I see the {0}!", [{ slot: 0, allowed_words: ["rabbit"] }], 0, {
      0: "rabbit",
    });
    expect(html).toContain('class="blank filled"');
    expect(html).toContain("rabbit");
  });

  it("renders the whole turn: tip, sidebar, cues, mic controls", () => {
    const html = renderTurnView(turn);
    expect(html).toContain(turn.turn!.parent_tip);
    expect(html).toContain('class="target-word-sidebar"');
    expect(html).toContain('data-phoneme="r"');
    expect(html).toContain('data-phoneme="l"');
    expect(html).toContain('data-action="start-recording"');
    expect(html).toContain("asset-trail-meadow");
  });

  it("renders choice buttons when a choice is pending", () => {
    const pending = fixture<TurnPayload>("turn_pending_choice");
    const html = renderTurnView(pending);
    expect(html).toContain('data-action="choose" data-option="forest"');
    expect(html).toContain('data-action="choose" data-option="beach"');
    expect(html).toContain("Where do we go next?");
  });

  it("renders word practice cards from the API payload", () => {
    const card = fixture<WordCard>("word_card");
    const html = renderWordCard(card);
    expect(html).toContain("/r æ b ɪ t/");
    expect(html).toContain(card.audio_ref);
  });
});

describe("attempt feedback views", () => {
  it("voice prompt on the first retry", () => {
    const html = renderFeedback(fixture<SubmitResponse>("submit_retry_voice"));
    expect(html).toContain("voice-prompt");
    expect(html).toContain('data-action="play-prompt"');
  });

  it("transcription cue on the second retry shows the transcript verbatim", () => {
    const result = fixture<SubmitResponse>("submit_retry_cue");
    const html = renderFeedback(result);
    expect(html).toContain("transcription-cue");
    expect(html).toContain(result.score.orthographic_transcript); // "I see a dog"
    expect(html).toContain(`data-ref="${result.score.audio_ref}"`);
  });

  it("advance shows the spoken readback sentence", () => {
    const result = fixture<SubmitResponse>("submit_advance");
    const html = renderFeedback(result);
    expect(html).toContain("Great job");
    expect(html).toContain(result.readback_text);
  });

  it("flagged proceed keeps the story going gently", () => {
    const html = renderFeedback(fixture<SubmitResponse>("submit_proceed"));
    expect(html).toContain("proceed");
    expect(html).not.toContain("try again");
  });
});

describe("dashboard views display API numbers verbatim", () => {
  const dashboard = fixture<DashboardPayload>("dashboard");

  it("bar chart counts equal the payload per-word counts", () => {
    const html = renderProductionBars(dashboard);
    for (const word of dashboard.per_word) {
      expect(html).toContain(`data-word="${word.word}"`);
      expect(html).toContain(
        `<span class="bar-count">${word.production_count}</span>`,
      );
    }
  });

  it("donut segments carry the payload band counts", () => {
    const html = renderBandDonut(dashboard);
    for (const [band, count] of Object.entries(dashboard.band_distribution)) {
      expect(html).toContain(`data-band="${band}" data-count="${count}"`);
    }
    expect(html).toContain(`data-total="${dashboard.total_attempts}"`);
  });

  it("recording cards project payload fields without recomputation", () => {
    // deliberately inconsistent: a recomputation from distance would say
    // Need Practice, but the API field says Good and must win
    const bait: RecordingCardPayload = {
      attempt_id: "x-1",
      session_id: "s-9",
      ts: "2024-01-01T00:00:00Z",
      word: "rain",
      band: "good",
      band_label: "Good",
      distance: 2.5,
      phonemic_transcript: "w e d",
      orthographic_transcript: "wain",
      prompt_text: "Say it!",
      audio_ref: "blob-1",
    };
    const html = renderRecordingCard(bait);
    expect(html).toContain(">Good</span>");
    expect(html).toContain("distance 2.5");
    expect(html).not.toContain("Need Practice");
  });
});
