import { describe, expect, it } from "vitest";

import { StoryPlayer } from "../src/player.js";
import type { SubmitResponse, TurnPayload } from "../src/types.js";
import { FixtureServer, fixture } from "./helpers.js";

const TURN = "/v1/sessions/s-0001/turn";
const ATTEMPTS = "/v1/sessions/s-0001/attempts";
const CHOICE = "/v1/sessions/s-0001/choice";

function playerWith(server: FixtureServer): StoryPlayer {
  return new StoryPlayer(server.client(), "s-0001");
}

describe("StoryPlayer", () => {
  it("renders the current turn from server state", async () => {
    const server = new FixtureServer().on("GET", TURN, fixture<TurnPayload>("turn_initial"));
    const player = playerWith(server);
    await player.refresh();
    const html = player.render();
    expect(html).toContain('data-turn="s1t1"');
    expect(html).toContain('data-word="rabbit"');
  });

  it("walks the retry-then-transcription-cue sequence", async () => {
    const initial = fixture<TurnPayload>("turn_initial");
    const server = new FixtureServer()
      .on("GET", TURN, initial)
      .on(
        "POST",
        ATTEMPTS,
        fixture<SubmitResponse>("submit_retry_voice"),
        fixture<SubmitResponse>("submit_retry_cue"),
        fixture<SubmitResponse>("submit_advance"),
      );
    const player = playerWith(server);
    await player.refresh();

    const first = await player.submitStub("stub-bad-1");
    expect(first.outcome).toBe("retry");
    expect(player.render()).toContain("voice-prompt");

    const second = await player.submitStub("stub-bad-2");
    expect(second.feedback).toBe("transcription_cue");
    const html = player.render();
    expect(html).toContain("transcription-cue");
    expect(html).toContain("I see a dog");

    const third = await player.submitStub("stub-good");
    expect(third.outcome).toBe("advance");
    expect(player.render()).toContain("Great job");
  });

  it("branches the story on a choice", async () => {
    const server = new FixtureServer()
      .on(
        "GET",
        TURN,
        fixture<TurnPayload>("turn_pending_choice"),
        fixture<TurnPayload>("turn_after_choice"),
      )
      .on("POST", CHOICE, { session_id: "s-0001", pending_choice: false });
    const player = playerWith(server);
    await player.refresh();
    expect(player.render()).toContain('data-option="forest"');

    await player.choose("forest");
    expect(server.calls.some((c) => c.path === CHOICE)).toBe(true);
    const html = player.render();
    expect(html).toContain('data-turn="s2t1"');
    expect(html).toContain("asset-trail-camp"); // scene image advanced
    expect(html).not.toContain('data-option="forest"');
  });

  it("awaits the server score: no feedback before the response arrives", async () => {
    const server = new FixtureServer().on("GET", TURN, fixture<TurnPayload>("turn_initial"));
    const player = playerWith(server);
    await player.refresh();
    expect(player.render()).not.toContain('class="feedback');
    expect(player.lastOutcome).toBeNull();
  });

  it("reload restores the identical view from API state", async () => {
    const server = new FixtureServer().on("GET", TURN, fixture<TurnPayload>("turn_initial"));
    const one = playerWith(server);
    await one.refresh();
    const reloaded = playerWith(server);
    await reloaded.refresh();
    expect(reloaded.render()).toBe(one.render());
  });

  it("completed sessions render the end screen", async () => {
    const server = new FixtureServer().on("GET", TURN, {
      session_id: "s-0001",
      status: "completed",
      turn: null,
    });
    const player = playerWith(server);
    await player.refresh();
    expect(player.render()).toContain('data-status="completed"');
  });
});
