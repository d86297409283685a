/** Browser entry: wires the controllers to the DOM with one delegated
 * click/change listener per screen. Query parameters select the screen:
 *
 *   ?screen=player&session=s-0001          child practice view
 *   ?screen=player&story=<id>&child=<id>   starts a fresh session
 *   ?screen=dashboard&child=<id>           clinician dashboard
 *   ?screen=config                         story configuration
 *
 * Add &dev=1 to drive the player with stub refs typed into a prompt box
 * instead of microphone capture.
 */

import { ApiClient } from "./api.js";
import { ConfigScreen } from "./config_screen.js";
import { DashboardScreen } from "./dashboard.js";
import { StoryPlayer } from "./player.js";
import { MicrophoneRecorder } from "./recorder.js";

const api = new ApiClient("");

function playAudio(url: string): void {
  void new Audio(url).play();
}

async function mountPlayer(root: HTMLElement, params: URLSearchParams): Promise<void> {
  let sessionId = params.get("session");
  if (!sessionId) {
    const summary = await api.createSession(
      params.get("child") ?? "demo-child",
      params.get("story") ?? "",
      (params.get("mode") as "word" | "sentence") ?? "word",
    );
    sessionId = summary.session_id;
  }
  const player = new StoryPlayer(api, sessionId);
  const recorder = new MicrophoneRecorder();
  const devMode = params.get("dev") === "1";
  const draw = () => {
    root.innerHTML = player.render();
  };
  await player.refresh();
  draw();

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-action]");
    if (!target) return;
    const action = target.getAttribute("data-action");
    const run = async () => {
      switch (action) {
        case "start-recording":
          player.startRecording();
          if (!devMode) await recorder.start();
          break;
        case "stop-recording":
          player.stopRecording();
          if (!devMode) await recorder.stop();
          break;
        case "submit-attempt":
          if (devMode) {
            const ref = window.prompt("stub audio ref:") ?? "";
            if (ref) await player.submitStub(ref);
          } else {
            const blob = await recorder.stop().catch(() => null);
            if (blob) await player.submitRecording(blob);
          }
          break;
        case "play-back": {
          const url = recorder.lastTakeUrl();
          if (url) playAudio(url);
          break;
        }
        case "choose":
          await player.choose(target.getAttribute("data-option") ?? "");
          break;
        case "play-word":
        case "practice-word": {
          const card = await api.wordCard(target.getAttribute("data-word") ?? "");
          playAudio(api.audioUrl(card.audio_ref));
          break;
        }
        case "play-own-recording":
          playAudio(api.audioUrl(target.getAttribute("data-ref") ?? ""));
          break;
        default:
          return;
      }
      draw();
    };
    void run();
  });
}

async function mountDashboard(root: HTMLElement, params: URLSearchParams): Promise<void> {
  const screen = new DashboardScreen(api, params.get("child") ?? "demo-child");
  await screen.load();
  const draw = () => {
    root.innerHTML = screen.render();
  };
  draw();
  root.addEventListener("change", (event) => {
    const target = event.target as HTMLSelectElement;
    const action = target.getAttribute("data-action");
    const run = async () => {
      if (action === "filter-word") await screen.setWordFilter(target.value);
      if (action === "filter-band") await screen.setBandFilter(target.value as never);
      draw();
    };
    void run();
  });
  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-action]");
    if (!target) return;
    const action = target.getAttribute("data-action");
    const run = async () => {
      if (action === "export-report") {
        const text = await screen.exportReport();
        const blob = new Blob([text], { type: "application/json" });
        const link = document.createElement("a");
        link.href = URL.createObjectURL(blob);
        link.download = "progress-report.json";
        link.click();
      }
      if (action === "play-ref") {
        playAudio(api.audioUrl(target.getAttribute("data-ref") ?? ""));
      }
    };
    void run();
  });
}

async function mountConfig(root: HTMLElement): Promise<void> {
  const screen = new ConfigScreen(api);
  const draw = () => {
    root.innerHTML = screen.render();
  };
  draw();
  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-action]");
    if (!target) return;
    event.preventDefault();
    const action = target.getAttribute("data-action");
    const run = async () => {
      if (action === "recommend") {
        const input = root.querySelector<HTMLInputElement>("input[name=phonemes]");
        screen.phonemes = (input?.value ?? "").split(/\s+/).filter(Boolean);
        await screen.recommend();
      }
      if (action === "generate") await screen.generate();
      if (action === "save") await screen.save();
      draw();
    };
    void run();
  });
  root.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.getAttribute("data-action") === "toggle-word") {
      if (target.checked) screen.chosenWords.push(target.value);
      else screen.chosenWords = screen.chosenWords.filter((w) => w !== target.value);
    }
  });
}

export async function main(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  const params = new URLSearchParams(window.location.search);
  const screen = params.get("screen") ?? "player";
  if (screen === "dashboard") await mountDashboard(root, params);
  else if (screen === "config") await mountConfig(root);
  else await mountPlayer(root, params);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void main();
}
