/** Payload shapes of the /v1 API. The UI renders these verbatim. */

export type Band = "excellent" | "good" | "fair" | "needs_practice";
export type Mode = "word" | "sentence";
export type OutcomeKind = "advance" | "retry" | "proceed_flagged";
export type Feedback = "none" | "voice_prompt" | "transcription_cue";

export interface StorySummary {
  story_id: string;
  title: string;
  target_phonemes: string[];
  target_words: string[];
  mode_support: Mode[];
  scene_count: number;
  estimated_minutes: number;
}

export interface BlankPayload {
  slot: number;
  allowed_words: string[];
}

export interface MouthCue {
  phoneme: string;
  image_ref: string;
  placement: string;
  gesture_tip: string;
}

export interface ChoiceOptionPayload {
  option_id: string;
  label: string;
}

export interface TurnPayload {
  session_id: string;
  status: string;
  mode?: Mode;
  scene_id?: string;
  image_ref?: string;
  turn: {
    turn_id: string;
    character_line: string;
    parent_tip: string;
    expected_response: string;
    highlighted_words: string[];
    bombardment_count: number;
    blanks: BlankPayload[];
    blank_index: number;
  } | null;
  target_words?: string[];
  mouth_cues?: MouthCue[];
  pending_choice?: boolean;
  choice?: { prompt: string; options: ChoiceOptionPayload[] } | null;
  retry_count?: number;
}

export interface AttemptScorePayload {
  attempt_id: string;
  word: string;
  distance: number;
  pfer: number;
  band: Band;
  band_label: string;
  target_found: boolean;
  orthographic_transcript: string;
  phonemic_transcript: string;
  audio_ref: string;
}

export interface SubmitResponse {
  outcome: OutcomeKind;
  feedback: Feedback;
  readback_text: string;
  session_status: string;
  pending_choice: boolean;
  score: AttemptScorePayload;
}

export interface SessionSummary {
  session_id: string;
  child_id: string;
  story_id: string;
  story_title: string;
  mode: Mode;
  status: string;
  cursor: { scene_id: string; turn_id: string };
  blank_index: number;
  retry_count: number;
  pending_choice: boolean;
  attempt_count: number;
  turn?: TurnPayload;
}

export interface WordCard {
  word: string;
  ipa: string[];
  audio_ref: string;
  mouth_cues: MouthCue[];
}

export interface WordStats {
  word: string;
  production_count: number;
  band_histogram: Record<Band, number>;
  mean_distance: number;
}

export interface DashboardPayload {
  child_id: string;
  total_attempts: number;
  band_distribution: Record<Band, number>;
  per_word: WordStats[];
}

export interface RecordingCardPayload {
  attempt_id: string;
  session_id: string;
  ts: string;
  word: string;
  band: Band;
  band_label: string;
  distance: number;
  phonemic_transcript: string;
  orthographic_transcript: string;
  prompt_text: string;
  audio_ref: string;
}

export interface Violation {
  code: string;
  message: string;
  where: string;
}

export interface ValidateResponse {
  valid: boolean;
  violations: Violation[];
}

export interface RecordingFilters {
  word?: string;
  band?: Band;
  session?: string;
}
