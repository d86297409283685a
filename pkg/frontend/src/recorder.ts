/** Microphone capture via the browser MediaRecorder API.
 *
 * The recorded blob is uploaded opaquely; nothing is analyzed client-side.
 * In dev mode (no microphone, automated tests, stub backends) a
 * DevResponder stands in and submits pre-seeded stub references instead.
 */

export interface AttemptSource {
  start(): Promise<void>;
  stop(): Promise<Blob>;
  lastTakeUrl(): string | null;
}

export class MicrophoneRecorder implements AttemptSource {
  private recorder: MediaRecorder | null = null;
  private chunks: BlobPart[] = [];
  private lastTake: Blob | null = null;

  async start(): Promise<void> {
    const stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.chunks = [];
    this.recorder = new MediaRecorder(stream);
    this.recorder.ondataavailable = (event) => this.chunks.push(event.data);
    this.recorder.start();
  }

  stop(): Promise<Blob> {
    return new Promise((resolve, reject) => {
      const recorder = this.recorder;
      if (!recorder) {
        reject(new Error("not recording"));
        return;
      }
      recorder.onstop = () => {
        const blob = new Blob(this.chunks, { type: recorder.mimeType || "audio/webm" });
        this.lastTake = blob;
        recorder.stream.getTracks().forEach((track) => track.stop());
        this.recorder = null;
        resolve(blob);
      };
      recorder.stop();
    });
  }

  /** Self-playback of the most recent take. */
  lastTakeUrl(): string | null {
    return this.lastTake ? URL.createObjectURL(this.lastTake) : null;
  }
}

/** Typed-response dev mode: no microphone, submits stub refs directly. */
export class DevResponder {
  private queue: string[] = [];

  enqueue(audioRef: string): void {
    this.queue.push(audioRef);
  }

  next(): string {
    const ref = this.queue.shift();
    if (ref === undefined) {
      throw new Error("no stub responses queued");
    }
    return ref;
  }

  get pending(): number {
    return this.queue.length;
  }
}
