// Connection-side session state machine, kept DOM-free so it runs under node.
// One outgoing queue with strictly increasing action indices; ticks are
// dropped (never reordered) under backpressure.

import { encodeAction, encodeInit, parseServerMsg, ServerMsg } from "./protocol";

export interface Transport {
  send(text: string): void;
  /** Bytes queued but not yet flushed (WebSocket.bufferedAmount). */
  bufferedAmount?: () => number;
}

export interface SessionEvents {
  onFrame?(frameIndex: number, pixelsB64: string, genMs: number, rollingFps: number): void;
  onStats?(ttffMs: number | null, totalFrames: number, meanFps: number): void;
  onError?(code: string, message: string): void;
}

export interface SessionView {
  initSent: boolean;
  frameIndex: number; // newest received frame index, -1 before any
  lastFrame: string | null;
  serverRollingFps: number;
  serverMeanFps: number;
  ttffMs: number | null;
  actionsSent: number;
  dropsBackpressure: number;
  dropsMalformed: number;
  hudFps: number; // client-side: received pixel frames per second
  errorBanner: string | null;
}

const BACKPRESSURE_LIMIT = 256 * 1024;
const FPS_WINDOW_MS = 4000;

export class SteeringSession {
  view: SessionView = {
    initSent: false,
    frameIndex: -1,
    lastFrame: null,
    serverRollingFps: 0,
    serverMeanFps: 0,
    ttffMs: null,
    actionsSent: 0,
    dropsBackpressure: 0,
    dropsMalformed: 0,
    hudFps: 0,
    errorBanner: null,
  };
  readonly sentPayloads: string[] = []; // protocol trace (action payloads, in order)
  private nextActionIndex = 0;
  private arrivals: number[] = [];
  private halted = false;

  constructor(
    private transport: Transport,
    private events: SessionEvents = {},
    private clock: () => number = () => Date.now(),
  ) {}

  init(imageB64: string, depthB64: string, overrides?: Record<string, unknown>): void {
    if (this.view.initSent) throw new Error("session already initialized");
    this.transport.send(encodeInit(imageB64, depthB64, overrides));
    this.view.initSent = true;
  }

  /** One control tick: send the rig snapshot unless backpressured or halted.
   *  Returns true when the action went out. */
  tick(keypoints: [number, number][], visibility: boolean[]): boolean {
    if (!this.view.initSent || this.halted) return false;
    const buffered = this.transport.bufferedAmount?.() ?? 0;
    if (buffered > BACKPRESSURE_LIMIT) {
      this.view.dropsBackpressure += 1; // drop this tick; indices stay monotone
      return false;
    }
    const payload = encodeAction(this.nextActionIndex, keypoints, visibility);
    this.transport.send(payload);
    this.sentPayloads.push(payload);
    this.nextActionIndex += 1;
    this.view.actionsSent += 1;
    return true;
  }

  /** Replay a previously recorded payload byte-identically (replay mode). */
  replayPayload(payload: string): void {
    this.transport.send(payload);
    this.sentPayloads.push(payload);
    const parsed = JSON.parse(payload) as { frame_index: number };
    this.nextActionIndex = parsed.frame_index + 1;
    this.view.actionsSent += 1;
  }

  onMessage(text: string): void {
    const msg = parseServerMsg(text);
    if (msg === null) {
      this.view.dropsMalformed += 1; // skip with diagnostic; session continues
      return;
    }
    this.apply(msg);
  }

  private apply(msg: ServerMsg): void {
    if (msg.type === "frame") {
      this.view.frameIndex = msg.frame_index;
      this.view.lastFrame = msg.pixels;
      this.view.serverRollingFps = msg.rolling_fps;
      const now = this.clock();
      this.arrivals.push(now);
      const cutoff = now - FPS_WINDOW_MS;
      while (this.arrivals.length && this.arrivals[0] < cutoff) this.arrivals.shift();
      this.view.hudFps =
        this.arrivals.length > 1
          ? ((this.arrivals.length - 1) * 1000) / (now - this.arrivals[0])
          : 0;
      this.events.onFrame?.(msg.frame_index, msg.pixels, msg.gen_ms, msg.rolling_fps);
    } else if (msg.type === "stats") {
      this.view.ttffMs = msg.ttff_ms;
      this.view.serverMeanFps = msg.mean_fps;
      this.events.onStats?.(msg.ttff_ms, msg.total_frames, msg.mean_fps);
    } else {
      this.view.errorBanner = `${msg.code}: ${msg.message}`;
      if (!this.view.initSent || msg.code === "init_failed") {
        this.halted = true; // no actions after a failed init
      }
      this.events.onError?.(msg.code, msg.message);
    }
  }
}

/** Fixed-rate driver: calls `fn` every 1000/hz ms via the injected scheduler. */
export function startTicker(
  hz: number,
  fn: () => void,
  setIntervalImpl: typeof setInterval = setInterval,
): () => void {
  const handle = setIntervalImpl(fn, 1000 / hz);
  return () => clearInterval(handle as Parameters<typeof clearInterval>[0]);
}
