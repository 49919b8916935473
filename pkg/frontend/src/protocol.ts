// Wire protocol: JSON text frames over one websocket connection.
// Mirrors the server message schema exactly.

export interface InitMsg {
  type: "init";
  image: string; // base64 PNG
  depth: string; // base64 npy, passed through opaquely
  config_overrides?: Record<string, unknown>;
}

export interface ActionMsg {
  type: "action";
  frame_index: number;
  keypoints: [number, number][]; // 42 entries
  visibility: boolean[]; // 42 entries
}

export interface FrameMsg {
  type: "frame";
  frame_index: number;
  pixels: string; // base64 PNG
  gen_ms: number;
  rolling_fps: number;
}

export interface StatsMsg {
  type: "stats";
  ttff_ms: number | null;
  total_frames: number;
  mean_fps: number;
  skipped_actions?: number;
}

export interface ErrorMsg {
  type: "error";
  code: string;
  message: string;
}

export type ServerMsg = FrameMsg | StatsMsg | ErrorMsg;

export function encodeInit(image: string, depth: string, overrides?: Record<string, unknown>): string {
  const msg: InitMsg = { type: "init", image, depth };
  if (overrides && Object.keys(overrides).length) msg.config_overrides = overrides;
  return JSON.stringify(msg);
}

export function encodeAction(frameIndex: number, keypoints: [number, number][], visibility: boolean[]): string {
  if (keypoints.length !== 42 || visibility.length !== 42) {
    throw new Error(`action must carry 42 keypoints, got ${keypoints.length}/${visibility.length}`);
  }
  const msg: ActionMsg = { type: "action", frame_index: frameIndex, keypoints, visibility };
  return JSON.stringify(msg);
}

export function parseServerMsg(text: string): ServerMsg | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  const msg = raw as { type?: string };
  if (msg.type === "frame" || msg.type === "stats" || msg.type === "error") {
    return raw as ServerMsg;
  }
  return null;
}

export interface SceneInfo {
  id: number;
  touched: boolean;
  width: number;
  height: number;
  image?: string;
  depth?: string;
}
