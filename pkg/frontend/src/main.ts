// Browser wiring: scene picker, canvas rig editor, frame display, HUD.
// Networking, input sampling, and rendering run as decoupled loops.

import { SceneInfo } from "./protocol";
import { BONES, FINGERTIPS, RigState, WRIST } from "./rig";
import { SteeringSession, startTicker } from "./session";
import { Recorder, parseRecording, playRecording, serializeRecording } from "./replay";

const params = new URLSearchParams(location.search);
const SERVER = params.get("server") ?? `${location.hostname}:8765`;
const TICK_HZ = Number(params.get("tick") ?? 15);
const SCENE_ID = Number(params.get("scene") ?? 0);
const SCALE = 8; // canvas pixels per scene pixel

const $ = (id: string) => document.getElementById(id)!;

let rig: RigState | null = null;
let session: SteeringSession | null = null;
let recorder: Recorder | null = null;
let stopTicker: (() => void) | null = null;
let stopReplay: (() => void) | null = null;
let sceneImage: HTMLImageElement | null = null;
let lastFrameImage: HTMLImageElement | null = null;

function banner(text: string | null): void {
  const el = $("banner");
  el.textContent = text ?? "";
  el.style.display = text ? "block" : "none";
}

async function loadScenes(): Promise<SceneInfo[]> {
  const resp = await fetch(`http://${SERVER}/scenes`);
  return (await resp.json()) as SceneInfo[];
}

async function loadScene(id: number): Promise<SceneInfo> {
  const resp = await fetch(`http://${SERVER}/scenes/${id}`);
  return (await resp.json()) as SceneInfo;
}

function pngImage(b64: string): Promise<HTMLImageElement> {
  return new Promise((resolve, reject) => {
    const img = new Image();
    img.onload = () => resolve(img);
    img.onerror = reject;
    img.src = `data:image/png;base64,${b64}`;
  });
}

function connect(scene: SceneInfo): void {
  const ws = new WebSocket(`ws://${SERVER}`);
  const sess = new SteeringSession(
    { send: (t) => ws.send(t), bufferedAmount: () => ws.bufferedAmount },
    {
      onFrame: async (_i, pixels) => {
        lastFrameImage = await pngImage(pixels);
      },
      onError: (code, message) => banner(`server error ${code}: ${message}`),
    },
  );
  ws.onopen = () => {
    sess.init(scene.image!, scene.depth!, { seed: Number(params.get("seed") ?? 0) });
    stopTicker = startTicker(TICK_HZ, () => {
      if (stopReplay) return; // replay drives the queue instead of the rig
      const snap = rig!.snapshot();
      const sent = sess.tick(snap.keypoints, snap.visibility);
      if (sent && recorder) recorder.capture(sess.sentPayloads[sess.sentPayloads.length - 1]);
    });
  };
  ws.onmessage = (ev) => sess.onMessage(String(ev.data));
  ws.onclose = () => {
    stopTicker?.();
    banner("connection closed; reload to start a new session");
  };
  ws.onerror = () => banner("connection error");
  session = sess;
}

function drawLoop(): void {
  const canvas = $("view") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  ctx.imageSmoothingEnabled = false;
  const render = () => {
    ctx.fillStyle = "#111";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    const frame = lastFrameImage ?? sceneImage;
    if (frame) ctx.drawImage(frame, 0, 0, canvas.width, canvas.height);
    if (rig) {
      for (const hand of rig.hands) {
        if (!hand.visible) continue;
        ctx.strokeStyle = "rgba(80,200,255,0.9)";
        ctx.lineWidth = 2;
        for (const [a, b] of BONES) {
          ctx.beginPath();
          ctx.moveTo(hand.points[a].x * SCALE, hand.points[a].y * SCALE);
          ctx.lineTo(hand.points[b].x * SCALE, hand.points[b].y * SCALE);
          ctx.stroke();
        }
        ctx.fillStyle = "rgba(255,180,40,0.95)";
        for (const h of [WRIST, ...FINGERTIPS]) {
          ctx.beginPath();
          ctx.arc(hand.points[h].x * SCALE, hand.points[h].y * SCALE, 5, 0, Math.PI * 2);
          ctx.fill();
        }
      }
    }
    const v = session?.view;
    $("hud").textContent = v
      ? `fps ${v.hudFps.toFixed(1)} (server ${v.serverRollingFps.toFixed(1)}) | ` +
        `ttff ${v.ttffMs === null ? "-" : v.ttffMs.toFixed(0) + " ms"} | ` +
        `frame ${v.frameIndex} | sent ${v.actionsSent} | dropped ${v.dropsBackpressure}`
      : "disconnected";
    requestAnimationFrame(render);
  };
  requestAnimationFrame(render);
}

function wireInput(canvas: HTMLCanvasElement): void {
  let active: { hand: number; handle: number } | null = null;
  const toScene = (ev: PointerEvent) => {
    const rect = canvas.getBoundingClientRect();
    return { x: (ev.clientX - rect.left) / SCALE, y: (ev.clientY - rect.top) / SCALE };
  };
  canvas.addEventListener("pointerdown", (ev) => {
    active = rig?.pick(toScene(ev)) ?? null;
    canvas.setPointerCapture(ev.pointerId);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (active && rig) rig.drag(active.hand, active.handle, toScene(ev));
  });
  canvas.addEventListener("pointerup", () => (active = null));
}

async function start(): Promise<void> {
  try {
    const scenes = await loadScenes();
    const picker = $("scene") as HTMLSelectElement;
    for (const s of scenes) {
      const opt = document.createElement("option");
      opt.value = String(s.id);
      opt.textContent = `scene ${s.id}${s.touched ? " (contact script)" : ""}`;
      picker.appendChild(opt);
    }
    picker.value = String(SCENE_ID);
    const scene = await loadScene(Number(picker.value));
    sceneImage = await pngImage(scene.image!);
    rig = new RigState({ width: scene.width, height: scene.height });
    const canvas = $("view") as HTMLCanvasElement;
    canvas.width = scene.width * SCALE;
    canvas.height = scene.height * SCALE;
    wireInput(canvas);
    drawLoop();
    connect(scene);

    $("record").addEventListener("click", () => {
      if (recorder) {
        const rec = recorder.finish();
        recorder = null;
        ($("record") as HTMLButtonElement).textContent = "record";
        const blob = new Blob([serializeRecording(rec)], { type: "application/json" });
        const a = document.createElement("a");
        a.href = URL.createObjectURL(blob);
        a.download = "trajectory.json";
        a.click();
      } else {
        recorder = new Recorder(TICK_HZ);
        ($("record") as HTMLButtonElement).textContent = "stop + save";
      }
    });
    ($("replay") as HTMLInputElement).addEventListener("change", async (ev) => {
      const file = (ev.target as HTMLInputElement).files?.[0];
      if (!file || !session) return;
      const rec = parseRecording(await file.text());
      banner(`replaying ${rec.payloads.length} recorded actions`);
      stopReplay = playRecording(
        rec,
        (payload) => session!.replayPayload(payload),
        () => {
          stopReplay = null;
          banner(null);
        },
      );
    });
    $("hand2").addEventListener("change", (ev) => {
      rig?.setVisible(1, (ev.target as HTMLInputElement).checked);
    });
  } catch (e) {
    banner(`failed to start: ${e}`);
  }
}

start();
