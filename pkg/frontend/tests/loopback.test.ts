// End-to-end loopback: spawn the python streaming service, drive it with the
// real client session at 15 Hz, and check throughput accounting agreement.
// Auto-skips when the python package is not importable on this machine.

import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { SteeringSession, startTicker } from "../src/session";
import { RigState } from "../src/rig";

const PYTHON = process.env.PYTHON ?? "python3";
const STREAM_SECONDS = Number(process.env.LOOPBACK_SECONDS ?? 30);

const pythonReady =
  spawnSync(PYTHON, ["-c", "import handworld"], { timeout: 30_000 }).status === 0;

const maybe = pythonReady ? describe : describe.skip;

maybe("loopback against a locally served checkpoint", () => {
  let proc: ReturnType<typeof spawn>;
  let port: number;
  const logs: string[] = [];

  beforeAll(async () => {
    const dir = mkdtempSync(join(tmpdir(), "handworld-ui-"));
    const settings = {
      config: { frames: 8, pixel_hw: [16, 16], dit_depth: 1, dit_heads: 4, seed: 0 },
    };
    const settingsPath = join(dir, "cfg.json");
    writeFileSync(settingsPath, JSON.stringify(settings));
    const ckptPath = join(dir, "ck.pt");
    const make = spawnSync(PYTHON, [
      "-c",
      [
        "import torch, json, sys",
        "from handworld.core import Config",
        "from handworld.model import WorldModel, save_checkpoint",
        `cfg = Config(**json.load(open(${JSON.stringify(settingsPath)}))['config'])`,
        "torch.manual_seed(0)",
        `save_checkpoint(${JSON.stringify(ckptPath)}, WorldModel(cfg), stage='loopback')`,
      ].join("\n"),
    ], { timeout: 120_000 });
    expect(make.status, String(make.stderr)).toBe(0);

    port = 8700 + (process.pid % 700);
    proc = spawn(PYTHON, [
      "-m", "handworld.cli", "serve", "--checkpoint", ckptPath, "--port", String(port),
    ]);
    proc.stderr!.on("data", (d) => logs.push(String(d)));
    proc.stdout!.on("data", (d) => logs.push(String(d)));

    const deadline = Date.now() + 60_000;
    while (Date.now() < deadline) {
      try {
        const resp = await fetch(`http://127.0.0.1:${port}/scenes`);
        if (resp.ok) return;
      } catch {
        await new Promise((r) => setTimeout(r, 300));
      }
    }
    throw new Error(`server did not come up: ${logs.join("")}`);
  }, 120_000);

  afterAll(() => {
    proc?.kill();
  });

  it(
    "sustains 15 Hz actions, renders frames, and agrees with server fps within 10%",
    async () => {
      const scene = await (await fetch(`http://127.0.0.1:${port}/scenes/0`)).json();
      const ws = new WebSocket(`ws://127.0.0.1:${port}`, { maxPayload: 2 ** 22 });
      await new Promise((resolve, reject) => {
        ws.on("open", resolve);
        ws.on("error", reject);
      });

      let firstFrameAt = 0;
      let initSentAt = 0;
      let framesSeen = 0;
      let pngOk = true;
      const session = new SteeringSession(
        { send: (t) => ws.send(t), bufferedAmount: () => ws.bufferedAmount },
        {
          onFrame: (_i, pixels) => {
            framesSeen += 1;
            if (firstFrameAt === 0) firstFrameAt = Date.now();
            const bytes = Buffer.from(pixels, "base64");
            // PNG magic: renders are decodable lossless images
            pngOk = pngOk && bytes[0] === 0x89 && bytes[1] === 0x50;
          },
        },
      );
      ws.on("message", (data) => session.onMessage(String(data)));

      initSentAt = Date.now();
      session.init(scene.image, scene.depth, { seed: 1 });
      const rig = new RigState({ width: scene.width, height: scene.height });
      let step = 0;
      const start = Date.now();
      const stop = startTicker(15, () => {
        // steady drag so the stream is not idle
        const wrist = rig.hands[0].points[0];
        rig.drag(0, 0, { x: wrist.x + Math.sin(step / 8), y: wrist.y + Math.cos(step / 8) });
        step += 1;
        const snap = rig.snapshot();
        session.tick(snap.keypoints, snap.visibility);
      });
      await new Promise((r) => setTimeout(r, STREAM_SECONDS * 1000));
      stop();
      const elapsedS = (Date.now() - start) / 1000;
      await new Promise((r) => setTimeout(r, 500)); // drain trailing stats
      ws.close();

      // init -> first rendered frame vs server-reported TTFF (plus transport)
      const clientTtffMs = firstFrameAt - initSentAt;
      expect(session.view.ttffMs).not.toBeNull();
      expect(Math.abs(clientTtffMs - session.view.ttffMs!)).toBeLessThan(100);

      const sendHz = session.view.actionsSent / elapsedS;
      expect(sendHz).toBeGreaterThanOrEqual(15 * 0.93); // >= ~15 Hz sustained
      expect(framesSeen).toBeGreaterThan(0);
      expect(pngOk).toBe(true);
      expect(session.view.ttffMs).not.toBeNull();

      // HUD fps (client arrival rate) vs server-reported mean over the run.
      const clientMeanFps = (framesSeen - 1) / ((Date.now() - 500 - firstFrameAt) / 1000);
      const serverMeanFps = session.view.serverMeanFps;
      expect(serverMeanFps).toBeGreaterThan(0);
      const agreement = Math.abs(clientMeanFps - serverMeanFps) / serverMeanFps;
      // eslint-disable-next-line no-console
      console.log(
        `loopback: ${sendHz.toFixed(1)} Hz actions, ${framesSeen} frames, ` +
          `client ${clientMeanFps.toFixed(2)} fps vs server ${serverMeanFps.toFixed(2)} fps ` +
          `(${(agreement * 100).toFixed(1)}% apart), ttff ${session.view.ttffMs?.toFixed(0)} ms`,
      );
      expect(agreement).toBeLessThan(0.1);
    },
    (STREAM_SECONDS + 90) * 1000,
  );
});
