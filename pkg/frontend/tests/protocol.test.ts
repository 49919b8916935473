import { describe, expect, it } from "vitest";

import { encodeAction, encodeInit, parseServerMsg } from "../src/protocol";

describe("protocol encoding", () => {
  it("init carries image, depth, and optional overrides", () => {
    const plain = JSON.parse(encodeInit("IMG", "DEP"));
    expect(plain).toEqual({ type: "init", image: "IMG", depth: "DEP" });
    const withOverrides = JSON.parse(encodeInit("IMG", "DEP", { seed: 4 }));
    expect(withOverrides.config_overrides).toEqual({ seed: 4 });
  });

  it("action requires exactly 42 keypoints", () => {
    const kp = Array.from({ length: 42 }, () => [1, 2] as [number, number]);
    const vis = Array.from({ length: 42 }, () => true);
    const msg = JSON.parse(encodeAction(3, kp, vis));
    expect(msg.frame_index).toBe(3);
    expect(msg.keypoints).toHaveLength(42);
    expect(() => encodeAction(0, kp.slice(1), vis)).toThrow(/42/);
    expect(() => encodeAction(0, kp, vis.slice(1))).toThrow(/42/);
  });

  it("parses only known server message types", () => {
    expect(parseServerMsg("garbage")).toBeNull();
    expect(parseServerMsg(JSON.stringify({ type: "unknown" }))).toBeNull();
    const frame = parseServerMsg(
      JSON.stringify({ type: "frame", frame_index: 0, pixels: "AA==", gen_ms: 1, rolling_fps: 2 }),
    );
    expect(frame?.type).toBe("frame");
    const stats = parseServerMsg(
      JSON.stringify({ type: "stats", ttff_ms: null, total_frames: 0, mean_fps: 0 }),
    );
    expect(stats?.type).toBe("stats");
    const err = parseServerMsg(JSON.stringify({ type: "error", code: "x", message: "y" }));
    expect(err?.type).toBe("error");
  });
});
