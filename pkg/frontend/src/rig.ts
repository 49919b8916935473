// Two 21-point hand skeletons with drag handles at the wrist and fingertips.
// Non-handle joints interpolate along the wrist->tip chain, so the server
// always receives a well-formed full 42-point trajectory.

export const POINTS_PER_HAND = 21;
export const WRIST = 0;
export const FINGERTIPS = [4, 8, 12, 16, 20];
// Joint radii of the canonical finger chain (fractions of the tip distance).
const JOINT_FRACTIONS = [5.0 / 11.6, 7.2 / 11.6, 9.4 / 11.6, 1.0];

export interface Point {
  x: number;
  y: number;
}

export interface HandState {
  points: Point[]; // 21, derived from handles
  visible: boolean;
}

export interface RigBounds {
  width: number;
  height: number;
}

const clamp = (v: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, v));

export class RigState {
  hands: [HandState, HandState];
  bounds: RigBounds;

  constructor(bounds: RigBounds) {
    this.bounds = bounds;
    this.hands = [this.defaultHand(0.35), this.defaultHand(0.7)];
    this.hands[1].visible = false;
  }

  private defaultHand(cx: number): HandState {
    const wrist = { x: cx * this.bounds.width, y: 0.75 * this.bounds.height };
    const points: Point[] = [wrist];
    const spread = [-40, -18, 0, 18, 40].map((d) => (d * Math.PI) / 180);
    const reach = 0.2 * this.bounds.height;
    for (const ang of spread) {
      const tip = {
        x: wrist.x + reach * Math.cos(ang - Math.PI / 2),
        y: wrist.y + reach * Math.sin(ang - Math.PI / 2),
      };
      for (const f of JOINT_FRACTIONS) {
        points.push({ x: wrist.x + (tip.x - wrist.x) * f, y: wrist.y + (tip.y - wrist.y) * f });
      }
    }
    const hand: HandState = { points, visible: true };
    this.clampHand(hand);
    return hand;
  }

  handles(hand: number): number[] {
    return [WRIST, ...FINGERTIPS];
  }

  /** Drag one handle; wrist drags translate the whole hand, fingertip drags
   *  re-interpolate that finger's joints. */
  drag(hand: number, handle: number, to: Point): void {
    const h = this.hands[hand];
    const target = {
      x: clamp(to.x, 0, this.bounds.width - 1),
      y: clamp(to.y, 0, this.bounds.height - 1),
    };
    if (handle === WRIST) {
      const dx = target.x - h.points[WRIST].x;
      const dy = target.y - h.points[WRIST].y;
      for (const p of h.points) {
        p.x += dx;
        p.y += dy;
      }
    } else if (FINGERTIPS.includes(handle)) {
      const base = handle - 3; // first joint of the finger chain
      const wrist = h.points[WRIST];
      for (let j = 0; j < 4; j++) {
        const f = JOINT_FRACTIONS[j];
        h.points[base + j] = {
          x: wrist.x + (target.x - wrist.x) * f,
          y: wrist.y + (target.y - wrist.y) * f,
        };
      }
    } else {
      return; // only handles are draggable; topology stays fixed
    }
    this.clampHand(h);
  }

  private clampHand(h: HandState): void {
    for (const p of h.points) {
      p.x = clamp(p.x, 0, this.bounds.width - 1);
      p.y = clamp(p.y, 0, this.bounds.height - 1);
    }
  }

  setVisible(hand: number, visible: boolean): void {
    this.hands[hand].visible = visible;
  }

  /** Nearest handle within `radius` of a pointer position, or null. */
  pick(pos: Point, radius = 8): { hand: number; handle: number } | null {
    let best: { hand: number; handle: number; d: number } | null = null;
    for (let hand = 0; hand < 2; hand++) {
      if (!this.hands[hand].visible) continue;
      for (const handle of this.handles(hand)) {
        const p = this.hands[hand].points[handle];
        const d = Math.hypot(p.x - pos.x, p.y - pos.y);
        if (d <= radius && (best === null || d < best.d)) {
          best = { hand, handle, d };
        }
      }
    }
    return best && { hand: best.hand, handle: best.handle };
  }

  /** Full 42-point snapshot in server order. */
  snapshot(): { keypoints: [number, number][]; visibility: boolean[] } {
    const keypoints: [number, number][] = [];
    const visibility: boolean[] = [];
    for (const hand of this.hands) {
      for (const p of hand.points) {
        keypoints.push([p.x, p.y]);
        visibility.push(hand.visible);
      }
    }
    return { keypoints, visibility };
  }
}

// Skeleton edges for overlay drawing: wrist to finger bases, then the chains.
export const BONES: [number, number][] = (() => {
  const bones: [number, number][] = [];
  for (const base of [1, 5, 9, 13, 17]) {
    bones.push([WRIST, base]);
    for (let j = 0; j < 3; j++) bones.push([base + j, base + j + 1]);
  }
  return bones;
})();
