"""Pilot run: calibrate desk-scale training budgets for the acceptance suite."""

import logging
import sys
import time
from pathlib import Path

import numpy as np
import torch

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s", datefmt="%H:%M:%S")
logging.getLogger("handworld.dataset").setLevel(logging.ERROR)
log = logging.getLogger("pilot")

from handworld.core import Config, make_schedule, seed_everything
from handworld.dataset import build_dataset, generate_clip
from handworld.training import ClipStore, train_stage1, loss_reduction
from handworld.model import WorldModel, save_checkpoint
from handworld.distillation import DMDState, train_stage2
from handworld.engine import generate_offline

OUT = Path("scripts/pilot_out")
OUT.mkdir(parents=True, exist_ok=True)

cfg = Config(frames=16, pixel_hw=(32, 32), dit_depth=4, dit_heads=4, seed=0)
seed_everything(0)

t0 = time.time()
ds_dir = OUT / "ds"
if not (ds_dir / "manifest.txt").exists():
    build_dataset(48, cfg, ds_dir, seed=0)
log.info("dataset ready %.1fs", time.time() - t0)

store = ClipStore.from_dataset(ds_dir, cfg)
log.info("train clips: %d", len(store))

model = WorldModel(cfg)
steps1 = int(sys.argv[1]) if len(sys.argv) > 1 else 400
t0 = time.time()
hist = train_stage1(model, store, steps=steps1, batch_size=8, lr=2e-3, seed=0,
                    log_path=OUT / "stage1.tsv", log_every=20)
base, final = loss_reduction(hist, window=10)
log.info("stage1 %d steps in %.0fs; ma10@10=%.1f final ma=%.1f reduction=%.1f%%",
         steps1, time.time() - t0, base, final, 100 * (1 - final / base))
save_checkpoint(OUT / "stage1.pt", model, stage="stage1")

sched = make_schedule(cfg.diffusion_T)
state = DMDState.from_stage1(model, sched, fake_update_ratio=5)
warm = int(sys.argv[2]) if len(sys.argv) > 2 else 200
roll = int(sys.argv[3]) if len(sys.argv) > 3 else 40
t0 = time.time()
recs = train_stage2(state, store.batches(4, seed=1), warmup_steps=warm, rollout_steps=roll,
                    generator_lr=2e-4, generator=torch.Generator().manual_seed(0))
warm_losses = [r.generator_loss for r in recs if r.warmup]
log.info("stage2 %d+%d steps in %.0fs; warmup loss %.1f -> %.1f (%.1f%%)",
         warm, roll, time.time() - t0, np.mean(warm_losses[:10]), np.mean(warm_losses[-10:]),
         100 * (1 - np.mean(warm_losses[-10:]) / np.mean(warm_losses[:10])))
save_checkpoint(OUT / "stage2.pt", state.generator, stage="stage2")

# Causal-interaction contrast probe (reference = first generated pixel frame)
def block_region_change(video_u8, meta, ref, inflate=2):
    video = video_u8.astype(np.float64) / 255.0
    h, w = video.shape[1:]
    mask = np.zeros((h, w), dtype=bool)
    for b in meta["blocks"]:
        bw, bh = b["size"]
        for (x, y) in b["positions"]:
            x0, y0 = int(round(x)) - inflate, int(round(y)) - inflate
            mask[max(0, y0):min(h, y0 + bh + 2 * inflate), max(0, x0):min(w, x0 + bw + 2 * inflate)] = True
    diffs = [np.abs(video[t][mask] - video[ref][mask]).mean() for t in range(ref + 1, video.shape[0])]
    return float(np.mean(diffs))

gen_model = state.generator.eval()
ref = cfg.vae_temporal_factor
tt, uu = [], []
for label, touch, seed in [("touched", True, 9001), ("untouched", False, 9002),
                           ("touched2", True, 9003), ("untouched2", False, 9004),
                           ("touched3", True, 9005), ("untouched3", False, 9006)]:
    pixels, traj, depth, meta = generate_clip(seed, cfg, touch=touch)
    gen_pixels, _ = generate_offline(gen_model, traj, pixels[0], depth, seed=5)
    gt_change = block_region_change(pixels, meta, ref)
    gen_change = block_region_change(gen_pixels, meta, ref)
    (tt if touch else uu).append(gen_change)
    np.save(OUT / f"gen_{label}.npy", gen_pixels)
    log.info("%s: gt block-region change %.4f, generated %.4f", label, gt_change, gen_change)

log.info("CONTRAST generated touched/untouched = %.2f (need >= 2)",
         np.mean(tt) / max(np.mean(uu), 1e-9))
log.info("done")
