"""Pilot 6: depth-6 backbone + LR decay; measure warmup-only contrast."""

import logging, sys, time
import numpy as np
import torch

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s", datefmt="%H:%M:%S")
logging.getLogger("handworld.dataset").setLevel(logging.ERROR)
log = logging.getLogger("pilot6")

from pathlib import Path
from handworld.core import Config, make_schedule, seed_everything
from handworld.dataset import build_dataset, generate_clip
from handworld.training import ClipStore, train_stage1, loss_reduction
from handworld.model import WorldModel, save_checkpoint
from handworld.distillation import DMDState, teacher_force_warmup
from handworld.engine import generate_offline

OUT = Path("scripts/pilot_out")
cfg = Config(frames=16, pixel_hw=(32, 32), dit_depth=6, dit_heads=4, seed=0)
seed_everything(0)
ds = OUT / "ds6"
if not (ds / "manifest.txt").exists():
    build_dataset(48, cfg, ds, seed=0)
store = ClipStore.from_dataset(ds, cfg)

s1 = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
warm = int(sys.argv[2]) if len(sys.argv) > 2 else 700
model = WorldModel(cfg)
t0 = time.time()
hist = train_stage1(model, store, steps=s1, batch_size=8, lr=2e-3, seed=0, log_every=200)
base, final = loss_reduction(hist, 10)
log.info("stage1 %d steps %.0fs: %.1f -> %.1f (%.0f%%)", s1, time.time() - t0, base, final,
         100 * (1 - final / base))
save_checkpoint(OUT / "stage1_d6.pt", model, stage="stage1")

state = DMDState.from_stage1(model, make_schedule(cfg.diffusion_T))
t0 = time.time()
losses = teacher_force_warmup(state, store.batches(4, seed=1), steps=warm, lr=1e-3,
                              generator=torch.Generator().manual_seed(0), log_every=200)
log.info("warmup %d steps %.0fs: %.1f -> %.1f", warm, time.time() - t0,
         np.mean(losses[:10]), np.mean(losses[-10:]))
save_checkpoint(OUT / "warm_d6.pt", state.generator, stage="warm")

def block_change(video_u8, meta, ref, inflate=2):
    video = video_u8.astype(np.float64) / 255.0
    h, w = video.shape[1:]
    mask = np.zeros((h, w), bool)
    for b in meta["blocks"]:
        bw, bh = b["size"]
        for (x, y) in b["positions"]:
            x0, y0 = int(round(x)) - inflate, int(round(y)) - inflate
            mask[max(0, y0):min(h, y0 + bh + 2 * inflate), max(0, x0):min(w, x0 + bw + 2 * inflate)] = True
    return float(np.mean([np.abs(video[t][mask] - video[ref][mask]).mean()
                          for t in range(ref + 1, len(video))]))

gen_model = state.generator.eval()
tt, uu = [], []
for touch, seeds in [(True, (9001, 9003, 9005)), (False, (9002, 9004, 9006))]:
    for seed in seeds:
        pixels, traj, depth, meta = generate_clip(seed, cfg, touch=touch)
        gen, _ = generate_offline(gen_model, traj, pixels[0], depth, seed=5)
        (tt if touch else uu).append(block_change(gen, meta, ref=cfg.vae_temporal_factor))
log.info("warmup-only contrast (vs first generated): touched %.4f untouched %.4f ratio %.2f",
         np.mean(tt), np.mean(uu), np.mean(tt) / np.mean(uu))
