"""Pilot 9: does a longer DMD phase reduce untouched-scene flicker?"""

import logging, time
import numpy as np
import torch

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s", datefmt="%H:%M:%S")
logging.getLogger("handworld.dataset").setLevel(logging.ERROR)
log = logging.getLogger("pilot9")

from pathlib import Path
from handworld.core import Config, make_schedule
from handworld.dataset import generate_clip
from handworld.training import ClipStore
from handworld.dataset import read_manifest
from handworld.model import load_checkpoint, save_checkpoint
from handworld.distillation import DMDState, teacher_force_warmup, train_stage2
from handworld.engine import generate_offline

OUT = Path("scripts/pilot_out")
cfg = Config(frames=16, pixel_hw=(32, 32), dit_depth=4, dit_heads=4, seed=0)
sched = make_schedule(cfg.diffusion_T)
store = ClipStore.from_dataset(OUT / "ds", cfg)
stage1, _ = load_checkpoint(OUT / "stage1.pt")


def block_change(video_u8, meta, ref, inflate=2):
    video = video_u8.astype(np.float64) / 255.0
    h, w = video.shape[1:]
    mask = np.zeros((h, w), bool)
    for b in meta["blocks"]:
        bw, bh = b["size"]
        for (x, y) in b["positions"]:
            x0, y0 = int(round(x)) - inflate, int(round(y)) - inflate
            mask[max(0, y0):min(h, y0 + bh + 2 * inflate), max(0, x0):min(w, x0 + bw + 2 * inflate)] = True
    return float(np.mean([np.abs(video[t][mask] - video[ref][mask]).mean() for t in range(ref + 1, len(video))]))


def contrast(model):
    model.eval()
    tt, uu = [], []
    for touch, seeds in [(True, (9001, 9003, 9005)), (False, (9002, 9004, 9006))]:
        for seed in seeds:
            pixels, traj, depth, meta = generate_clip(seed, cfg, touch=touch)
            gen, _ = generate_offline(model, traj, pixels[0], depth, seed=5)
            (tt if touch else uu).append(block_change(gen, meta, ref=4))
    model.train()
    return float(np.mean(tt)), float(np.mean(uu))


state = DMDState.from_stage1(stage1, sched, fake_update_ratio=5)
t0 = time.time()
teacher_force_warmup(state, store.batches(4, seed=1), steps=800, lr=1e-3,
                     generator=torch.Generator().manual_seed(0), log_every=400)
tt, uu = contrast(state.generator)
log.info("after warmup (%.0fs): touched %.4f untouched %.4f ratio %.2f", time.time() - t0, tt, uu, tt / uu)

gen_rng = torch.Generator().manual_seed(0)
for phase in range(4):
    train_stage2(state, store.batches(4, seed=2 + phase), warmup_steps=0, rollout_steps=50,
                 generator_lr=2e-4, generator=gen_rng)
    tt, uu = contrast(state.generator)
    log.info("after DMD %d steps: touched %.4f untouched %.4f ratio %.2f",
             50 * (phase + 1), tt, uu, tt / uu)
save_checkpoint(OUT / "stage2_long.pt", state.generator, stage="stage2")
log.info("done")
