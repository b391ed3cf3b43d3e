"""Shared helpers for the test suite."""

from __future__ import annotations

import dataclasses

from ldic.core import BitWord, ChannelConfig, channel_output
from ldic.simulator import SimulationTrace, SlotRecord
from ldic.strategies import Role, plan_for

# full integer acceptance grid
GRID = tuple(ChannelConfig(n, m, rf)
             for n in range(1, 9)
             for m in range(0, 21)
             for rf in range(0, 5))


def role_bearing_positions(cfg: ChannelConfig,
                           trace: SimulationTrace) -> list[tuple[int, int, int]]:
    """All (slot, user, level) positions whose transmitted bit carries a role."""
    plan = plan_for(cfg)
    out = []
    for t in range(len(trace.records)):
        s = t % plan.block_len
        flush = t >= plan.block_len * trace.blocks
        for u in range(2):
            for lvl in range(cfg.q):
                if flush:
                    lo = plan.probe_base
                    if not (lo <= lvl < lo + plan.fb_schedule[1]):
                        continue
                elif plan.level_maps[u][s][lvl] is Role.IDLE:
                    continue
                out.append((t, u, lvl))
    return out


def flip_bit(cfg: ChannelConfig, trace: SimulationTrace,
             t: int, user: int, lvl: int) -> SimulationTrace:
    """Flip one transmitted bit and recompute that slot's channel outputs."""
    r = trace.records[t]
    x = r.x1 if user == 0 else r.x2
    bits = list(x.bits)
    bits[lvl] ^= 1
    nx = BitWord(tuple(bits))
    x1, x2 = (nx, r.x2) if user == 0 else (r.x1, nx)
    y1, y2 = channel_output(cfg, x1, x2)
    recs = list(trace.records)
    recs[t] = SlotRecord(t, x1, x2, y1, y2, r.fb1, r.fb2)
    return dataclasses.replace(trace, records=tuple(recs))
