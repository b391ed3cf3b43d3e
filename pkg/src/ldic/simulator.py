"""End-to-end causal simulation, rate accounting, and independent verification.

The rank oracle re-derives, purely symbolically, the GF(2) coefficient of
every message bit in every received level (including bits that travel through
feedback and relays), then checks by elimination that each receiver's own
bits are uniquely determined by its logged observations and that the solved
values match the logged messages. It shares the plan's constants with the
runtime encoder but none of its decoding code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .blockcode import bit_indices
from .capacity import sum_capacity_limited
from .core import BitWord, ChannelConfig, channel_output
from .errors import SimulationError
from .gf2 import Eliminator
from .strategies import (FeedbackMessage, RxState, StrategyPlan, TxState,
                         absorb_feedback, decode_block, encode_slot,
                         make_feedback, plan_for, receive)


@dataclass(frozen=True)
class SlotRecord:
    slot: int
    x1: BitWord
    x2: BitWord
    y1: BitWord
    y2: BitWord
    fb1: FeedbackMessage
    fb2: FeedbackMessage


@dataclass(frozen=True)
class SimulationTrace:
    cfg: ChannelConfig
    blocks: int
    seed: int | None
    records: tuple[SlotRecord, ...]
    messages: tuple[tuple[int, ...], tuple[int, ...]]

    def fb_cumulative(self) -> tuple[tuple[int, int], ...]:
        """Per-slot cumulative feedback bit counts, one pair per record."""
        out = []
        c1 = c2 = 0
        for r in self.records:
            c1 += len(r.fb1.items)
            c2 += len(r.fb2.items)
            out.append((c1, c2))
        return tuple(out)

    def to_text(self) -> str:
        """Stable line-oriented export: one tab-separated record per slot.

        Fields: slot, x1, x2, y1, y2, fb1, fb2. Words are 0/1 strings, most
        significant level first; feedback is comma-joined level:bit pairs,
        or "-" when empty.
        """
        lines = []
        for r in self.records:
            lines.append("\t".join((
                str(r.slot),
                r.x1.to01(), r.x2.to01(), r.y1.to01(), r.y2.to01(),
                _fmt_fb(r.fb1), _fmt_fb(r.fb2))))
        return "\n".join(lines) + "\n"


def _fmt_fb(fb: FeedbackMessage) -> str:
    if not fb.items:
        return "-"
    return ",".join(f"{lvl}:{bit}" for lvl, bit in fb.items)


@dataclass(frozen=True)
class RateReport:
    delivered_bits: tuple[int, int]
    slots_used: int
    achieved: Fraction  # normalized sum rate, exact
    formula: Fraction
    gap: Fraction


def run(cfg: ChannelConfig, blocks: int, seed: int) -> tuple[SimulationTrace, RateReport]:
    """Simulate `blocks` blocks with seeded random messages and verify decoding."""
    if blocks < 1:
        raise ValueError("blocks must be positive")
    plan = plan_for(cfg)
    total = plan.per_block_bits * blocks
    rng = random.Random(seed)
    messages = tuple(tuple(rng.getrandbits(1) for _ in range(total))
                     for _ in range(2))
    return run_with_messages(cfg, blocks, messages, seed=seed)


def run_with_messages(cfg: ChannelConfig, blocks: int,
                      messages: tuple[tuple[int, ...], tuple[int, ...]],
                      seed: int | None = None) -> tuple[SimulationTrace, RateReport]:
    """Simulate with explicit per-user message bit tuples."""
    if blocks < 1:
        raise ValueError("blocks must be positive")
    plan = plan_for(cfg)
    tx1 = TxState(plan=plan, messages=tuple(messages[0]), blocks=blocks, user=0)
    tx2 = TxState(plan=plan, messages=tuple(messages[1]), blocks=blocks, user=1)
    rx1 = RxState(plan=plan, blocks=blocks, user=0)
    rx2 = RxState(plan=plan, blocks=blocks, user=1)
    records = []
    for t in range(plan.slots_for(blocks)):
        x1 = encode_slot(tx1, plan)
        x2 = encode_slot(tx2, plan)
        y1, y2 = channel_output(cfg, x1, x2)
        fb1 = make_feedback(rx1, y1, plan)
        fb2 = make_feedback(rx2, y2, plan)
        absorb_feedback(tx1, fb1)
        absorb_feedback(tx2, fb2)
        receive(rx1, y1, plan)
        receive(rx2, y2, plan)
        records.append(SlotRecord(t, x1, x2, y1, y2, fb1, fb2))
    trace = SimulationTrace(cfg=cfg, blocks=blocks, seed=seed,
                            records=tuple(records),
                            messages=(tuple(messages[0]), tuple(messages[1])))
    if not verify_budget(trace, cfg):
        raise SimulationError("feedback budget violated in trace")
    total = plan.per_block_bits * blocks
    for rx in (rx1, rx2):
        decode_block(rx, plan)
        _check_decoded(rx, total, trace.messages[rx.user])
    slots = len(records)
    achieved = Fraction(2 * total, slots * cfg.n)
    formula = sum_capacity_limited(cfg.alpha(), cfg.beta())
    report = RateReport(delivered_bits=(total, total), slots_used=slots,
                        achieved=achieved, formula=formula,
                        gap=formula - achieved)
    return trace, report


def _check_decoded(rx: RxState, total: int, messages: tuple[int, ...]) -> None:
    for i in range(total):
        got = rx.resolved.get(i)
        if got is None:
            raise SimulationError(
                f"user {rx.user + 1} bit {i} never resolved")
        bit, slot, level = got
        # the encoder pads with zeros past the queue end
        sent = messages[i] if i < len(messages) else 0
        if bit != sent:
            raise SimulationError(
                f"user {rx.user + 1} bit {i} decoded {bit} != sent {sent}",
                slot=slot, level=level)


def verify_budget(trace: SimulationTrace, cfg: ChannelConfig) -> bool:
    """True iff cumulative feedback after slot k is at most k*r_f on each link."""
    for k, (c1, c2) in enumerate(trace.fb_cumulative(), start=1):
        if c1 > k * cfg.r_f or c2 > k * cfg.r_f:
            return False
    return True


@dataclass(frozen=True)
class OracleVerdict:
    user: int
    decodable: bool  # own bits uniquely determined by the observations
    consistent: bool  # no contradictory observation, relay structure followed
    matches: bool  # solved values equal the logged message bits

    @property
    def ok(self) -> bool:
        return self.decodable and self.consistent and self.matches


def rank_oracle(cfg: ChannelConfig, trace: SimulationTrace,
                ) -> tuple[OracleVerdict, OracleVerdict]:
    """Independent decodability check over the whole trace."""
    plan = plan_for(cfg)
    blocks = trace.blocks
    slots = len(trace.records)
    total = plan.per_block_bits * blocks
    xmasks, ymasks = _symbolic_maps(plan, blocks, slots)
    structural_ok = _structure_followed(plan, trace, slots)
    verdicts = []
    for u in range(2):
        elim = Eliminator()
        consistent = structural_ok
        ywords = [(r.y1 if u == 0 else r.y2) for r in trace.records]
        for t, r in enumerate(trace.records):
            if channel_output(cfg, r.x1, r.x2) != (r.y1, r.y2):
                consistent = False
            for lvl in range(cfg.q):
                added, residual = elim.insert(ymasks[u][t][lvl], ywords[t][lvl])
                if not added and residual:
                    consistent = False
        decodable = True
        matches = True
        offset = u * total
        msg = trace.messages[u]
        for i in range(total):
            ok, val = elim.solve(1 << (offset + i))
            if not ok:
                decodable = False
                continue
            sent = msg[i] if i < len(msg) else 0
            if val != sent:
                matches = False
        verdicts.append(OracleVerdict(user=u, decodable=decodable,
                                      consistent=consistent, matches=matches))
    return verdicts[0], verdicts[1]


def _ymask_row(xa: list[int], xb: list[int], q: int, n: int, m: int) -> list[int]:
    out = []
    for lvl in range(q):
        mask = 0
        if lvl >= q - n:
            mask ^= xa[lvl - (q - n)]
        if lvl >= q - m:
            mask ^= xb[lvl - (q - m)]
        out.append(mask)
    return out


def _symbolic_maps(plan: StrategyPlan, blocks: int, slots: int,
                   ) -> tuple[list[list[list[int]]], list[list[list[int]]]]:
    """Coefficient masks of every message bit in every x and y level.

    Columns [0, total) are user 1's bits, [total, 2*total) user 2's. The
    walk mirrors the causal feedback/relay flow in the mask domain.
    """
    cfg = plan.cfg
    q, n, m = cfg.q, cfg.n, cfg.m
    total = plan.per_block_bits * blocks
    pos = [0, total]
    pending: list[tuple[int, ...]] = [(), ()]
    blockbase = [0, 0]
    xmasks: list[list[list[int]]] = [[], []]
    ymasks: list[list[list[int]]] = [[], []]
    for t in range(slots):
        s = t % plan.block_len
        flush = t >= plan.block_len * blocks
        for u in (0, 1):
            lv = [0] * q
            rel = pending[u]
            pending[u] = ()
            if flush:
                for i, mk in enumerate(rel):
                    lv[plan.probe_base + i] = mk
            elif plan.scheme == "block_code":
                code = plan.block_code
                if s == 0:
                    blockbase[u] = pos[u]
                    pos[u] += code.bits_per_user
                for lvl, mask in enumerate(code.rows[u][s]):
                    g = 0
                    for b in bit_indices(mask):
                        g |= 1 << (blockbase[u] + b)
                    lv[lvl] = g
            elif plan.scheme == "probe_relay":
                e_cur = plan.fb_schedule[s]
                w = plan.split_width
                for j in range(w):
                    lv[j] = 1 << pos[u]
                    pos[u] += 1
                for i in range(e_cur):
                    lv[w + i] = 1 << pos[u]
                    pos[u] += 1
                for i, mk in enumerate(rel):
                    lv[w + e_cur + i] = mk
                for j in range(m, n):
                    lv[j] = 1 << pos[u]
                    pos[u] += 1
            else:
                e_cur = plan.fb_schedule[s]
                for j in range(n):
                    lv[j] = 1 << pos[u]
                    pos[u] += 1
                for i in range(e_cur):
                    lv[n + i] = 1 << pos[u]
                    pos[u] += 1
                for i, mk in enumerate(rel):
                    lv[n + e_cur + i] = mk
            xmasks[u].append(lv)
        ymasks[0].append(_ymask_row(xmasks[0][t], xmasks[1][t], q, n, m))
        ymasks[1].append(_ymask_row(xmasks[1][t], xmasks[0][t], q, n, m))
        e_fb = 0 if flush else plan.fb_schedule[s]
        shift = q - n
        for u in (0, 1):
            rel = []
            for i in range(e_fb):
                lvl = plan.fb_read_base + i
                mk = ymasks[u][t][lvl]
                if lvl >= shift:
                    mk ^= xmasks[u][t][lvl - shift]
                rel.append(mk)
            pending[u] = tuple(rel)
    return xmasks, ymasks


def _structure_followed(plan: StrategyPlan, trace: SimulationTrace,
                        slots: int) -> bool:
    """Check the trace's feedback and relay values against the scheme rules.

    Conditioning the oracle on the deterministic relay structure is only
    sound if the trace actually follows it, so replay it from the logged
    words: feedback must echo the designated received levels, and the next
    slot's relay levels must carry the fed-back values minus the
    transmitter's own contribution.
    """
    cfg = plan.cfg
    shift = cfg.q - cfg.n
    if plan.scheme == "block_code":
        return all(not r.fb1.items and not r.fb2.items for r in trace.records)
    for u in range(2):
        expected: tuple[int, ...] = ()
        for t, r in enumerate(trace.records):
            x = r.x1 if u == 0 else r.x2
            y = r.y1 if u == 0 else r.y2
            fb = r.fb1 if u == 0 else r.fb2
            s = t % plan.block_len
            flush = t >= plan.block_len * trace.blocks
            e_cur = 0 if flush else plan.fb_schedule[s]
            relay_base = plan.probe_base + e_cur
            for i, v in enumerate(expected):
                if x[relay_base + i] != v:
                    return False
            levels = tuple(plan.fb_read_base + i for i in range(e_cur))
            if tuple(lvl for lvl, _ in fb.items) != levels:
                return False
            if any(bit != y[lvl] for lvl, bit in fb.items):
                return False
            expected = tuple(
                bit ^ (x[lvl - shift] if lvl >= shift else 0)
                for lvl, bit in fb.items)
    return True
