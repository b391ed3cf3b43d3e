"""Causal encoder, feedback-generator, and decoder state machines.

Transmission is organized in 2-slot blocks. Three schemes cover the whole
(n, m, r_f) space:

probe_relay (3m <= 2n). Each slot carries fresh bits on the levels that stay
clean at the own receiver, plus e_s probe bits on the top of the band that
interferes at the partner. The receiver feeds the interfered combinations
back; the transmitter strips its own contribution and re-sends the recovered
partner bits one slot later on the levels directly below the probes, which
lets its own receiver cancel the interference. With w = max(0, 2m - n) a
second fresh band [0, w) opens up below the probes when interference is
moderate.

block_code (2/3 < alpha < 2). Feedback does not help; a self-contained
two-slot linear scheme from the blockcode module is used, certified by GF(2)
elimination at plan construction.

cross_relay (alpha >= 2). Fresh bits occupy [0, n) and arrive clean at the
own receiver through the strong cross link region. Probe bits ride the levels
[n, n + e_s) that only the partner's receiver can see; they come back over
the partner's feedback link and are relayed to the intended receiver one
slot later.

Probes delivered in slot 2 of the final block need one extra flush slot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .blockcode import BlockCode, build_block_code
from .capacity import RegimeLabel, regime, sum_capacity_limited
from .core import BitWord, ChannelConfig
from .errors import PlanError, SimulationError

BLOCK_LEN = 2


class Role(enum.Enum):
    FRESH = "fresh"
    PROBE = "probe"
    RELAY = "relay"
    IDLE = "idle"
    MIX = "mix"  # intra-user XOR combination (block_code only)


# [slot_in_block][level] -> Role
LevelMap = tuple[tuple[Role, ...], ...]


@dataclass(frozen=True)
class FeedbackMessage:
    """Bits one receiver sends to its own transmitter after one slot.

    items pairs each bit with the received level it was read from.
    """

    slot: int
    items: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class StrategyPlan:
    """Static per-config description of the transmission scheme."""

    cfg: ChannelConfig
    regime: RegimeLabel
    scheme: str  # "probe_relay" | "cross_relay" | "block_code"
    block_len: int
    fresh_per_block: int
    probe_bits: int
    fb_schedule: tuple[int, int]
    level_maps: tuple[LevelMap, LevelMap]  # per user; they differ only for block_code
    split_width: int  # w: width of the lower fresh band (probe_relay)
    probe_base: int  # first probe level; relays go right below the probes
    fb_read_base: int  # first received level read for feedback
    block_code: BlockCode | None

    @property
    def per_block_bits(self) -> int:
        """Message bits delivered per user per block."""
        return self.fresh_per_block + self.probe_bits

    @property
    def needs_flush(self) -> bool:
        """Whether a trailing slot is needed to relay the last probes."""
        return self.fb_schedule[1] > 0

    def slots_for(self, blocks: int) -> int:
        return self.block_len * blocks + (1 if self.needs_flush else 0)


@lru_cache(maxsize=None)
def plan_for(cfg: ChannelConfig) -> StrategyPlan:
    """Build (and cache) the plan for a config.

    Construction fails rather than return a plan whose steady-state rate
    does not equal the capacity formula.
    """
    n, m, r_f = cfg.n, cfg.m, cfg.r_f
    label = regime(cfg.alpha(), cfg.beta())
    code = None
    if 3 * m <= 2 * n:
        scheme = "probe_relay"
        w = max(0, 2 * m - n)
        # probes+relays live in [w, min(m, n-m)): clean at the own receiver,
        # interfering at the partner's
        e = min(2 * r_f, min(m, n - m) - w)
        fresh = 2 * (w + n - m)
        probe_base = w
        fb_read_base = w + (n - m)
    elif m < 2 * n:
        scheme = "block_code"
        code = build_block_code(n, m)
        w = 0
        e = 0
        fresh = code.bits_per_user
        probe_base = 0
        fb_read_base = 0
    else:
        scheme = "cross_relay"
        w = 0
        e = min(2 * r_f, m - 2 * n)
        fresh = 2 * n
        probe_base = n
        fb_read_base = n
    e1 = min(e, r_f)
    sched = (e1, e - e1)
    maps = _level_maps(cfg, scheme, w, sched, code)
    plan = StrategyPlan(cfg=cfg, regime=label, scheme=scheme, block_len=BLOCK_LEN,
                        fresh_per_block=fresh, probe_bits=e, fb_schedule=sched,
                        level_maps=maps, split_width=w, probe_base=probe_base,
                        fb_read_base=fb_read_base, block_code=code)
    achieved = Fraction(plan.per_block_bits, n)
    target = sum_capacity_limited(cfg.alpha(), cfg.beta())
    if achieved != target:
        raise PlanError(f"plan rate {achieved} != formula {target} for {cfg}")
    return plan


def _claim(levels: list[Role], j: int, role: Role) -> None:
    if levels[j] is not Role.IDLE:
        raise PlanError(f"level {j} assigned twice ({levels[j].value}, {role.value})")
    levels[j] = role


def _level_maps(cfg: ChannelConfig, scheme: str, w: int,
                sched: tuple[int, int], code: BlockCode | None,
                ) -> tuple[LevelMap, LevelMap]:
    q = cfg.q
    if scheme == "block_code":
        maps = []
        for user_rows in code.rows:
            slots = []
            for s in range(BLOCK_LEN):
                lv = []
                for mask in user_rows[s]:
                    if mask == 0:
                        lv.append(Role.IDLE)
                    elif mask & (mask - 1) == 0:
                        lv.append(Role.FRESH)
                    else:
                        lv.append(Role.MIX)
                slots.append(tuple(lv))
            maps.append(tuple(slots))
        return maps[0], maps[1]
    base = w if scheme == "probe_relay" else cfg.n
    slots = []
    for s in range(BLOCK_LEN):
        lv = [Role.IDLE] * q
        if scheme == "probe_relay":
            for j in range(w):
                _claim(lv, j, Role.FRESH)
            for j in range(cfg.m, cfg.n):
                _claim(lv, j, Role.FRESH)
        else:
            for j in range(cfg.n):
                _claim(lv, j, Role.FRESH)
        for j in range(base, base + sched[s]):
            _claim(lv, j, Role.PROBE)
        for j in range(base + sched[s], base + sched[s] + sched[1 - s]):
            _claim(lv, j, Role.RELAY)
        slots.append(tuple(lv))
    mp = (slots[0], slots[1])
    return mp, mp


@dataclass
class TxState:
    """Mutable per-transmitter encoder state (single owner)."""

    plan: StrategyPlan
    messages: tuple[int, ...]
    blocks: int
    user: int = 0
    slot: int = 0
    draw_pos: int = 0
    pending_relay: tuple[int, ...] = ()
    last_word: BitWord | None = None
    block_msg: int = 0
    exhausted: bool = False


def _draw(tx: TxState) -> int:
    # past the end of the queue: pad with zeros and flag it
    if tx.draw_pos >= len(tx.messages):
        tx.exhausted = True
        return 0
    v = tx.messages[tx.draw_pos]
    tx.draw_pos += 1
    return v


def encode_slot(tx: TxState, plan: StrategyPlan) -> BitWord:
    """Emit the next slot's word and advance the encoder."""
    cfg = plan.cfg
    bits = [0] * cfg.q
    s = tx.slot % plan.block_len
    flush = tx.slot >= plan.block_len * tx.blocks
    relays = tx.pending_relay
    tx.pending_relay = ()
    if flush:
        for i, v in enumerate(relays):
            bits[plan.probe_base + i] = v
    elif plan.scheme == "block_code":
        code = plan.block_code
        if s == 0:
            word = 0
            for i in range(code.bits_per_user):
                word |= _draw(tx) << i
            tx.block_msg = word
        for lvl, mask in enumerate(code.rows[tx.user][s]):
            bits[lvl] = (tx.block_msg & mask).bit_count() & 1
    elif plan.scheme == "probe_relay":
        e_cur = plan.fb_schedule[s]
        w = plan.split_width
        for j in range(w):
            bits[j] = _draw(tx)
        for i in range(e_cur):
            bits[w + i] = _draw(tx)
        for i, v in enumerate(relays):
            bits[w + e_cur + i] = v
        for j in range(cfg.m, cfg.n):
            bits[j] = _draw(tx)
    else:
        e_cur = plan.fb_schedule[s]
        for j in range(cfg.n):
            bits[j] = _draw(tx)
        for i in range(e_cur):
            bits[cfg.n + i] = _draw(tx)
        for i, v in enumerate(relays):
            bits[cfg.n + e_cur + i] = v
    word = BitWord(tuple(bits))
    tx.slot += 1
    tx.last_word = word
    return word


def absorb_feedback(tx: TxState, fb: FeedbackMessage) -> TxState:
    """Strip own contributions from fed-back combinations; queue relays."""
    if fb.slot >= tx.slot:
        raise SimulationError(
            f"feedback for slot {fb.slot} arrived before that slot was sent",
            slot=fb.slot)
    if not fb.items:
        return tx
    if fb.slot != tx.slot - 1 or tx.last_word is None:
        raise SimulationError(
            f"stale feedback for slot {fb.slot} at encoder slot {tx.slot}",
            slot=fb.slot)
    shift = tx.plan.cfg.q - tx.plan.cfg.n
    vals = []
    for level, bit in fb.items:
        own = tx.last_word[level - shift] if level >= shift else 0
        vals.append(bit ^ own)
    tx.pending_relay = tuple(vals)
    return tx


@dataclass
class RxState:
    """Mutable per-receiver decoder state (single owner)."""

    plan: StrategyPlan
    blocks: int
    user: int = 0
    slot: int = 0
    draw_pos: int = 0  # mirror of the transmitter's message counter
    fb_sent: int = 0
    resolved: dict[int, tuple[int, int, int]] = field(default_factory=dict)
    newly_resolved: list[tuple[int, int]] = field(default_factory=list)
    own_probe_vals: tuple[int, ...] = ()  # own probes read in the previous slot
    pending_combos: tuple[tuple[int, int], ...] = ()  # (idx, partial) awaiting relay
    probe_idx_prev: tuple[int, ...] = ()  # cross_relay: indices awaiting relay
    block_y: list[BitWord] = field(default_factory=list)


def _resolve(rx: RxState, idx: int, bit: int, slot: int, level: int) -> None:
    if idx in rx.resolved:
        raise SimulationError(f"message bit {idx} resolved twice",
                              slot=slot, level=level)
    rx.resolved[idx] = (bit, slot, level)
    rx.newly_resolved.append((idx, bit))


def make_feedback(rx: RxState, y: BitWord, plan: StrategyPlan) -> FeedbackMessage:
    """Read the scheduled interfered levels and emit this slot's feedback."""
    t = rx.slot
    s = t % plan.block_len
    flush = t >= plan.block_len * rx.blocks
    e_cur = 0 if flush else plan.fb_schedule[s]
    items = tuple((plan.fb_read_base + i, y[plan.fb_read_base + i])
                  for i in range(e_cur))
    if rx.fb_sent + len(items) > (t + 1) * plan.cfg.r_f:
        raise PlanError(
            f"feedback budget exceeded at slot {t}: "
            f"{rx.fb_sent + len(items)} > {(t + 1) * plan.cfg.r_f}")
    rx.fb_sent += len(items)
    return FeedbackMessage(slot=t, items=items)


def receive(rx: RxState, y: BitWord, plan: StrategyPlan) -> None:
    """Fold one received word into the decoder state."""
    s = rx.slot % plan.block_len
    flush = rx.slot >= plan.block_len * rx.blocks
    if plan.scheme == "block_code":
        _receive_block_code(rx, y, plan, s)
    elif plan.scheme == "probe_relay":
        _receive_probe_relay(rx, y, plan, s, flush)
    else:
        _receive_cross_relay(rx, y, plan, s, flush)
    rx.slot += 1


def decode_block(rx: RxState, plan: StrategyPlan) -> list[tuple[int, int]]:
    """Drain (message index, bit) pairs resolved since the last call."""
    out = rx.newly_resolved
    rx.newly_resolved = []
    return out


def _receive_probe_relay(rx: RxState, y: BitWord, plan: StrategyPlan,
                         s: int, flush: bool) -> None:
    cfg = plan.cfg
    n, m = cfg.n, cfg.m
    w = plan.split_width
    e_cur = 0 if flush else plan.fb_schedule[s]
    e_prev = plan.fb_schedule[1 - s] if rx.slot > 0 else 0
    base = rx.draw_pos
    probes: tuple[int, ...] = ()
    if not flush:
        for j in range(w):
            _resolve(rx, base + j, y[j], rx.slot, j)
        probes = tuple(y[w + i] for i in range(e_cur))
        for i in range(e_cur):
            _resolve(rx, base + w + i, probes[i], rx.slot, w + i)
    # relays arrive clean right below the probes and carry the partner's
    # previous-slot probes: finish the combinations waiting on them
    for i, (idx, partial) in enumerate(rx.pending_combos):
        lvl = w + e_cur + i
        _resolve(rx, idx, partial ^ y[lvl], rx.slot, lvl)
    rx.pending_combos = ()
    if not flush:
        # fresh-B band [m, n): clean except where the partner's probes and
        # relays land
        off = w + (n - m) - m
        pend = []
        for j in range(n - m):
            idx = base + w + e_cur + j
            lvl = m + j
            if off <= j < off + e_cur:
                pend.append((idx, y[lvl]))
            elif off + e_cur <= j < off + e_cur + e_prev:
                _resolve(rx, idx, y[lvl] ^ rx.own_probe_vals[j - off - e_cur],
                         rx.slot, lvl)
            else:
                _resolve(rx, idx, y[lvl], rx.slot, lvl)
        rx.pending_combos = tuple(pend)
        rx.draw_pos = base + w + e_cur + (n - m)
    rx.own_probe_vals = probes


def _receive_cross_relay(rx: RxState, y: BitWord, plan: StrategyPlan,
                         s: int, flush: bool) -> None:
    cfg = plan.cfg
    n, m = cfg.n, cfg.m
    e_cur = 0 if flush else plan.fb_schedule[s]
    # partner's relay levels deliver our own previous-slot probes, clean
    for i, idx in enumerate(rx.probe_idx_prev):
        lvl = n + e_cur + i
        _resolve(rx, idx, y[lvl], rx.slot, lvl)
    rx.probe_idx_prev = ()
    if not flush:
        base = rx.draw_pos
        for j in range(n):
            _resolve(rx, base + j, y[m - n + j], rx.slot, m - n + j)
        rx.probe_idx_prev = tuple(base + n + i for i in range(e_cur))
        rx.draw_pos = base + n + e_cur
    rx.own_probe_vals = ()


def _receive_block_code(rx: RxState, y: BitWord, plan: StrategyPlan, s: int) -> None:
    rx.block_y.append(y)
    if s != plan.block_len - 1:
        return
    code = plan.block_code
    first_slot = rx.slot - (plan.block_len - 1)
    base = rx.draw_pos
    for i in range(code.bits_per_user):
        taps = code.taps[rx.user][i]
        v = 0
        for ts, lvl in taps:
            v ^= rx.block_y[ts][lvl]
        ts, lvl = taps[-1]
        _resolve(rx, base + i, v, first_slot + ts, lvl)
    rx.draw_pos = base + code.bits_per_user
    rx.block_y = []
