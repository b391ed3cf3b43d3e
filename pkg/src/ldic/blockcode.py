"""Two-slot linear schemes for the regimes where feedback does not help.

For 2/3 < alpha < 2 the optimal per-slot bit count is fractional, so the
scheme works on two-slot blocks: each user sends dedicated fresh bits on a
fixed placement plus intra-user XOR combinations on the remaining level-slots.
A candidate is accepted only when exact GF(2) elimination certifies that both
receivers can pin every own bit; the eliminator also yields the decode taps.

Combinations are found by a deterministic seeded search, so construction is
reproducible for a given (n, m).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import PlanError
from .gf2 import Eliminator

BLOCK_SLOTS = 2

_SEED = 0x5D1C0DE
_TRIES = 3000

# [user][slot][level] -> mask over that user's own message bits
Rows = tuple[tuple[tuple[int, ...], ...], ...]
# [user][bit] -> ((slot, level), ...) receive positions to XOR
Taps = tuple[tuple[tuple[tuple[int, int], ...], ...], ...]


@dataclass(frozen=True)
class BlockCode:
    n: int
    m: int
    bits_per_user: int
    rows: Rows
    taps: Taps


def bit_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def build_block_code(n: int, m: int) -> BlockCode:
    """Construct a certified two-slot scheme for 2/3 < m/n < 2."""
    if m < n:
        if 3 * m <= 2 * n:
            raise PlanError(f"n={n}, m={m} is outside the block-scheme regimes")
        case = "a"
        total = 2 * n - m
        fresh_cap = m  # visible levels only
        modes = ("same", "swapped")
    elif m < 2 * n:
        case = "b"
        total = m
        fresh_cap = n  # levels that reach the own receiver
        # a shared allocation is provably impossible at alpha = 1, so prefer
        # the slot-swapped variant
        modes = ("swapped", "same")
    else:
        raise PlanError(f"n={n}, m={m} is outside the block-scheme regimes")

    rng = random.Random(_SEED ^ (n << 16) ^ m)
    split_total = m  # bits placed as fresh rows in the searched band
    for k1, k2 in _k_splits(split_total, fresh_cap):
        for mode in modes:
            code = _search(n, m, case, total, k1, k2, mode, rng)
            if code is not None:
                return code
    raise PlanError(f"no two-slot scheme found for n={n}, m={m}")


def _k_splits(total: int, cap: int):
    """Yield (k1, k2) splits of total, starting nearest to even."""
    base = (total + 1) // 2
    seen = set()
    for step in range(total + 1):
        for k1 in (base + step, base - step):
            k2 = total - k1
            if 0 <= k1 <= cap and 0 <= k2 <= cap and k1 not in seen:
                seen.add(k1)
                yield k1, k2


def _search(n: int, m: int, case: str, total: int, k1: int, k2: int,
            mode: str, rng: random.Random) -> BlockCode | None:
    q = n if case == "a" else m
    base = [[0] * q for _ in range(BLOCK_SLOTS)]
    for i in range(k1):
        base[0][i] = 1 << i
    for i in range(k2):
        base[1][i] = 1 << (k1 + i)
    if case == "a":
        # levels [m, n) never reach the partner; fill them with fresh bits
        # in both slots and keep combinations over the visible bits only
        span = m
        for s in range(BLOCK_SLOTS):
            for j, lvl in enumerate(range(m, n)):
                base[s][lvl] = 1 << (m + s * (n - m) + j)
    else:
        span = total
    free = [(s, lvl) for s, ks in ((0, k1), (1, k2)) for lvl in range(ks, m)]

    for attempt in range(_TRIES):
        rows1 = [list(r) for r in base]
        if attempt:
            for s, lvl in free:
                rows1[s][lvl] = rng.getrandbits(span)
        rows2 = rows1 if mode == "same" else [rows1[1], rows1[0]]
        taps = _certify(n, m, case, total, rows1, rows2)
        if taps is not None:
            frozen = tuple(tuple(tuple(r) for r in rows) for rows in (rows1, rows2))
            return BlockCode(n=n, m=m, bits_per_user=total, rows=frozen, taps=taps)
    return None


def _observation_rows(n: int, m: int, case: str, total: int,
                      own, other) -> list[tuple[int, int, int]]:
    """Per-slot, per-level coefficient masks seen by one receiver.

    Columns [0, total) are the receiver's own user's bits, columns
    [total, 2*total) the partner's.
    """
    rows = []
    if case == "a":
        d = n - m
        for s in range(BLOCK_SLOTS):
            for j in range(n):
                mask = own[s][j]
                if j >= d:
                    mask |= other[s][j - d] << total
                rows.append((s, j, mask))
    else:
        d = m - n
        for s in range(BLOCK_SLOTS):
            for j in range(m):
                mask = other[s][j] << total
                if j >= d:
                    mask |= own[s][j - d]
                rows.append((s, j, mask))
    return rows


def _certify(n: int, m: int, case: str, total: int, rows1, rows2) -> Taps | None:
    users = (rows1, rows2)
    all_taps = []
    for rx in range(2):
        obs = _observation_rows(n, m, case, total, users[rx], users[1 - rx])
        elim = Eliminator()
        for idx, (_, _, mask) in enumerate(obs):
            elim.insert(mask, 1 << idx)
        taps_u = []
        for i in range(total):
            ok, aux = elim.solve(1 << i)
            if not ok:
                return None
            taps_u.append(tuple((obs[r][0], obs[r][1]) for r in bit_indices(aux)))
        all_taps.append(tuple(taps_u))
    return tuple(all_taps)
