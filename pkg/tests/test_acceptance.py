"""Acceptance suite: one test per release criterion.

Run with -v for one verdict line per criterion, or -s to also see the
measured figures behind each PASS.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from conftest import GRID, flip_bit, role_bearing_positions
from ldic.capacity import (
    saturating_beta,
    sum_capacity_infinite,
    sum_capacity_limited,
    sum_capacity_nofb,
)
from ldic.cli import fmt6
from ldic.cli import main as cli_main
from ldic.core import BitWord, ChannelConfig
from ldic.simulator import (
    SimulationTrace,
    SlotRecord,
    rank_oracle,
    run,
    run_with_messages,
    verify_budget,
)
from ldic.strategies import FeedbackMessage, plan_for

F = Fraction


@pytest.fixture(scope="module")
def grid_audit():
    """One 50-block verified run per grid config, shared by criteria 3-5."""
    sim_elapsed = 0.0
    oracle_elapsed = 0.0
    rate_failures = []
    budget_failures = []
    oracle_failures = []
    for i, cfg in enumerate(GRID):
        t0 = time.perf_counter()
        trace, report = run(cfg, 50, seed=20_000 + i)
        t1 = time.perf_counter()
        verdicts = rank_oracle(cfg, trace)
        oracle_elapsed += time.perf_counter() - t1
        sim_elapsed += t1 - t0
        plan = plan_for(cfg)
        if Fraction(plan.per_block_bits, cfg.n) != report.formula:
            rate_failures.append(cfg)
        if not verify_budget(trace, cfg):
            budget_failures.append(cfg)
        if not all(v.ok for v in verdicts):
            oracle_failures.append(cfg)
    return {
        "count": len(GRID),
        "sim_elapsed": sim_elapsed,
        "oracle_elapsed": oracle_elapsed,
        "rate_failures": rate_failures,
        "budget_failures": budget_failures,
        "oracle_failures": oracle_failures,
    }


def test_criterion_1_golden_two_slot_run():
    """Weak case n=2, m=1, budget 1: six bits in two slots, bit for bit."""
    cfg = ChannelConfig(2, 1, 1)
    messages = ((1, 0, 1), (1, 1, 0))
    golden = ("0\t10\t11\t11\t10\t1:1\t1:0\n"
              "1\t11\t10\t10\t11\t-\t-\n")
    run_with_messages(cfg, 1, messages)  # warm the cached plan
    best = min(_timed(lambda: run_with_messages(cfg, 1, messages))
               for _ in range(5))
    trace, report = run_with_messages(cfg, 1, messages)
    assert trace.to_text() == golden
    assert report.delivered_bits == (3, 3)
    assert report.slots_used == 2
    assert report.achieved == F(3, 2) and report.gap == 0
    assert best < 1e-3
    print(f"\nPASS criterion 1: golden run bit-exact, "
          f"{best * 1e6:.0f} us per run (< 1 ms)")


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def test_criterion_2_formula_cross_checks():
    """Reduction, saturation, continuity, and gain bound on a dense grid."""
    t0 = time.perf_counter()
    alphas = [F(k, 24) for k in range(121)]
    betas = [F(0), F(1, 8), F(1, 4), F(1, 2), F(1), F(2)]
    d = F(1, 1000)
    for a in alphas:
        nofb = sum_capacity_nofb(a)
        assert sum_capacity_limited(a, 0) == nofb
        for b in betas:
            c = sum_capacity_limited(a, b)
            if b >= saturating_beta(a):
                assert c == sum_capacity_infinite(a)
            assert 0 <= c - nofb <= 2 * b
    for b in betas:
        for a0 in (F(1, 2), F(2, 3), F(1), F(2), 2 + 2 * b):
            c0 = sum_capacity_limited(a0, b)
            assert abs(sum_capacity_limited(a0 - d, b) - c0) <= 2 * d
            assert abs(sum_capacity_limited(a0 + d, b) - c0) <= 2 * d
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    print(f"\nPASS criterion 2: {len(alphas)} alphas x {len(betas)} betas "
          f"cross-checked in {elapsed:.2f} s (< 1 s)")


def test_criterion_3_simulated_rate_matches_formula(grid_audit):
    """Every integer grid config decodes 50 blocks at exactly the formula rate."""
    assert grid_audit["count"] == 840  # n in 1..8, m in 0..20, r_f in 0..4
    assert grid_audit["rate_failures"] == []
    assert grid_audit["sim_elapsed"] < 30.0
    print(f"\nPASS criterion 3: {grid_audit['count']} configs, zero decode "
          f"errors, rate == formula, {grid_audit['sim_elapsed']:.1f} s (< 30 s)")


MUTATION_SAMPLES = [(2, 1, 1), (4, 2, 1), (5, 3, 2), (4, 3, 0),
                    (3, 3, 1), (8, 15, 4), (1, 4, 1), (2, 5, 1)]


def test_criterion_4_rank_oracle_agreement(grid_audit):
    """Oracle blesses every honest grid run and flags 100 mutations per sample."""
    assert grid_audit["oracle_failures"] == []
    t0 = time.perf_counter()
    missed = []
    for n, m, rf in MUTATION_SAMPLES:
        cfg = ChannelConfig(n, m, rf)
        trace, _ = run(cfg, 3, seed=77)
        spots = role_bearing_positions(cfg, trace)
        rng = random.Random(4242)
        for _ in range(100):
            t, u, lvl = spots[rng.randrange(len(spots))]
            mutated = flip_bit(cfg, trace, t, u, lvl)
            if all(v.ok for v in rank_oracle(cfg, mutated)):
                missed.append((n, m, rf, t, u, lvl))
    mut_elapsed = time.perf_counter() - t0
    total = grid_audit["oracle_elapsed"] + mut_elapsed
    assert missed == []
    assert total < 60.0
    print(f"\nPASS criterion 4: oracle ok on all {grid_audit['count']} runs, "
          f"{100 * len(MUTATION_SAMPLES)}/{100 * len(MUTATION_SAMPLES)} "
          f"mutations flagged, {total:.1f} s (< 60 s)")


def test_criterion_5_feedback_budget_invariant(grid_audit):
    """Budget audit passes on every grid trace and rejects a forged one."""
    assert grid_audit["budget_failures"] == []
    cfg = ChannelConfig(2, 1, 1)
    z = BitWord.zeros(2)
    heavy = FeedbackMessage(slot=0, items=((1, 0), (0, 1)))  # 2 bits, r_f = 1
    rec = SlotRecord(0, z, z, z, z, heavy, FeedbackMessage(slot=0, items=()))
    forged = SimulationTrace(cfg=cfg, blocks=1, seed=None,
                             records=(rec,), messages=((), ()))
    assert verify_budget(forged, cfg) is False
    print(f"\nPASS criterion 5: budget holds on {grid_audit['count']} traces, "
          f"over-budget forgery rejected")


def test_criterion_6_sweep_reproduction(tmp_path, capsys):
    """CLI sweep at beta = 1/8 reproduces the formula curve exactly."""
    out = tmp_path / "sweep.csv"
    code = cli_main(["sweep", "--beta", "1/8", "--alpha-min", "0",
                     "--alpha-max", "3", "--step", "1/24", "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    lines = out.read_text(encoding="ascii").strip("\n").split("\n")
    assert lines[0] == "alpha,beta,c_limited,c_nofb,c_infinite"
    assert len(lines) == 74
    beta = F(1, 8)
    for k, line in enumerate(lines[1:]):
        a = F(k, 24)
        parts = line.split(",")
        assert parts[0] == fmt6(a)
        assert parts[1] == fmt6(beta)
        assert parts[2] == fmt6(sum_capacity_limited(a, beta))
        assert parts[3] == fmt6(sum_capacity_nofb(a))
        assert parts[4] == fmt6(sum_capacity_infinite(a))
    rows = [line.split(",") for line in lines[1:]]
    assert rows[0][2] == "2.000000"       # alpha = 0
    assert rows[16][2] == "1.333333"      # alpha = 2/3
    assert rows[54][2] == "2.250000"      # alpha = 9/4
    print("\nPASS criterion 6: 73-row sweep equals the formula curve, "
          "spot values confirmed")


def test_criterion_7_block_length_convergence():
    """Finite-length gap vanishes like C0/B with a single fitted constant."""
    cfg = ChannelConfig(4, 2, 1)
    gaps = {}
    for blocks in (1, 10, 100):
        _, report = run(cfg, blocks, seed=blocks)
        assert report.formula == F(3, 2)
        gaps[blocks] = report.gap
    assert gaps[1] == F(1, 2)
    assert gaps[10] == F(1, 14)
    assert gaps[100] == F(1, 134)
    assert gaps[1] > gaps[10] > gaps[100]
    c0 = max(b * g for b, g in gaps.items())  # single fitted constant
    assert c0 <= F(3, 4)
    for b, g in gaps.items():
        assert g <= c0 / b
    print(f"\nPASS criterion 7: gaps 1/2, 1/14, 1/134 shrink monotonically, "
          f"fitted C0 = {c0} bounds gap * blocks")
