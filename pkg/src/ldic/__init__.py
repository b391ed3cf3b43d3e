"""Bit-exact tools for the two-user symmetric linear deterministic
interference channel with rate-limited feedback.

Submodules: core (words and channel), capacity (exact formulas), strategies
(encoder/decoder state machines), blockcode (certified two-slot schemes),
simulator (runs, rate reports, rank oracle), cli (command line).
"""

from __future__ import annotations

from .capacity import (RegimeLabel, regime, saturating_beta,
                       sum_capacity_infinite, sum_capacity_limited,
                       sum_capacity_nofb)
from .core import BitWord, ChannelConfig, channel_output, shift_down, xor
from .errors import LdicError, PlanError, SimulationError
from .simulator import (OracleVerdict, RateReport, SimulationTrace, SlotRecord,
                        rank_oracle, run, run_with_messages, verify_budget)
from .strategies import (FeedbackMessage, Role, RxState, StrategyPlan, TxState,
                         absorb_feedback, decode_block, encode_slot,
                         make_feedback, plan_for, receive)

__version__ = "0.1.0"

__all__ = [
    "BitWord", "ChannelConfig", "channel_output", "shift_down", "xor",
    "RegimeLabel", "regime", "saturating_beta", "sum_capacity_infinite",
    "sum_capacity_limited", "sum_capacity_nofb",
    "Role", "StrategyPlan", "FeedbackMessage", "TxState", "RxState",
    "plan_for", "encode_slot", "make_feedback", "absorb_feedback",
    "receive", "decode_block",
    "SimulationTrace", "SlotRecord", "RateReport", "OracleVerdict",
    "run", "run_with_messages", "rank_oracle", "verify_budget",
    "LdicError", "PlanError", "SimulationError",
    "__version__",
]
