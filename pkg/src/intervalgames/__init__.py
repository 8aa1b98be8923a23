"""Exact-arithmetic laboratory for open-cover refinement games on the line.

Two players alternate on a closed rational interval: one picks open
covers, the other answers with refining families that must be discrete
(pairwise disjoint closures) or merely disjoint depending on the
ruleset, trying to cover a target over an ordinal number of innings.
All arithmetic is exact rational; every verdict carries a certificate.
"""

from .sets import (
    DiscreteFamily,
    FamilyNotDiscrete,
    FamilyNotDisjoint,
    Interval,
    RSet,
    closed,
    is_discrete,
    is_disjoint,
    normalize,
    open_iv,
    parse_interval,
    parse_rset,
    rat,
    refines,
    union_all,
    witness_radius,
)
from .covers import (
    Cover,
    CoverError,
    ball_cover,
    chain_subcover,
    lebesgue_counterexample,
    lebesgue_number,
    verify_lebesgue,
    window_supremum,
)
from .ordinals import (
    InningLabel,
    InningSchedule,
    Ordinal,
    OrdinalError,
    inning_iterator,
    parse_ordinal,
    reduced_length,
)
from .cantor import CantorSpec
from .engine import (
    ConfigError,
    GameConfig,
    IllegalMove,
    TargetSpec,
    Transcript,
    Verdict,
    length_bracket_report,
    lift_to_closed_subspace,
    play,
    referee_step,
    validate_cover,
)
from .errors import InvariantViolation, ProtocolError

__version__ = "0.1.0"
