"""GR(1) solving and the reduction of mode-target objectives to GR(1).

A GR(1) objective is an implication between two conjunctions of
recurrence conditions: if every assumption set is visited infinitely
often, every guarantee set must be visited infinitely often too.

A mode-target objective embeds into GR(1) by padding every mode's
target list to the common maximum length with empty sets, taking as
j-th assumption "the play is currently not inside any mode's j-th
(padded) target", and as i-th guarantee "the play is currently outside
mode i". The embedded game has max_targets assumptions and mode_count
guarantees, which is precisely why its solver can do more predecessor
work than the direct one when target counts are uneven; the
benchmarks quantify that gap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .fixpoint import FixpointStats, solve_stable_conjunction
from .game import GameGraph, validate_graph
from .sets import StateSet
from .solver import MTSolveResult, SolveOptions
from .specs import GR1Spec, MTSpec, bind_spec, require_exclusive


@dataclass
class EmbeddedGR1:
    """GR(1) view of a mode-target objective over a concrete graph.

    padded_targets[i][j] is mode i's j-th target set, or the empty set
    when mode i has fewer than j+1 targets. assumptions[j] is the
    complement of the union over modes of (mode i and its j-th padded
    target). guarantees[i] is the complement of mode i.

    flat_assumption_count / flat_guarantee_count describe the
    unpadded one-assumption-per-target variant of the reduction; it is
    recorded for reporting only and never solved, since solving it
    would repeat the padded game's work at strictly worse cost.
    """

    padded_targets: list[list[StateSet]]
    assumptions: list[StateSet]
    guarantees: list[StateSet]
    flat_assumption_count: int
    flat_guarantee_count: int

    @property
    def assumption_count(self) -> int:
        return len(self.assumptions)

    @property
    def guarantee_count(self) -> int:
        return len(self.guarantees)

    def spec(self) -> GR1Spec:
        return GR1Spec(tuple(self.assumptions), tuple(self.guarantees))


def embed(game: GameGraph, spec: MTSpec) -> EmbeddedGR1:
    """Build the GR(1) form of a mode-target objective.

    Mode exclusivity is a hard requirement: the equivalence between the
    two objectives breaks when a state carries two modes.
    """
    require_exclusive(game, spec)
    bound = bind_spec(game, spec)
    m = spec.mode_count
    max_t = spec.max_targets
    none = StateSet.empty(game.n)

    padded: list[list[StateSet]] = []
    for i, mode in enumerate(spec.modes):
        row = [
            bound.target_sets[i][j] if j < len(mode.targets) else none
            for j in range(max_t)
        ]
        padded.append(row)

    assumptions: list[StateSet] = []
    for j in range(max_t):
        hit = none
        for i in range(m):
            hit = hit | (bound.mode_sets[i] & padded[i][j])
        assumptions.append(~hit)

    guarantees = [~bound.mode_sets[i] for i in range(m)]
    return EmbeddedGR1(
        padded_targets=padded,
        assumptions=assumptions,
        guarantees=guarantees,
        flat_assumption_count=spec.sum_targets,
        flat_guarantee_count=m,
    )


def solve_gr1_emb(
    game: GameGraph, spec: MTSpec, options: SolveOptions | None = None
) -> MTSolveResult:
    """Winning region of the mode-target objective via its GR(1) form.

    Returns the same winning set as solve_mt on every valid input; the
    predecessor counts differ because every mode iterates over the
    padded target list. No iterate trace is recorded -- strategy
    extraction is defined on the direct solver's traces.
    """
    opts = options or SolveOptions()
    issues = validate_graph(game)
    if issues:
        raise ValidationError("; ".join(issues))
    emb = embed(game, spec)
    bound = bind_spec(game, spec)

    persist_row = [~a for a in emb.assumptions]
    persist_matrix = [persist_row for _ in range(spec.mode_count)]
    outcome = solve_stable_conjunction(
        game,
        persist_matrix,
        emb.guarantees,
        warm=opts.warm,
        record=False,
    )
    return MTSolveResult(
        outcome.winning, outcome.stats, None, bound, algo="gr1emb"
    )


@dataclass
class GR1SolveResult:
    winning: StateSet
    stats: FixpointStats


def solve_gr1(
    game: GameGraph, spec: GR1Spec, *, warm: bool = False
) -> GR1SolveResult:
    """Generic GR(1) winning region.

    Per guarantee g_i, the play must either visit g_i again from a
    still-winnable state, or settle forever inside the complement of
    some assumption (falsifying the antecedent). With no assumptions
    this degenerates to a generalized Buechi condition.
    """
    issues = validate_graph(game)
    if issues:
        raise ValidationError("; ".join(issues))
    for s in spec.assumptions + spec.guarantees:
        if s.universe != game.n:
            raise ValidationError(
                f"spec set universe {s.universe} does not match graph size {game.n}"
            )
    persist_row = [~a for a in spec.assumptions]
    persist_matrix = [persist_row for _ in spec.guarantees]
    outcome = solve_stable_conjunction(
        game, persist_matrix, list(spec.guarantees), warm=warm
    )
    return GR1SolveResult(outcome.winning, outcome.stats)
