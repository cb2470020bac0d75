"""Memoryless strategies: extraction, checking, enumeration.

Extraction reads the iterate ranks recorded by the direct solver. For a
winning Player-0 state in mode k it prefers a *progress* edge into a
strictly earlier outer iterate, falling back to a *stay* edge that
remains inside an inner fixed point of one of mode k's targets at the
same or earlier rank. Rank descent plus the stay-region structure make
every play under the strategy winning.

The checker and the enumerator are deliberately independent of the
fixed-point machinery. Both rest on the same finite-play fact: the set
of states a play visits infinitely often is strongly connected in the
followed subgraph, so a strategy fails exactly when some reachable
strongly connected component lies inside one mode but inside none of
that mode's targets.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BoundExceeded, GameParseError, NonExhaustiveModes
from .game import PLAYER0, GameGraph
from .sets import StateSet
from .solver import MTSolveResult
from .specs import LassoWord, MTSpec, bind_spec, lasso_satisfies


@dataclass
class Strategy:
    """Successor choice for every winning Player-0 state."""

    choices: dict[int, int] = field(default_factory=dict)
    winning_size: int = 0


# ---------------------------------------------------------------------------
# Extraction


def extract_strategy(game: GameGraph, spec: MTSpec, result: MTSolveResult) -> Strategy:
    """Memoryless winning strategy from a recorded direct-solver result.

    Requires modes to be exhaustive over the winning set (every winning
    state must know its mode) and a result that carries a trace, i.e.
    one produced by the direct algorithm with recording enabled.
    """
    if result.algo != "mt" or result.trace is None:
        raise ValueError(
            "strategy extraction requires a direct-solver result with a "
            "recorded iterate trace (--algo mt, recording enabled)"
        )
    if result.winning.universe != game.n:
        raise ValueError("result does not belong to this game graph")
    bound = result.bound
    winning = result.winning
    win_bits = winning.bits
    mode_idx = bound.mode_index_of()

    unlabeled = win_bits & (mode_idx < 0)
    if unlabeled.any():
        raise NonExhaustiveModes(
            f"{int(unlabeled.sum())} winning state(s) carry no mode; "
            "strategy extraction requires modes exhaustive over the winning set"
        )

    persist_bits = [
        [p.bits for p in row] for row in bound.persistence_sets
    ]

    choices: dict[int, int] = {}
    for v in winning.indices():
        v = int(v)
        if game.owner(v) != PLAYER0:
            continue
        k = int(mode_idx[v])
        tr = result.trace.modes[k]
        r = int(tr.y_rank[v])
        if r < 1:
            raise RuntimeError(
                f"internal error: winning state {v} missing from mode {k} iterates"
            )
        succs = [int(w) for w in game.successors(v)]

        # Progress edges: strictly earlier outer iterate.
        best: tuple[int, int] | None = None
        if r >= 2:
            for w in succs:
                rw = int(tr.y_rank[w])
                if win_bits[w] and 1 <= rw < r:
                    key = (rw, w)
                    if best is None or key < best:
                        best = key
        if best is None:
            # Stay edges: remain in an inner fixed point of a target of
            # mode k containing v, at v's rank or earlier.
            for j in range(tr.target_count):
                if not persist_bits[k][j][v]:
                    continue
                xr = tr.x_rank[j]
                lv = int(xr[v])
                if lv < 0:
                    continue
                for w in succs:
                    lw = int(xr[w])
                    if win_bits[w] and 0 <= lw <= lv:
                        key = (int(tr.y_rank[w]), w)
                        if best is None or key < best:
                            best = key
        if best is None:
            raise RuntimeError(
                f"internal error: no eligible successor for winning state {v}; "
                "iterate trace inconsistent with winning set"
            )
        choices[v] = best[1]
    return Strategy(choices, winning_size=len(winning))


# ---------------------------------------------------------------------------
# Checking


@dataclass
class CheckVerdict:
    """Outcome of a strategy check.

    reason is one of: missing-choice, illegal-edge, escapes-winning,
    violating-cycle. For violating-cycle the lasso fields hold a
    concrete losing play (cycle repeated forever, empty prefix).
    """

    ok: bool
    reason: str | None = None
    detail: str = ""
    edge: tuple[int, int] | None = None
    mode: str | None = None
    prefix: tuple[int, ...] = ()
    cycle: tuple[int, ...] = ()

    def lasso(self, game: GameGraph) -> LassoWord | None:
        if not self.cycle:
            return None
        return LassoWord(
            tuple(game.label_names(v) for v in self.prefix),
            tuple(game.label_names(v) for v in self.cycle),
        )


def _bfs_path(
    start: int, goal: int, members: set[int], succ: dict[int, list[int]]
) -> list[int]:
    """Shortest path start..goal of at least one edge inside ``members``;
    with start == goal this finds a shortest nontrivial cycle."""
    parent: dict[int, int] = {}
    q: deque[int] = deque()

    def push(node: int, via: int) -> None:
        if node in members and node not in parent:
            parent[node] = via
            q.append(node)

    for w in succ[start]:
        push(w, start)
    while q:
        u = q.popleft()
        if u == goal:
            break
        for w in succ[u]:
            push(w, u)
    if goal not in parent:
        raise RuntimeError(
            "internal error: no path inside strongly connected component"
        )
    rev = [goal]
    cur = goal
    while True:
        via = parent[cur]
        rev.append(via)
        if via == start:
            break
        cur = via
    rev.reverse()
    return rev


def check_strategy(
    game: GameGraph,
    spec: MTSpec,
    strategy: Strategy,
    winning: StateSet,
    *,
    max_states: int = 2000,
) -> CheckVerdict:
    """Verify that every play from ``winning`` under the strategy wins.

    Follows Player 0's choices, leaves Player 1 unrestricted, and
    checks (a) the play can never leave ``winning`` and (b) no
    reachable cycle settles in a mode without settling in one of its
    targets. Exact: works on strongly connected components, which is
    equivalent to checking every cycle, because a component has a
    target-avoiding cycle exactly when it has a state outside each
    target.
    """
    if game.n > max_states:
        raise BoundExceeded(
            f"graph has {game.n} states, exceeding the checker bound {max_states}"
        )
    bound = bind_spec(game, spec)
    win_bits = winning.bits

    # Closure of the winning set under the followed edges.
    succ: dict[int, list[int]] = {}
    for v in winning.indices():
        v = int(v)
        outs = [int(w) for w in game.successors(v)]
        if game.owner(v) == PLAYER0:
            c = strategy.choices.get(v)
            if c is None:
                return CheckVerdict(
                    False,
                    "missing-choice",
                    f"Player0 winning state {v} has no chosen successor",
                )
            if c not in outs:
                return CheckVerdict(
                    False,
                    "illegal-edge",
                    f"chosen move {v} -> {c} is not an edge of the graph",
                    edge=(v, c),
                )
            outs = [c]
        for w in outs:
            if not win_bits[w]:
                return CheckVerdict(
                    False,
                    "escapes-winning",
                    f"edge {v} -> {w} leaves the winning set",
                    edge=(v, w),
                )
        succ[v] = outs

    # Cycle criterion, one mode at a time.
    for i, mode in enumerate(spec.modes):
        member_arr = win_bits & bound.mode_sets[i].bits
        nodes = [int(v) for v in np.flatnonzero(member_arr)]
        if not nodes:
            continue
        members = set(nodes)
        local = {v: idx for idx, v in enumerate(nodes)}
        rows, cols = [], []
        self_loop = set()
        for v in nodes:
            for w in succ[v]:
                if w in members:
                    rows.append(local[v])
                    cols.append(local[w])
                    if w == v:
                        self_loop.add(v)
        if not rows:
            continue
        adj = csr_matrix(
            (np.ones(len(rows), dtype=np.int8), (rows, cols)),
            shape=(len(nodes), len(nodes)),
        )
        ncomp, labels = connected_components(adj, directed=True, connection="strong")
        for comp in range(ncomp):
            comp_nodes = [nodes[idx] for idx in np.flatnonzero(labels == comp)]
            if len(comp_nodes) == 1 and comp_nodes[0] not in self_loop:
                continue
            witnesses: list[int] = []
            violating = True
            for j in range(len(mode.targets)):
                tb = bound.target_sets[i][j].bits
                outside = next((v for v in comp_nodes if not tb[v]), None)
                if outside is None:
                    violating = False  # this target contains the component
                    break
                if outside not in witnesses:
                    witnesses.append(outside)
            if not violating:
                continue
            comp_set = set(comp_nodes)
            cycle = _stitch_cycle(witnesses, comp_set, succ)
            verdict = CheckVerdict(
                False,
                "violating-cycle",
                f"cycle settles in mode {mode.name} but in none of its targets",
                mode=mode.name,
                cycle=tuple(cycle),
            )
            word = verdict.lasso(game)
            assert word is not None and not lasso_satisfies(spec, word), (
                "internal error: constructed counterexample satisfies the objective"
            )
            return verdict
    return CheckVerdict(True)


def _stitch_cycle(
    witnesses: list[int], members: set[int], succ: dict[int, list[int]]
) -> list[int]:
    """Closed walk through all witnesses inside one strongly connected
    component; returned without the duplicated final state."""
    if len(witnesses) == 1:
        w = witnesses[0]
        path = _bfs_path(w, w, members, succ)
        return path[:-1]
    walk = [witnesses[0]]
    stops = witnesses[1:] + [witnesses[0]]
    cur = witnesses[0]
    for nxt in stops:
        seg = _bfs_path(cur, nxt, members, succ)
        walk.extend(seg[1:])
        cur = nxt
    return walk[:-1]


# ---------------------------------------------------------------------------
# Brute-force oracle


def _bits_of(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def enumerate_memoryless_winning(
    game: GameGraph, spec: MTSpec, *, max_strategies: int = 10**6
) -> StateSet:
    """States some memoryless Player-0 strategy wins from.

    Brute force over all choice combinations; intended as an oracle on
    tiny graphs. A state wins under a fixed strategy when it cannot
    reach any strongly connected component that sits inside one mode
    and avoids all of that mode's targets.
    """
    bound = bind_spec(game, spec)
    n = game.n
    p0 = [v for v in range(n) if game.owner(v) == PLAYER0]
    succ_all = [[int(w) for w in game.successors(v)] for v in range(n)]

    count = 1
    for v in p0:
        count *= len(succ_all[v])
        if count > max_strategies:
            raise BoundExceeded(
                f"strategy count exceeds enumeration bound {max_strategies}"
            )

    mode_masks = []
    target_masks = []
    for i in range(spec.mode_count):
        mm = 0
        for v in bound.mode_sets[i].indices():
            mm |= 1 << int(v)
        mode_masks.append(mm)
        target_masks.append(
            [
                sum(1 << int(v) for v in ts.indices())
                for ts in bound.target_sets[i]
            ]
        )

    all_mask = (1 << n) - 1
    winning = 0

    def closure(adj: list[int]) -> list[int]:
        reach = list(adj)
        changed = True
        while changed:
            changed = False
            for v in range(n):
                acc = reach[v]
                for w in _bits_of(reach[v]):
                    acc |= reach[w]
                if acc != reach[v]:
                    reach[v] = acc
                    changed = True
        return reach

    for combo in itertools.product(*(succ_all[v] for v in p0)):
        pick = dict(zip(p0, combo))
        adj = [0] * n
        for v in range(n):
            if v in pick:
                adj[v] = 1 << pick[v]
            else:
                for w in succ_all[v]:
                    adj[v] |= 1 << w

        bad = 0
        for i in range(spec.mode_count):
            mm = mode_masks[i]
            madj = [adj[v] & mm if (mm >> v) & 1 else 0 for v in range(n)]
            mreach = closure(madj)
            for v in _bits_of(mm):
                if not (mreach[v] >> v) & 1:
                    continue  # not on a cycle within the mode
                scc = 0
                for w in _bits_of(mreach[v]):
                    if (mreach[w] >> v) & 1:
                        scc |= 1 << w
                if all(scc & ~tm for tm in target_masks[i]):
                    bad |= scc
        if bad:
            full = closure(adj)
            lose = bad
            for v in range(n):
                if full[v] & bad:
                    lose |= 1 << v
            winning |= all_mask & ~lose
        else:
            winning = all_mask
        if winning == all_mask:
            break

    out = np.zeros(n, dtype=bool)
    for v in _bits_of(winning):
        out[v] = True
    return StateSet.from_mask(out)


# ---------------------------------------------------------------------------
# File formats

_MOVE_RE = re.compile(r"move\s+(\d+)\s+(\d+)\s*$")
_HEADER_RE = re.compile(r"#\s*winning\s+(\d+)\s+states\s*$")


def format_strategy(strategy: Strategy) -> str:
    lines = [f"# winning {strategy.winning_size} states"]
    for v in sorted(strategy.choices):
        lines.append(f"move {v} {strategy.choices[v]}")
    return "\n".join(lines) + "\n"


def parse_strategy(text: str) -> Strategy:
    choices: dict[int, int] = {}
    winning_size = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER_RE.match(line)
            if m:
                winning_size = int(m.group(1))
            continue
        m = _MOVE_RE.match(line)
        if not m:
            raise GameParseError("expected 'move <state> <successor>'", line=lineno)
        v, w = int(m.group(1)), int(m.group(2))
        if v in choices:
            raise GameParseError(f"duplicate move for state {v}", line=lineno)
        choices[v] = w
    return Strategy(choices, winning_size)


def format_winning(winning: StateSet) -> str:
    lines = [f"# {len(winning)} states"]
    lines.extend(str(int(v)) for v in winning.indices())
    return "\n".join(lines) + "\n"


def parse_winning(text: str, n: int) -> StateSet:
    members = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = int(line)
        except ValueError:
            raise GameParseError("expected one state index per line", line=lineno)
        if not 0 <= v < n:
            raise GameParseError(f"state {v} out of range", line=lineno)
        members.append(v)
    return StateSet(n, members)
