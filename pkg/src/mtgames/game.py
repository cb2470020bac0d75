"""Two-player game graphs and the controllable-predecessor operator.

A game graph has states 0..n-1 partitioned between Player 0 (the
controller, who resolves choices at her states) and Player 1 (the
environment). Every state carries a successor list and a set of atomic
propositions. Solvers require totality: each state has at least one
successor, so plays never get stuck.

The text format round-tripped by :func:`load_game` / :func:`serialize_game`::

    # comment
    states 4
    owner 0 0
    owner 1 1
    ...
    edge 0 1
    ...
    label 0 M1 T1

Sections appear in that order. Proposition names match
``[A-Za-z_][A-Za-z0-9_]*``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import GameParseError, ValidationError
from .sets import StateSet

PLAYER0 = 0
PLAYER1 = 1

PROP_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class GameGraph:
    """Immutable finite game graph.

    Parameters
    ----------
    n:
        Number of states.
    owners:
        Length-n sequence of 0/1 (0 = Player 0 state).
    edges:
        Iterable of (source, target) pairs.
    labels:
        Mapping from proposition name to an iterable of labeled states.
        Insertion order fixes the proposition table.
    canonical:
        When true (default), successor lists are sorted and deduplicated.
        Pass false to preserve the raw edge list, e.g. so that
        :func:`validate_graph` can report duplicate edges.
    """

    def __init__(
        self,
        n: int,
        owners: Sequence[int],
        edges: Iterable[tuple[int, int]],
        labels: Mapping[str, Iterable[int]] | None = None,
        *,
        canonical: bool = True,
    ):
        if n < 0:
            raise ValueError("state count must be nonnegative")
        owner = np.asarray(owners, dtype=np.int8)
        if owner.shape != (n,):
            raise ValueError(f"expected {n} owner entries, got {owner.shape}")
        if owner.size and not np.all((owner == PLAYER0) | (owner == PLAYER1)):
            raise ValueError("owners must be 0 or 1")
        self._n = n
        self._owner = owner
        self._owner.flags.writeable = False

        src, dst = _edge_arrays(edges)
        if src.size and (src.min() < 0 or src.max() >= n):
            raise ValueError("edge source out of range")
        # Dangling targets are representable so validate_graph can report them.
        order = np.argsort(src, kind="stable")
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        if canonical:
            rows = []
            for v in range(n):
                row = np.unique(dst[indptr[v] : indptr[v + 1]])
                rows.append(row)
            counts = np.fromiter((r.size for r in rows), dtype=np.int64, count=n)
            indptr = np.concatenate(([0], np.cumsum(counts)))
            dst = np.concatenate(rows) if rows else dst[:0]
        self._indptr = indptr
        self._indices = dst.astype(np.int64)
        self._indptr.flags.writeable = False
        self._indices.flags.writeable = False

        self._prop_names: tuple[str, ...] = ()
        self._prop_masks: list[np.ndarray] = []
        if labels:
            names = []
            for name, states in labels.items():
                if not PROP_NAME_RE.match(name):
                    raise ValueError(f"invalid proposition name {name!r}")
                mask = np.zeros(n, dtype=bool)
                idx = np.fromiter(states, dtype=np.int64)
                if idx.size:
                    if idx.min() < 0 or idx.max() >= n:
                        raise ValueError(f"label state out of range for {name!r}")
                    mask[idx] = True
                mask.flags.writeable = False
                names.append(name)
                self._prop_masks.append(mask)
            if len(set(names)) != len(names):
                raise ValueError("duplicate proposition name")
            self._prop_names = tuple(names)

        self._csr: sp.csr_matrix | None = None
        self._outdeg = np.diff(self._indptr)
        self._is_p0 = self._owner == PLAYER0
        self._is_p0.flags.writeable = False

    @property
    def n(self) -> int:
        return self._n

    @property
    def num_edges(self) -> int:
        return int(self._indices.size)

    @property
    def props(self) -> tuple[str, ...]:
        return self._prop_names

    @property
    def is_player0_mask(self) -> np.ndarray:
        return self._is_p0

    def owner(self, v: int) -> int:
        return int(self._owner[v])

    def player_states(self, player: int) -> StateSet:
        return StateSet.from_mask(self._owner == player)

    def successors(self, v: int) -> np.ndarray:
        return self._indices[self._indptr[v] : self._indptr[v + 1]]

    def out_degree(self, v: int) -> int:
        return int(self._outdeg[v])

    def has_prop(self, name: str) -> bool:
        return name in self._prop_names

    def prop_set(self, name: str) -> StateSet:
        """The set of states labeled with ``name``."""
        try:
            i = self._prop_names.index(name)
        except ValueError:
            from .errors import UnboundProposition

            raise UnboundProposition(
                f"proposition {name!r} unbound in graph"
            ) from None
        return StateSet.from_mask(self._prop_masks[i])

    def label_names(self, v: int) -> frozenset[str]:
        return frozenset(
            name for name, mask in zip(self._prop_names, self._prop_masks) if mask[v]
        )

    def edges(self) -> Iterable[tuple[int, int]]:
        for v in range(self._n):
            for w in self.successors(v):
                yield v, int(w)

    def _matrix(self) -> sp.csr_matrix:
        if self._csr is None:
            if self._indices.size and self._indices.max() >= self._n:
                raise ValidationError("graph has dangling successor indices")
            if self._indices.size and self._indices.min() < 0:
                raise ValidationError("graph has negative successor indices")
            data = np.ones(self._indices.size, dtype=np.int32)
            self._csr = sp.csr_matrix(
                (data, self._indices.astype(np.int32), self._indptr),
                shape=(self._n, self._n),
            )
        return self._csr

    def count_successors_in(self, mask: np.ndarray) -> np.ndarray:
        """Per-state count of successors inside the given boolean mask."""
        return self._matrix() @ mask.astype(np.int32)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameGraph):
            return NotImplemented
        if self._n != other._n:
            return False
        if not np.array_equal(self._owner, other._owner):
            return False
        if not (
            np.array_equal(self._indptr, other._indptr)
            and np.array_equal(self._indices, other._indices)
        ):
            return False
        # Labels compare by name; empty propositions are ignored since the
        # text format cannot represent them.
        mine = {
            nm: mask
            for nm, mask in zip(self._prop_names, self._prop_masks)
            if mask.any()
        }
        theirs = {
            nm: mask
            for nm, mask in zip(other._prop_names, other._prop_masks)
            if mask.any()
        }
        if mine.keys() != theirs.keys():
            return False
        return all(np.array_equal(mine[nm], theirs[nm]) for nm in mine)

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"GameGraph(n={self._n}, edges={self.num_edges}, "
            f"props={list(self._prop_names)})"
        )


def _edge_arrays(edges: Iterable[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(edges, tuple) and len(edges) == 2 and isinstance(edges[0], np.ndarray):
        return edges[0].astype(np.int64), edges[1].astype(np.int64)
    pairs = list(edges)
    if not pairs:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    arr = np.asarray(pairs, dtype=np.int64)
    return arr[:, 0], arr[:, 1]


def pre(game: GameGraph, target: StateSet) -> StateSet:
    """Controllable predecessor of ``target``.

    A Player 0 state belongs to the result iff some successor is in
    ``target``; a Player 1 state iff all successors are. Assumes a valid
    (in particular total) graph.
    """
    if target.universe != game.n:
        raise ValueError("target universe does not match game")
    cnt = game.count_successors_in(target.bits)
    hit = np.where(game.is_player0_mask, cnt > 0, cnt == game._outdeg)
    return StateSet.from_mask(hit)


def validate_graph(game: GameGraph) -> list[str]:
    """Collect structural violations; an empty list means valid.

    Reported issues: dangling successor indices, states with no
    successor (totality), duplicate edges.
    """
    issues: list[str] = []
    n = game.n
    for v in range(n):
        row = game.successors(v)
        if row.size == 0:
            issues.append(f"state {v}: no successor")
            continue
        bad = row[(row < 0) | (row >= n)]
        for w in bad:
            issues.append(f"state {v}: edge target {int(w)} out of range")
        seen = set()
        for w in row:
            w = int(w)
            if w in seen:
                issues.append(f"state {v}: duplicate edge to {w}")
            seen.add(w)
    return issues


_SECTIONS = ("states", "owner", "edge", "label")


def load_game(text: str) -> GameGraph:
    """Parse the game text format into a canonical :class:`GameGraph`.

    Raises :class:`GameParseError` with a line number on malformed
    input, and :class:`ValidationError` listing structural issues
    (totality, duplicate edges, dangling targets).
    """
    n: int | None = None
    owners: list[int | None] = []
    edges: list[tuple[int, int]] = []
    labels: dict[str, list[int]] = {}
    stage = 0

    def advance(section: str, lineno: int) -> None:
        nonlocal stage
        want = _SECTIONS.index(section)
        if want < stage:
            raise GameParseError(
                f"'{section}' line after '{_SECTIONS[stage]}' section", lineno
            )
        stage = want

    def parse_int(tok: str, what: str, lineno: int) -> int:
        try:
            return int(tok)
        except ValueError:
            raise GameParseError(f"expected integer {what}, got {tok!r}", lineno)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "states":
            if n is not None:
                raise GameParseError("duplicate 'states' line", lineno)
            if len(parts) != 2:
                raise GameParseError("expected 'states <n>'", lineno)
            n = parse_int(parts[1], "state count", lineno)
            if n < 0:
                raise GameParseError("state count must be nonnegative", lineno)
            owners = [None] * n
            continue
        if n is None:
            raise GameParseError("first line must be 'states <n>'", lineno)
        if kind == "owner":
            advance("owner", lineno)
            if len(parts) != 3:
                raise GameParseError("expected 'owner <state> <0|1>'", lineno)
            v = parse_int(parts[1], "state", lineno)
            o = parse_int(parts[2], "owner", lineno)
            if not 0 <= v < n:
                raise GameParseError(f"state {v} out of range", lineno)
            if o not in (0, 1):
                raise GameParseError(f"owner must be 0 or 1, got {o}", lineno)
            if owners[v] is not None:
                raise GameParseError(f"duplicate owner for state {v}", lineno)
            owners[v] = o
        elif kind == "edge":
            advance("edge", lineno)
            if len(parts) != 3:
                raise GameParseError("expected 'edge <from> <to>'", lineno)
            u = parse_int(parts[1], "source state", lineno)
            w = parse_int(parts[2], "target state", lineno)
            if not 0 <= u < n:
                raise GameParseError(f"edge source {u} out of range", lineno)
            if not 0 <= w < n:
                raise GameParseError(f"edge target {w} out of range", lineno)
            edges.append((u, w))
        elif kind == "label":
            advance("label", lineno)
            if len(parts) < 3:
                raise GameParseError("expected 'label <state> <prop> [...]'", lineno)
            v = parse_int(parts[1], "state", lineno)
            if not 0 <= v < n:
                raise GameParseError(f"state {v} out of range", lineno)
            for name in parts[2:]:
                if not PROP_NAME_RE.match(name):
                    raise GameParseError(f"invalid proposition name {name!r}", lineno)
                labels.setdefault(name, []).append(v)
        else:
            raise GameParseError(f"unknown directive {kind!r}", lineno)

    if n is None:
        raise GameParseError("missing 'states' line")
    missing = [v for v, o in enumerate(owners) if o is None]
    if missing:
        raise GameParseError(f"missing owner for state {missing[0]}")

    raw = GameGraph(n, [int(o) for o in owners], edges, labels, canonical=False)
    issues = validate_graph(raw)
    if issues:
        raise ValidationError("; ".join(issues))
    return GameGraph(n, [int(o) for o in owners], edges, labels)


def serialize_game(game: GameGraph) -> str:
    """Render a graph in the canonical text form accepted by load_game."""
    out = [f"states {game.n}"]
    for v in range(game.n):
        out.append(f"owner {v} {game.owner(v)}")
    for v in range(game.n):
        for w in sorted(set(int(x) for x in game.successors(v))):
            out.append(f"edge {v} {w}")
    for v in range(game.n):
        names = sorted(game.label_names(v))
        if names:
            out.append(f"label {v} {' '.join(names)}")
    return "\n".join(out) + "\n"
