"""Finite history-time frames with per-player knowledge partitions.

A frame fixes a finite ordered set of histories, a bounded time horizon H,
and one knowledge partition per player over the grid of points (history,
time) with 0 <= t < H.  Events are plain sets of points bound to their
frame.  Every operator in this module is an exact set computation; there
are no tolerances anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence


class FrameError(ValueError):
    """Malformed frame or event construction."""


class FrameMismatchError(FrameError):
    """Operands bound to different frames."""


class UnknownPlayerError(FrameError):
    """Player id not present in the frame."""


class LocalityError(FrameError):
    """An event required to be local to some player is not."""


class Frame:
    """Histories x bounded time grid plus one point partition per player.

    Partitions are given as a flat ken-id sequence per player, indexed by
    point index ``h * horizon + t``.  Ken ids must be contiguous integers
    starting at 0 for each player.
    """

    __slots__ = (
        "players",
        "histories",
        "horizon",
        "_partitions",
        "_kens",
        "_hist_index",
        "_columns",
        "_all_points",
    )

    def __init__(
        self,
        players: Sequence[str],
        histories: Sequence[str],
        horizon: int,
        partitions: Mapping[str, Sequence[int]],
    ):
        if not players:
            raise FrameError("frame needs at least one player")
        if not histories:
            raise FrameError("frame needs at least one history")
        if horizon < 1:
            raise FrameError("horizon must be at least 1")
        if len(set(players)) != len(players):
            raise FrameError("duplicate player ids")
        if len(set(histories)) != len(histories):
            raise FrameError("duplicate history ids")
        self.players = tuple(players)
        self.histories = tuple(histories)
        self.horizon = int(horizon)
        n = len(self.histories) * self.horizon
        if set(partitions) != set(self.players):
            raise FrameError("partitions must cover exactly the frame's players")
        parts = {}
        kens = {}
        for i in self.players:
            assignment = tuple(partitions[i])
            if len(assignment) != n:
                raise FrameError(
                    f"partition of {i!r} covers {len(assignment)} points, expected {n}"
                )
            ids = set(assignment)
            if ids != set(range(len(ids))):
                raise FrameError(f"ken ids of {i!r} must be contiguous from 0")
            cells: list[list[int]] = [[] for _ in range(len(ids))]
            for p, k in enumerate(assignment):
                cells[k].append(p)
            parts[i] = assignment
            kens[i] = tuple(tuple(cell) for cell in cells)
        self._partitions = parts
        self._kens = kens
        self._hist_index = {h: idx for idx, h in enumerate(self.histories)}
        self._columns = tuple(
            frozenset(range(h * self.horizon, (h + 1) * self.horizon))
            for h in range(len(self.histories))
        )
        self._all_points = frozenset(range(n))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_ken_sets(
        cls,
        players: Sequence[str],
        histories: Sequence[str],
        horizon: int,
        kens: Mapping[str, Iterable[Iterable[tuple[str, int]]]],
    ) -> "Frame":
        """Build a frame from explicit ken point-sets per player.

        Each ken is an iterable of (history id, time) pairs; the kens of a
        player must partition the full point grid.
        """
        hist_index = {h: idx for idx, h in enumerate(histories)}
        n = len(histories) * horizon
        partitions = {}
        for i in players:
            assignment = [-1] * n
            for kid, cell in enumerate(kens[i]):
                for (h, t) in cell:
                    if h not in hist_index:
                        raise FrameError(f"unknown history {h!r} in ken of {i!r}")
                    if not (0 <= t < horizon):
                        raise FrameError(f"time {t} out of range in ken of {i!r}")
                    p = hist_index[h] * horizon + t
                    if assignment[p] != -1:
                        raise FrameError(f"point {(h, t)} assigned twice for {i!r}")
                    assignment[p] = kid
            if -1 in assignment:
                p = assignment.index(-1)
                h, t = divmod(p, horizon)
                raise FrameError(f"point {(histories[h], t)} not covered for {i!r}")
            partitions[i] = assignment
        return cls(players, histories, horizon, partitions)

    # -- basic queries --------------------------------------------------------

    @property
    def n_points(self) -> int:
        return len(self.histories) * self.horizon

    def point(self, history: str, t: int) -> int:
        if history not in self._hist_index:
            raise FrameError(f"unknown history {history!r}")
        if not (0 <= t < self.horizon):
            raise FrameError(f"time {t} outside horizon {self.horizon}")
        return self._hist_index[history] * self.horizon + t

    def locate(self, p: int) -> tuple[str, int]:
        h, t = divmod(p, self.horizon)
        return self.histories[h], t

    def history_index(self, history: str) -> int:
        try:
            return self._hist_index[history]
        except KeyError:
            raise FrameError(f"unknown history {history!r}") from None

    def column(self, h_idx: int) -> frozenset[int]:
        return self._columns[h_idx]

    def ken_id(self, player: str, p: int) -> int:
        self._check_player(player)
        return self._partitions[player][p]

    def kens(self, player: str) -> tuple[tuple[int, ...], ...]:
        self._check_player(player)
        return self._kens[player]

    def ken_of(self, player: str, p: int) -> tuple[int, ...]:
        self._check_player(player)
        return self._kens[player][self._partitions[player][p]]

    def _check_player(self, player: str) -> None:
        if player not in self._hist_index and player not in self.players:
            raise UnknownPlayerError(f"unknown player {player!r}")
        if player not in self.players:
            raise UnknownPlayerError(f"unknown player {player!r}")

    # -- event constructors ---------------------------------------------------

    def event(self, points: Iterable[tuple[str, int]]) -> "Event":
        return Event(self, frozenset(self.point(h, t) for h, t in points))

    def event_from_indices(self, points: Iterable[int]) -> "Event":
        pts = frozenset(points)
        for p in pts:
            if not (0 <= p < self.n_points):
                raise FrameError(f"point index {p} out of range")
        return Event(self, pts)

    def event_where(self, pred: Callable[[str, int], bool]) -> "Event":
        pts = frozenset(
            h * self.horizon + t
            for h in range(len(self.histories))
            for t in range(self.horizon)
            if pred(self.histories[h], t)
        )
        return Event(self, pts)

    def all_points(self) -> "Event":
        return Event(self, self._all_points)

    def empty(self) -> "Event":
        return Event(self, frozenset())

    def history_columns(self, histories: Iterable[str]) -> "Event":
        pts: set[int] = set()
        for h in histories:
            pts |= self._columns[self.history_index(h)]
        return Event(self, frozenset(pts))

    # -- equality / serialization support --------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.players == other.players
            and self.histories == other.histories
            and self.horizon == other.horizon
            and self._partitions == other._partitions
        )

    def __hash__(self):
        return hash((self.players, self.histories, self.horizon))

    def __repr__(self):
        return (
            f"Frame(players={len(self.players)}, histories={len(self.histories)}, "
            f"horizon={self.horizon})"
        )


@dataclass(frozen=True)
class Event:
    """A set of points of one frame.  Immutable; all operations are pure."""

    frame: Frame
    points: frozenset[int]

    def _same_frame(self, other: "Event") -> None:
        if self.frame is not other.frame and self.frame != other.frame:
            raise FrameMismatchError("events bound to different frames")

    # set algebra ---------------------------------------------------------

    def complement(self) -> "Event":
        return Event(self.frame, self.frame._all_points - self.points)

    def intersect(self, other: "Event") -> "Event":
        self._same_frame(other)
        return Event(self.frame, self.points & other.points)

    def union(self, other: "Event") -> "Event":
        self._same_frame(other)
        return Event(self.frame, self.points | other.points)

    def difference(self, other: "Event") -> "Event":
        self._same_frame(other)
        return Event(self.frame, self.points - other.points)

    def implies(self, other: "Event") -> "Event":
        # (psi -> phi) is the complement of (psi minus phi)
        self._same_frame(other)
        return Event(self.frame, self.frame._all_points - (self.points - other.points))

    __and__ = intersect
    __or__ = union
    __sub__ = difference
    __invert__ = complement

    def issubset(self, other: "Event") -> bool:
        self._same_frame(other)
        return self.points <= other.points

    def __le__(self, other: "Event") -> bool:
        return self.issubset(other)

    def __bool__(self) -> bool:
        return bool(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point: tuple[str, int]) -> bool:
        h, t = point
        return self.frame.point(h, t) in self.points

    def as_pairs(self) -> list[tuple[str, int]]:
        return sorted(self.frame.locate(p) for p in self.points)

    def __repr__(self):
        return f"Event({sorted(self.points)})"


# -- event algebra dispatch ----------------------------------------------------

_ALGEBRA_ARITY = {
    "complement": 1,
    "implies": 2,
    "intersect": 2,
    "union": 2,
    "difference": 2,
}


def event_algebra(op: str, *operands: Event) -> Event:
    """Apply a named set operation; arity and frame binding are checked."""
    if op not in _ALGEBRA_ARITY:
        raise FrameError(f"unknown event operation {op!r}")
    if len(operands) != _ALGEBRA_ARITY[op]:
        raise FrameError(
            f"{op} expects {_ALGEBRA_ARITY[op]} operand(s), got {len(operands)}"
        )
    if op == "complement":
        return operands[0].complement()
    return getattr(operands[0], op)(operands[1])


# -- knowledge ------------------------------------------------------------------


def knows(player: str, phi: Event) -> Event:
    """Points at which the player's ken is wholly contained in phi."""
    frame = phi.frame
    frame._check_player(player)
    pts = phi.points
    out: list[int] = []
    for ken in frame.kens(player):
        if pts.issuperset(ken):
            out.extend(ken)
    return Event(frame, frozenset(out))


def is_local(player: str, phi: Event) -> bool:
    """True iff phi equals knows(player, phi), i.e. phi is a union of kens."""
    frame = phi.frame
    frame._check_player(player)
    pts = phi.points
    part = frame._partitions[player]
    kens = frame.kens(player)
    seen: set[int] = set()
    for p in pts:
        k = part[p]
        if k in seen:
            continue
        seen.add(k)
        if not pts.issuperset(kens[k]):
            return False
    return True


def everyone_knows(players: Iterable[str], phi: Event) -> Event:
    """Intersection of knows(i, phi) over the given players."""
    players = tuple(players)
    if not players:
        raise FrameError("everyone_knows requires a nonempty player set")
    result = knows(players[0], phi)
    for i in players[1:]:
        result = result & knows(i, phi)
    return result


def ck_traditional_layers(players: Iterable[str], phi: Event) -> list[Event]:
    """The decreasing chain E^1 phi, E^2 phi, ... up to its fixed point."""
    players = tuple(players)
    if not players:
        raise FrameError("ck_traditional requires a nonempty player set")
    frame = phi.frame
    bound = sum(len(frame.kens(i)) for i in players) + 1
    layers = [everyone_knows(players, phi)]
    for _ in range(bound):
        nxt = everyone_knows(players, layers[-1])
        if nxt.points == layers[-1].points:
            return layers
        layers.append(nxt)
    raise AssertionError("common-knowledge iteration failed to stabilize in bound")


def ck_traditional(players: Iterable[str], phi: Event) -> Event:
    """Greatest subset of phi that is local to every given player.

    Computed by iterated elimination: apply "everyone knows" until the
    event stops shrinking.  The chain is monotone decreasing, so the last
    layer equals the infinite intersection of all layers.
    """
    return ck_traditional_layers(players, phi)[-1]


# -- temporal structure -----------------------------------------------------------


def histories_of(phi: Event) -> frozenset[str]:
    """The histories during which phi occurs at least once."""
    frame = phi.frame
    return frozenset(frame.histories[p // frame.horizon] for p in phi.points)


def box(phi: Event) -> Event:
    """Union of the full history columns contained in phi."""
    frame = phi.frame
    pts = phi.points
    out: set[int] = set()
    for col in frame._columns:
        if pts.issuperset(col):
            out |= col
    return Event(frame, frozenset(out))


def diamond(phi: Event) -> Event:
    """All points of every history during which phi occurs."""
    frame = phi.frame
    out: set[int] = set()
    seen: set[int] = set()
    for p in phi.points:
        h = p // frame.horizon
        if h not in seen:
            seen.add(h)
            out |= frame._columns[h]
    return Event(frame, frozenset(out))


def is_time_invariant(phi: Event) -> bool:
    """True iff phi is a union of full history columns."""
    return phi.points == diamond(phi).points


def is_singular(phi: Event) -> bool:
    """True iff phi holds at most once in any history."""
    frame = phi.frame
    seen: set[int] = set()
    for p in phi.points:
        h = p // frame.horizon
        if h in seen:
            return False
        seen.add(h)
    return True
