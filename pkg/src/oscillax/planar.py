"""Layered planar networks whose disjoint-path weights are matrix minors.

A network has n horizontal tracks, numbered 1 (bottom) to n (top), and a
sequence of layers read left to right.  Every layer carries an implicit
weight-one horizontal edge on each track; a ``down`` layer adds one
diagonal from track i to track i-1, an ``up`` layer one from i-1 to i,
and a ``scale`` layer reweights the horizontals by a positive diagonal.

The weight of a family of vertex-disjoint source-to-sink paths is the
product of its edge weights; summed over all families it equals the
corresponding minor of the composed matrix.  Minor evaluation sweeps the
layers with a dynamic program over occupied track subsets, which encodes
vertex-disjointness exactly: no two paths may share a track at any layer
boundary.  Explicit family enumeration is also provided for small cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    FeasibilityExceeded,
    InvariantViolation,
    ParamOutOfRange,
    ShapeMismatch,
    TrackMismatch,
)
from .matrix import IndexSet, SCAN_CAP_DEFAULT
from .rational import coerce_rational, format_rational
from .seb import SEBFactorization

_ZERO = Fraction(0)
_ONE = Fraction(1)

INFINITE_COPIES = float("inf")


@dataclass(frozen=True)
class Layer:
    """One elementary diagram: kind 'down', 'up', or 'scale'."""

    kind: str
    index: int | None = None
    weight: Fraction | None = None
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.kind in ("down", "up"):
            if self.index is None or self.weight is None:
                raise ValueError("diagonal layers need an index and a weight")
            object.__setattr__(self, "weight", coerce_rational(self.weight))
        elif self.kind == "scale":
            if self.weights is None:
                raise ValueError("scale layers need per-track weights")
            object.__setattr__(
                self, "weights", tuple(coerce_rational(x) for x in self.weights)
            )
        else:
            raise ValueError(f"unknown layer kind {self.kind!r}")


@dataclass(frozen=True)
class PlanarNetwork:
    n: int
    layers: tuple[Layer, ...]


@dataclass(frozen=True)
class PathFamily:
    """Vertex-disjoint paths, each recorded as its track at every boundary."""

    paths: tuple[tuple[int, ...], ...]
    weight: Fraction


def build_network(f: SEBFactorization) -> PlanarNetwork:
    """Concatenate the elementary diagrams of a factorization in order.

    Factors with zero multiplier are identities and contribute no layer;
    the diagonal always contributes its scale layer.
    """
    n = f.n
    layers: list[Layer] = []
    for fac in f.factor_sequence():
        if fac.kind == "L":
            layers.append(Layer("down", index=fac.index, weight=fac.multiplier))
        elif fac.kind == "U":
            layers.append(Layer("up", index=fac.index, weight=fac.multiplier))
        else:
            layers.append(Layer("scale", weights=fac.diag))
    return PlanarNetwork(n=n, layers=tuple(layers))


def concat(net1: PlanarNetwork, net2: PlanarNetwork) -> PlanarNetwork:
    if net1.n != net2.n:
        raise TrackMismatch(f"track counts differ: {net1.n} vs {net2.n}")
    return PlanarNetwork(n=net1.n, layers=net1.layers + net2.layers)


def concat_copies(net: PlanarNetwork, copies: int) -> PlanarNetwork:
    if copies < 1:
        raise ParamOutOfRange("copies must be >= 1")
    return PlanarNetwork(n=net.n, layers=net.layers * copies)


def strip_u_diagonals(net: PlanarNetwork) -> PlanarNetwork:
    """Drop every upward diagonal; up layers become identities and vanish."""
    return PlanarNetwork(
        n=net.n, layers=tuple(l for l in net.layers if l.kind != "up")
    )


def _check_tracks(net: PlanarNetwork, sources: IndexSet, sinks: IndexSet) -> None:
    if len(sources) != len(sinks):
        raise ShapeMismatch("sources and sinks must have equal cardinality")
    sources.check_range(net.n, "source")
    sinks.check_range(net.n, "sink")


def minor_via_paths(
    net: PlanarNetwork, sources, sinks, cap: int | None = None
) -> Fraction:
    """Sum of vertex-disjoint family weights from sources to sinks.

    Equals the minor of the composed matrix on the same index sets.
    """
    src = IndexSet.coerce(sources)
    snk = IndexSet.coerce(sinks)
    _check_tracks(net, src, snk)
    limit = SCAN_CAP_DEFAULT if cap is None else cap
    if net.n > limit:
        raise FeasibilityExceeded(f"path sweep over {net.n} tracks exceeds cap {limit}")

    dp: dict[tuple[int, ...], Fraction] = {src.indices: _ONE}
    for layer in net.layers:
        ndp: dict[tuple[int, ...], Fraction] = {}
        if layer.kind == "scale":
            w = layer.weights
            for state, acc in dp.items():
                factor = _ONE
                for t in state:
                    factor *= w[t - 1]
                ndp[state] = ndp.get(state, _ZERO) + acc * factor
        else:
            i = layer.index
            down = layer.kind == "down"
            src_track = i if down else i - 1
            dst_track = i - 1 if down else i
            for state, acc in dp.items():
                ndp[state] = ndp.get(state, _ZERO) + acc
                if src_track in state and dst_track not in state:
                    moved = tuple(
                        sorted(dst_track if t == src_track else t for t in state)
                    )
                    ndp[moved] = ndp.get(moved, _ZERO) + acc * layer.weight
        dp = ndp
    return dp.get(snk.indices, _ZERO)


def enumerate_path_families(
    net: PlanarNetwork, sources, sinks, cap: int = 5
) -> tuple[PathFamily, ...]:
    """Explicitly list every vertex-disjoint family (small networks only).

    Disjoint paths in these layered diagrams never cross, so each family
    is recorded with paths sorted by source track.
    """
    src = IndexSet.coerce(sources)
    snk = IndexSet.coerce(sinks)
    _check_tracks(net, src, snk)
    if net.n > cap:
        raise FeasibilityExceeded(f"enumeration over {net.n} tracks exceeds cap {cap}")

    families: list[PathFamily] = []
    k = len(src)
    trajectory = [list(src.indices)]

    def advance(depth: int, positions: tuple[int, ...], weight: Fraction):
        if depth == len(net.layers):
            if positions == snk.indices:
                paths = tuple(
                    tuple(step[t] for step in trajectory) for t in range(k)
                )
                families.append(PathFamily(paths=paths, weight=weight))
            return
        layer = net.layers[depth]
        moves: list[tuple[tuple[int, ...], Fraction]] = [(positions, _ONE)]
        if layer.kind == "scale":
            factor = _ONE
            for t in positions:
                factor *= layer.weights[t - 1]
            moves = [(positions, factor)]
        else:
            i = layer.index
            down = layer.kind == "down"
            src_track = i if down else i - 1
            dst_track = i - 1 if down else i
            if src_track in positions and dst_track not in positions:
                moved = tuple(
                    dst_track if t == src_track else t for t in positions
                )
                moved = tuple(sorted(moved))
                moves.append((moved, layer.weight))
        for nxt, factor in moves:
            trajectory.append(list(nxt))
            advance(depth + 1, nxt, weight * factor)
            trajectory.pop()

    advance(0, src.indices, _ONE)
    return tuple(families)


def lower_corner_tracks(n: int, c: int) -> tuple[IndexSet, IndexSet]:
    """Sources {n-c+1..n} and sinks {1..c} of the size-c lower-left corner."""
    if not 1 <= c <= n - 1:
        raise ParamOutOfRange(f"corner size {c} outside [1, {n - 1}]")
    return IndexSet(tuple(range(n - c + 1, n + 1))), IndexSet(tuple(range(1, c + 1)))


def min_copies_lower_corner(net: PlanarNetwork, c: int):
    """Minimal number of concatenated copies admitting a disjoint family
    from the lower-left corner's sources to its sinks.

    Returns infinity when some track level has no downward diagonal at
    all, since no number of copies can produce the required descents.
    A finite answer never exceeds n-1; running past that bound would
    contradict the power bound for oscillatory matrices and raises
    :class:`InvariantViolation`.
    """
    n = net.n
    sources, sinks = lower_corner_tracks(n, c)
    down_levels = {l.index for l in net.layers if l.kind == "down"}
    if not set(range(2, n + 1)) <= down_levels:
        return INFINITE_COPIES
    for copies in range(1, n):
        if minor_via_paths(concat_copies(net, copies), sources, sinks) > 0:
            return copies
    raise InvariantViolation(
        f"no disjoint family for corner size {c} within {n - 1} copies"
    )


# -- serialization ------------------------------------------------------------


def network_to_json_dict(net: PlanarNetwork) -> dict:
    layers = []
    for layer in net.layers:
        if layer.kind == "scale":
            layers.append(
                {"diag": "horizontal", "d": [format_rational(x) for x in layer.weights]}
            )
        else:
            layers.append(
                {
                    "diag": layer.kind,
                    "i": layer.index,
                    "w": format_rational(layer.weight),
                }
            )
    return {"n": net.n, "layers": layers}


def export_dot(net: PlanarNetwork) -> str:
    """Deterministic Graphviz rendering: nodes ``c{layer}_t{track}``,
    tracks bottom-to-top, unit weights unlabeled."""
    n = net.n
    cols = len(net.layers) + 1
    lines = [
        "digraph planar_network {",
        "  rankdir=LR;",
        "  node [shape=point, width=0.06];",
    ]
    for col in range(cols):
        names = "; ".join(f"c{col}_t{t}" for t in range(1, n + 1))
        lines.append(f"  {{ rank=same; {names}; }}")
    for col, layer in enumerate(net.layers):
        for t in range(1, n + 1):
            label = ""
            if layer.kind == "scale" and layer.weights[t - 1] != 1:
                label = f' [label="{format_rational(layer.weights[t - 1])}"]'
            lines.append(f"  c{col}_t{t} -> c{col + 1}_t{t}{label};")
        if layer.kind in ("down", "up"):
            i = layer.index
            src = i if layer.kind == "down" else i - 1
            dst = i - 1 if layer.kind == "down" else i
            label = ""
            if layer.weight != 1:
                label = f' [label="{format_rational(layer.weight)}"]'
            lines.append(f"  c{col}_t{src} -> c{col + 1}_t{dst}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"
