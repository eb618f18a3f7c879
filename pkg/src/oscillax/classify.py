"""Total nonnegativity, total positivity, and oscillatory classification.

The baseline tests scan every minor of every order (exponential, guarded
by a feasibility cap).  Cheaper criteria (corner minors, tridiagonal
entries, irreducibility, factorization support) are separate operations
so their equivalence with the baseline is testable rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import MethodDisagreement, NotTN, ShapeMismatch
from .matrix import (
    IndexSet,
    Matrix,
    check_scan_cap,
    det,
    mat_pow,
    minor,
    minor_levels,
)

_ZERO = Fraction(0)

OSCILLATORY_METHODS = ("definition", "gk", "irreducible", "seb")


class MinorWitness(NamedTuple):
    """A decisive minor: (row set, column set, exact value)."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    value: Fraction


class ScanVerdict(NamedTuple):
    ok: bool
    witness: MinorWitness | None


class CornerSpec(NamedTuple):
    """Corner minor selector: side is 'lower-left' or 'upper-right'."""

    side: str
    size: int


def _require_min_shape(a: Matrix) -> None:
    if a.rows < 2 or a.cols < 2:
        raise ShapeMismatch("classification requires at least a 2x2 matrix")


def is_tn(a: Matrix, cap: int | None = None) -> ScanVerdict:
    """Full minor scan for total nonnegativity.

    On failure the witness is the lexicographically first negative minor
    (orders ascending, then row subset, then column subset).
    """
    _require_min_shape(a)
    check_scan_cap(a, cap)
    for _, table in minor_levels(a):
        for (rset, cset), value in table.items():
            if value < 0:
                return ScanVerdict(False, MinorWitness(rset, cset, value))
    return ScanVerdict(True, None)


def is_tp(a: Matrix, cap: int | None = None) -> ScanVerdict:
    """Full minor scan for total positivity of a square matrix."""
    if not a.is_square():
        raise ShapeMismatch("total positivity test requires a square matrix")
    _require_min_shape(a)
    check_scan_cap(a, cap)
    for _, table in minor_levels(a):
        for (rset, cset), value in table.items():
            if value <= 0:
                return ScanVerdict(False, MinorWitness(rset, cset, value))
    return ScanVerdict(True, None)


def corner_index_sets(n: int, side: str, size: int) -> tuple[IndexSet, IndexSet]:
    """Row and column sets of the corner minor of the given side and size."""
    rows_ll = tuple(range(n - size + 1, n + 1))
    cols_ll = tuple(range(1, size + 1))
    if side == "lower-left":
        return IndexSet(rows_ll), IndexSet(cols_ll)
    if side == "upper-right":
        return IndexSet(cols_ll), IndexSet(rows_ll)
    raise ValueError(f"unknown corner side {side!r}")


def corner_minors(a: Matrix) -> tuple[tuple[CornerSpec, Fraction], ...]:
    """All 2n-1 distinct corner minors.

    Lower-left minors of sizes 1..n come first (size n is det(A), listed
    once), followed by upper-right minors of sizes 1..n-1.
    """
    if not a.is_square():
        raise ShapeMismatch("corner minors require a square matrix")
    _require_min_shape(a)
    n = a.rows
    out = []
    for size in range(1, n + 1):
        rset, cset = corner_index_sets(n, "lower-left", size)
        out.append((CornerSpec("lower-left", size), minor(a, rset, cset)))
    for size in range(1, n):
        rset, cset = corner_index_sets(n, "upper-right", size)
        out.append((CornerSpec("upper-right", size), minor(a, rset, cset)))
    return tuple(out)


def is_tp_given_tn(a: Matrix, verify: bool = False, cap: int | None = None) -> bool:
    """Corner-minor shortcut for total positivity, valid on TN inputs.

    With ``verify=True`` the TN precondition is checked and a failure
    raises :class:`NotTN`.
    """
    if verify:
        verdict = is_tn(a, cap)
        if not verdict.ok:
            raise NotTN(f"negative minor {verdict.witness}")
    return all(value > 0 for _, value in corner_minors(a))


def is_irreducible(a: Matrix) -> bool:
    """Strong connectivity of the digraph with an arc i -> j iff a_ij != 0."""
    if not a.is_square():
        raise ShapeMismatch("irreducibility requires a square matrix")
    n = a.rows

    def reaches_all(start: int, transposed: bool) -> bool:
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in range(n):
                if v in seen:
                    continue
                entry = a[v, u] if transposed else a[u, v]
                if entry != 0:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == n

    return reaches_all(0, False) and reaches_all(0, True)


def _oscillatory_by_method(a: Matrix, method: str, cap: int | None) -> bool:
    n = a.rows
    if method == "seb":
        from .seb import FactorizationClass, classify_factorization, neville_factorize
        from .errors import NotITN

        try:
            f = neville_factorize(a)
        except NotITN:
            return False
        return classify_factorization(f) in (
            FactorizationClass.TP,
            FactorizationClass.BASIC_OSCILLATORY,
            FactorizationClass.OSCILLATORY,
        )
    if not is_tn(a, cap).ok:
        return False
    if method == "definition":
        power = a
        for _ in range(n - 1):
            if is_tp(power, cap).ok:
                return True
            power = power @ a
        return False
    if det(a) == 0:
        return False
    if method == "gk":
        return all(a[i, i + 1] > 0 and a[i + 1, i] > 0 for i in range(n - 1))
    if method == "irreducible":
        return is_irreducible(a)
    raise ValueError(f"unknown oscillatory method {method!r}")


def is_oscillatory(a: Matrix, method: str = "all", cap: int | None = None) -> bool:
    """Oscillatory test by any of four equivalent criteria.

    ``definition`` looks for a totally positive power (up to n-1, which
    suffices), ``gk`` checks super/subdiagonal positivity of a nonsingular
    TN matrix, ``irreducible`` checks strong connectivity, and ``seb``
    checks factorization support.  ``all`` evaluates every criterion and
    raises :class:`MethodDisagreement` if they differ, which would signal
    an implementation bug.
    """
    if not a.is_square():
        raise ShapeMismatch("oscillatory test requires a square matrix")
    _require_min_shape(a)
    if method != "all":
        return _oscillatory_by_method(a, method, cap)
    verdicts = {m: _oscillatory_by_method(a, m, cap) for m in OSCILLATORY_METHODS}
    values = set(verdicts.values())
    if len(values) > 1:
        raise MethodDisagreement(f"criteria disagree: {verdicts}")
    return values.pop()


@dataclass(frozen=True)
class ClassificationReport:
    """Combined verdicts with the decisive minors that produced them."""

    n: int
    is_tn: bool
    is_invertible: bool
    is_tp: bool
    is_oscillatory: bool
    is_basic_oscillatory: bool | None
    tn_witness: MinorWitness | None
    tp_witness: MinorWitness | None

    def to_json_dict(self) -> dict:
        from .rational import format_rational

        def wit(w: MinorWitness | None):
            if w is None:
                return None
            return {
                "rows": list(w.rows),
                "cols": list(w.cols),
                "value": format_rational(w.value),
            }

        return {
            "n": self.n,
            "is_tn": self.is_tn,
            "is_invertible": self.is_invertible,
            "is_tp": self.is_tp,
            "is_oscillatory": self.is_oscillatory,
            "is_basic_oscillatory": self.is_basic_oscillatory,
            "witnesses": {"tn": wit(self.tn_witness), "tp": wit(self.tp_witness)},
        }


def classify(a: Matrix, cap: int | None = None) -> ClassificationReport:
    """Produce the full classification report for a square matrix."""
    if not a.is_square():
        raise ShapeMismatch("classification requires a square matrix")
    _require_min_shape(a)
    tn = is_tn(a, cap)
    tp = is_tp(a, cap)
    invertible = det(a) != 0
    oscillatory = is_oscillatory(a, "all", cap)
    basic: bool | None = None
    if tn.ok and invertible:
        from .seb import is_basic_factorization, neville_factorize

        basic = is_basic_factorization(neville_factorize(a))
    return ClassificationReport(
        n=a.rows,
        is_tn=tn.ok,
        is_invertible=invertible,
        is_tp=tp.ok,
        is_oscillatory=oscillatory,
        is_basic_oscillatory=basic,
        tn_witness=tn.witness,
        tp_witness=tp.witness,
    )


def first_zero_corner(a: Matrix) -> CornerSpec | None:
    """First vanishing corner minor, scanning sizes 1..n-1, lower-left
    before upper-right within each size.  None if all are positive."""
    n = a.rows
    for size in range(1, n):
        for side in ("lower-left", "upper-right"):
            rset, cset = corner_index_sets(n, side, size)
            if minor(a, rset, cset) == 0:
                return CornerSpec(side, size)
    return None


def power_is_tp(a: Matrix, k: int, cap: int | None = None) -> bool:
    return is_tp(mat_pow(a, k), cap).ok
