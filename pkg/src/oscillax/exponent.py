"""Exponents of oscillatory matrices: brute force, decoupling, formulas.

The exponent r(A) is the least power at which every minor turns
positive.  It always equals max(r_lower, r_upper), where r_lower
(r_upper) is the least power making all lower-left (upper-right) corner
minors positive, and each side depends only on its own triangular part
of the factorization.  Two parametrized factorization shapes admit
closed forms for the lower exponent:

* Z1(s): full descending chains W_2 .. W_s, giving ceil((n-1)/(s-1));
* Z2(s): single factors L_2 .. L_{s-2}, a partial chain containing
  L_{s-1}, then full chains W_s .. W_n, giving s-1.

Recognition works on the positivity pattern of the canonical flat
multipliers only; multiplier values never matter for these results.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .classify import (
    corner_index_sets,
    first_zero_corner,
    is_oscillatory,
    is_tp,
)
from .errors import (
    ClassMismatch,
    InvalidPsiPattern,
    InvariantViolation,
    NotITN,
    NotOscillatory,
    ParamOutOfRange,
    Unpredictable,
)
from .matrix import Matrix, mat_mul, mat_pow, minor
from .planar import PlanarNetwork, build_network, min_copies_lower_corner
from .seb import (
    EBFactor,
    SEBFactorization,
    compose,
    ebl,
    flat_slot,
    multiplier_count,
    neville_factorize,
    upper_flat_slot,
    x_offset,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


# -- closed forms --------------------------------------------------------------


def _check_class_params(n: int, s: int) -> None:
    if n < 2:
        raise ParamOutOfRange(f"dimension {n} must be at least 2")
    if not 2 <= s <= n:
        raise ParamOutOfRange(f"parameter s={s} outside [2, {n}]")


def mu1(n: int, s: int) -> int:
    """Lower exponent of the Z1(s) shape: ceil((n-1)/(s-1))."""
    _check_class_params(n, s)
    return -((n - 1) // -(s - 1))


def mu2(n: int, s: int) -> int:
    """Lower exponent of the Z2(s) shape: s-1."""
    _check_class_params(n, s)
    return s - 1


def psi_membership(pattern, i: int) -> bool:
    """Partial-chain test for a chain-i multiplier vector.

    True when the chain's own factor (last slot) is positive and at
    least one higher slot is zero.
    """
    vec = tuple(pattern)
    if len(vec) < 1:
        raise ParamOutOfRange("empty chain vector")
    if i < 2:
        raise ParamOutOfRange(f"chain index {i} must be at least 2")
    return vec[-1] > 0 and any(x == 0 for x in vec[:-1])


# -- flat-vector helpers --------------------------------------------------------


def n_from_flat(flat) -> int:
    k = len(flat)
    n = int((1 + (1 + 8 * k) ** 0.5) / 2)
    if multiplier_count(n) != k:
        raise ParamOutOfRange(f"length {k} is not a triangular number")
    return n


def slot_chain_factor(pos: int, n: int) -> tuple[int, int]:
    """Invert the flat layout: position -> (chain i, factor index j)."""
    for i in range(2, n + 1):
        start = x_offset(i, n) - 1
        width = n - i + 1
        if start <= pos < start + width:
            return i, n - (pos - start)
    raise ParamOutOfRange(f"slot {pos} outside flat vector for n={n}")


def mirror_flat(flat, n: int | None = None) -> tuple[Fraction, ...]:
    """Reverse every chain slice; converts between the lower flat layout
    of a product and the upper flat layout of its transpose."""
    flat = tuple(flat)
    if n is None:
        n = n_from_flat(flat)
    out = list(flat)
    for i in range(2, n + 1):
        x = x_offset(i, n) - 1
        width = n - i + 1
        out[x : x + width] = list(flat[x : x + width])[::-1]
    return tuple(out)


def lower_part(f: SEBFactorization) -> SEBFactorization:
    k = multiplier_count(f.n)
    return SEBFactorization(f.n, f.l, (_ONE,) * f.n, (_ZERO,) * k)


def upper_part(f: SEBFactorization) -> SEBFactorization:
    k = multiplier_count(f.n)
    return SEBFactorization(f.n, (_ZERO,) * k, (_ONE,) * f.n, f.u)


def with_transpose(lpart: SEBFactorization, d=None) -> SEBFactorization:
    """Pair a lower part with its mirrored upper part and a diagonal,
    composing to (lower) D (lower transposed)."""
    dd = tuple(d) if d is not None else (_ONE,) * lpart.n
    return SEBFactorization(lpart.n, lpart.l, dd, mirror_flat(lpart.l, lpart.n))


# -- class generators -----------------------------------------------------------


def _fill_slots(n: int, slots, rng: random.Random) -> tuple[Fraction, ...]:
    flat = [_ZERO] * multiplier_count(n)
    for pos in sorted(slots):
        flat[pos] = Fraction(rng.randint(1, 9))
    return tuple(flat)


def z1_slots(n: int, s: int) -> frozenset[int]:
    _check_class_params(n, s)
    out = set()
    for i in range(2, s + 1):
        for j in range(i, n + 1):
            out.add(flat_slot(i, j, n))
    return frozenset(out)


def z2_slots(n: int, s: int, psi: frozenset[int] | None) -> frozenset[int]:
    _check_class_params(n, s)
    out = set()
    if s == 2:
        if psi:
            raise InvalidPsiPattern("s=2 admits no partial chain")
        return z1_slots(n, n)
    optional = set(range(s, n + 1))
    psi = frozenset() if psi is None else frozenset(psi)
    if not psi <= optional:
        raise InvalidPsiPattern(f"pattern {sorted(psi)} not within {sorted(optional)}")
    if psi == optional:
        raise InvalidPsiPattern("pattern must omit at least one optional factor")
    for i in range(2, s - 1):
        out.add(flat_slot(i, i, n))
    out.add(flat_slot(s - 1, s - 1, n))
    for j in psi:
        out.add(flat_slot(s - 1, j, n))
    for i in range(s, n + 1):
        for j in range(i, n + 1):
            out.add(flat_slot(i, j, n))
    return frozenset(out)


def enumerate_psi_patterns(n: int, s: int) -> tuple[frozenset[int] | None, ...]:
    """Admissible partial-chain patterns for Z2(s), deterministically ordered.

    For s=2 the class has a single shape and the only 'pattern' is None.
    """
    _check_class_params(n, s)
    if s == 2:
        return (None,)
    optional = sorted(range(s, n + 1))
    out = []
    for mask in range(2 ** len(optional) - 1):
        out.append(frozenset(optional[t] for t in range(len(optional)) if mask >> t & 1))
    return tuple(out)


def generate_z1(n: int, s: int, seed: int) -> SEBFactorization:
    """Seeded lower part with full chains W_2 .. W_s, multipliers in 1..9."""
    rng = random.Random(seed)
    slots = z1_slots(n, s)
    return SEBFactorization(
        n, _fill_slots(n, slots, rng), (_ONE,) * n, (_ZERO,) * multiplier_count(n)
    )


def resolve_psi_choice(n: int, s: int, psi_choice, rng: random.Random):
    """Interpret a partial-chain choice for Z2(s).

    Accepts ``None`` (lone L_{s-1} for s >= 3, nothing for s = 2), the
    string ``"random"``, or an iterable of factor indices for the chosen
    product, which must contain s-1.
    """
    if s == 2:
        if psi_choice not in (None, "random") and set(psi_choice or ()) != set():
            raise InvalidPsiPattern("s=2 admits no partial chain")
        return None
    optional = sorted(range(s, n + 1))
    if psi_choice is None:
        return frozenset()
    if psi_choice == "random":
        patterns = enumerate_psi_patterns(n, s)
        return patterns[rng.randrange(len(patterns))]
    try:
        members = {int(x) for x in psi_choice}
    except (TypeError, ValueError) as exc:
        raise InvalidPsiPattern(f"cannot read pattern {psi_choice!r}") from exc
    if s - 1 not in members:
        raise InvalidPsiPattern(f"partial chain must contain factor {s - 1}")
    return frozenset(members - {s - 1})


def generate_z2(n: int, s: int, psi_choice, seed: int) -> SEBFactorization:
    """Seeded lower part in the Z2(s) shape for the given partial chain."""
    rng = random.Random(seed)
    pattern = resolve_psi_choice(n, s, psi_choice, rng)
    slots = z2_slots(n, s, pattern)
    return SEBFactorization(
        n, _fill_slots(n, slots, rng), (_ONE,) * n, (_ZERO,) * multiplier_count(n)
    )


def random_oscillatory_factorization(
    n: int, rng: random.Random, density: float = 0.55
) -> SEBFactorization:
    """Random factorization with every factor index hit on both sides,
    hence composing to an oscillatory matrix."""
    k = multiplier_count(n)

    def side(slot_of) -> tuple[Fraction, ...]:
        flat = [_ZERO] * k
        for pos in range(k):
            if rng.random() < density:
                flat[pos] = Fraction(rng.randint(1, 9))
        for j in range(2, n + 1):
            slots = [slot_of(i, j) for i in range(2, j + 1)]
            if all(flat[p] == 0 for p in slots):
                flat[slots[rng.randrange(len(slots))]] = Fraction(rng.randint(1, 9))
        return tuple(flat)

    l_flat = side(lambda i, j: flat_slot(i, j, n))
    u_flat = side(lambda i, j: upper_flat_slot(i, j, n))
    d = tuple(Fraction(rng.randint(1, 4)) for _ in range(n))
    return SEBFactorization(n, l_flat, d, u_flat)


# -- class recognition -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class ClassMatch:
    """One class shape: family 'Z1' or 'Z2', parameter s, partial chain."""

    family: str
    s: int
    psi: tuple[int, ...] | None

    def mu(self, n: int) -> int:
        return mu1(n, self.s) if self.family == "Z1" else mu2(n, self.s)

    def label(self) -> str:
        return f"{self.family}({self.s})"


@dataclass(frozen=True)
class ClassTag:
    """Recognition result for one triangular side of a factorization."""

    n: int
    family: str
    s: int | None
    psi_pattern: tuple[int, ...] | None
    extras: tuple[EBFactor, ...]
    exact: tuple[ClassMatch, ...]
    with_extras: tuple[tuple[ClassMatch, tuple[EBFactor, ...]], ...]

    @property
    def is_pure(self) -> bool:
        return bool(self.exact)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "s": self.s,
            "psi": list(self.psi_pattern) if self.psi_pattern is not None else None,
            "extras": [str(x) for x in self.extras],
            "exact": [m.label() for m in self.exact],
            "with_extras": [
                {"base": m.label(), "extras": [str(x) for x in extras]}
                for m, extras in self.with_extras
            ],
        }


@lru_cache(maxsize=None)
def _class_support_catalog(n: int) -> dict[frozenset[int], tuple[ClassMatch, ...]]:
    """Canonical-support table for every class shape at dimension n.

    Each shape is instantiated with unit multipliers, composed, and
    refactorized; the support of the canonical flat vector depends only
    on the shape, not on the multiplier values.
    """
    catalog: dict[frozenset[int], list[ClassMatch]] = {}

    def add(slots: frozenset[int], match: ClassMatch):
        flat = [_ZERO] * multiplier_count(n)
        for pos in slots:
            flat[pos] = _ONE
        part = SEBFactorization(
            n, tuple(flat), (_ONE,) * n, (_ZERO,) * multiplier_count(n)
        )
        canon = neville_factorize(compose(part))
        support = frozenset(p for p, v in enumerate(canon.l) if v > 0)
        catalog.setdefault(support, []).append(match)

    for s in range(2, n + 1):
        add(z1_slots(n, s), ClassMatch("Z1", s, None))
    for s in range(2, n + 1):
        for psi in enumerate_psi_patterns(n, s):
            key = None if psi is None else tuple(sorted(psi))
            add(z2_slots(n, s, psi), ClassMatch("Z2", s, key))
    # distinct shapes sharing one canonical support describe the same
    # matrices, so their formula values must coincide
    for supp, ms in catalog.items():
        values = {m.mu(n) for m in ms}
        if len(values) != 1:
            raise InvariantViolation(
                f"classes {ms} share a support but disagree on the formula"
            )
    return {supp: tuple(sorted(ms)) for supp, ms in catalog.items()}


def recognize_class(l_part_multipliers, n: int | None = None) -> ClassTag:
    """Tag a flat lower multiplier vector with its class memberships.

    The vector is first refactorized into canonical coordinates; the
    positivity pattern is then matched against the catalog of class
    supports.  A strict superset of a class support yields a
    'plus-extra' tag carrying the surplus factors.
    """
    flat = tuple(l_part_multipliers)
    if n is None:
        n = n_from_flat(flat)
    part = SEBFactorization(n, flat, (_ONE,) * n, (_ZERO,) * multiplier_count(n))
    canon = neville_factorize(compose(part))
    support = frozenset(p for p, v in enumerate(canon.l) if v > 0)
    catalog = _class_support_catalog(n)

    exact = catalog.get(support, ())
    extra_matches: list[tuple[ClassMatch, tuple[EBFactor, ...]]] = []
    for supp, matches in catalog.items():
        if supp < support:
            extras = tuple(
                ebl(slot_chain_factor(p, n)[1], canon.l[p])
                for p in sorted(support - supp)
            )
            for m in matches:
                extra_matches.append((m, extras))
    extra_matches.sort(key=lambda pair: (len(pair[1]), pair[0]))

    if exact:
        primary = exact[0]
        return ClassTag(
            n=n,
            family=primary.family,
            s=primary.s,
            psi_pattern=primary.psi,
            extras=(),
            exact=exact,
            with_extras=tuple(extra_matches),
        )
    if extra_matches:
        base, extras = extra_matches[0]
        return ClassTag(
            n=n,
            family=f"{base.family}-plus-extra",
            s=base.s,
            psi_pattern=base.psi,
            extras=extras,
            exact=(),
            with_extras=tuple(extra_matches),
        )
    return ClassTag(
        n=n,
        family="unrecognized",
        s=None,
        psi_pattern=None,
        extras=(),
        exact=(),
        with_extras=(),
    )


def plus_extra_tag(n: int, base: ClassMatch, extras: tuple[EBFactor, ...]) -> ClassTag:
    """Build a tag that commits to a specific class-plus-extras framing."""
    return ClassTag(
        n=n,
        family=f"{base.family}-plus-extra",
        s=base.s,
        psi_pattern=base.psi,
        extras=extras,
        exact=(),
        with_extras=((base, extras),),
    )


@dataclass(frozen=True)
class Prediction:
    kind: str  # 'exact' or 'upper_bound'
    value: int

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value}


def predict_exponent(l_tag: ClassTag, u_tag: ClassTag) -> Prediction:
    """Closed-form exponent from class tags.

    Both tags pure gives the exact value; exactly one side carrying
    extra factors (the other pure) gives an upper bound.  Unrecognized
    tags, or extras on both sides, admit no prediction.
    """
    if l_tag.n != u_tag.n:
        raise ParamOutOfRange("tags describe different dimensions")
    n = l_tag.n
    if l_tag.family == "unrecognized" or u_tag.family == "unrecognized":
        raise Unpredictable("one of the tags is unrecognized")
    if l_tag.is_pure and u_tag.is_pure:
        values = {
            max(lm.mu(n), um.mu(n)) for lm in l_tag.exact for um in u_tag.exact
        }
        if len(values) != 1:
            raise InvariantViolation(f"exact predictions disagree: {sorted(values)}")
        return Prediction("exact", values.pop())
    if l_tag.is_pure and u_tag.with_extras:
        value = min(
            max(lm.mu(n), base.mu(n))
            for lm in l_tag.exact
            for base, _ in u_tag.with_extras
        )
        return Prediction("upper_bound", value)
    if u_tag.is_pure and l_tag.with_extras:
        value = min(
            max(um.mu(n), base.mu(n))
            for um in u_tag.exact
            for base, _ in l_tag.with_extras
        )
        return Prediction("upper_bound", value)
    raise Unpredictable("no closed form covers extras on both sides")


# -- exponent computation ---------------------------------------------------------


def _lower_corners_positive(a: Matrix) -> bool:
    n = a.rows
    for size in range(1, n):
        rset, cset = corner_index_sets(n, "lower-left", size)
        if minor(a, rset, cset) <= 0:
            return False
    return True


def r_lower(a: Matrix, max_power: int | None = None) -> int:
    """Least power making every lower-left corner minor (sizes 1..n-1)
    positive.  Defined for invertible TN inputs, including bare
    triangular parts; bounded by n-1 for anything oscillatory-shaped."""
    if not a.is_square():
        raise ParamOutOfRange("square matrix required")
    n = a.rows
    limit = n - 1 if max_power is None else max_power
    power = a
    for w in range(1, limit + 1):
        if _lower_corners_positive(power):
            return w
        if w < limit:
            power = mat_mul(power, a)
    raise NotOscillatory(
        f"lower-left corner minors not all positive within {limit} powers"
    )


def r_upper(a: Matrix, max_power: int | None = None) -> int:
    """Least power making every upper-right corner minor positive."""
    return r_lower(a.transpose(), max_power)


def r_lower_via_network(source) -> int:
    """Independent route to the lower exponent through copy counting on
    the planar network; agrees with the algebraic computation."""
    net = source if isinstance(source, PlanarNetwork) else build_network(source)
    n = net.n
    worst = 0
    for c in range(1, n):
        copies = min_copies_lower_corner(net, c)
        if copies == float("inf"):
            raise NotOscillatory(f"corner size {c} is never reachable")
        worst = max(worst, copies)
    return worst


@dataclass(frozen=True)
class CornerZeroWitness:
    """A corner minor that still vanishes at the given power."""

    side: str
    size: int
    power: int

    def to_json_dict(self) -> dict:
        return {"side": self.side, "size": self.size, "power": self.power}


@dataclass(frozen=True)
class ExponentReport:
    n: int
    r: int
    r_lower: int
    r_upper: int
    method: str
    l_class: ClassTag
    u_class: ClassTag
    witness_power: Matrix
    zero_witness: CornerZeroWitness | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "r_lower": self.r_lower,
            "r_upper": self.r_upper,
            "method": self.method,
            "l_class": self.l_class.to_json_dict(),
            "u_class": self.u_class.to_json_dict(),
            "witness_power": {
                "k": self.r,
                "entries": self.witness_power.to_lists(),
            },
            "zero_witness": (
                self.zero_witness.to_json_dict() if self.zero_witness else None
            ),
        }


def recognize_sides(f: SEBFactorization) -> tuple[ClassTag, ClassTag]:
    """Class tags of the lower part and of the transposed upper part."""
    return (
        recognize_class(f.l, f.n),
        recognize_class(mirror_flat(f.u, f.n), f.n),
    )


def _zero_corner_witness(a: Matrix, r: int) -> CornerZeroWitness | None:
    if r <= 1:
        return None
    corner = first_zero_corner(mat_pow(a, r - 1))
    if corner is None:
        raise InvariantViolation("no vanishing corner below the exponent")
    return CornerZeroWitness(side=corner.side, size=corner.size, power=r - 1)


def exponent_bruteforce(a: Matrix, cap: int | None = None) -> ExponentReport:
    """Scan powers 1..n-1 with the full minor test for total positivity."""
    if not is_oscillatory(a, "gk", cap):
        raise NotOscillatory("input is not oscillatory")
    n = a.rows
    r = None
    power = a
    witness_power = a
    for k in range(1, n):
        if is_tp(power, cap).ok:
            r = k
            witness_power = power
            break
        power = mat_mul(power, a)
    if r is None:
        raise InvariantViolation("no totally positive power within n-1")
    rl, ru = r_lower(a), r_upper(a)
    if r != max(rl, ru):
        raise InvariantViolation(
            f"full scan found r={r} but corner exponents give max({rl}, {ru})"
        )
    f = neville_factorize(a)
    l_tag, u_tag = recognize_sides(f)
    return ExponentReport(
        n=n,
        r=r,
        r_lower=rl,
        r_upper=ru,
        method="bruteforce",
        l_class=l_tag,
        u_class=u_tag,
        witness_power=witness_power,
        zero_witness=_zero_corner_witness(a, r),
    )


def exponent_via_theorem(a: Matrix) -> ExponentReport:
    """Factor the input, then take the max of the lower part's lower
    exponent and the upper part's upper exponent."""
    from .seb import FactorizationClass, classify_factorization

    try:
        f = neville_factorize(a)
    except NotITN as exc:
        raise NotOscillatory(f"not invertible TN: {exc}") from exc
    if classify_factorization(f) is FactorizationClass.ITN_ONLY:
        raise NotOscillatory("factorization misses a factor index on some side")
    rl = r_lower(compose(lower_part(f)))
    ru = r_upper(compose(upper_part(f)))
    r = max(rl, ru)
    l_tag, u_tag = recognize_sides(f)
    return ExponentReport(
        n=f.n,
        r=r,
        r_lower=rl,
        r_upper=ru,
        method="theorem",
        l_class=l_tag,
        u_class=u_tag,
        witness_power=mat_pow(a, r),
        zero_witness=_zero_corner_witness(a, r),
    )


def exponent_via_prediction(a: Matrix) -> tuple[Prediction, ClassTag, ClassTag]:
    """Recognize both sides of the factorization and predict the exponent."""
    try:
        f = neville_factorize(a)
    except NotITN as exc:
        raise NotOscillatory(f"not invertible TN: {exc}") from exc
    l_tag, u_tag = recognize_sides(f)
    return predict_exponent(l_tag, u_tag), l_tag, u_tag


# -- product families --------------------------------------------------------------


@dataclass(frozen=True)
class ProductFamilyResult:
    all_tp: bool
    mode: str  # 'exhaustive' or 'sampled'
    checked: int
    counterexample: tuple[int, ...] | None

    def to_json_dict(self) -> dict:
        return {
            "all_tp": self.all_tp,
            "mode": self.mode,
            "checked": self.checked,
            "counterexample": (
                list(self.counterexample) if self.counterexample else None
            ),
        }


def product_family_check(
    factorizations,
    k: int,
    sample_limit: int = 10_000,
    seed: int = 0,
    cap: int | None = None,
) -> ProductFamilyResult:
    """Are all ordered k-fold products of family members totally positive?

    Members must share lower-side and upper-side class tags.  All m^k
    ordered tuples are tested when that count stays within the sample
    limit; otherwise seeded random tuples are drawn and the result notes
    the sampling mode.
    """
    members = list(factorizations)
    if not members or k < 1:
        raise ParamOutOfRange("need at least one member and k >= 1")
    shared_l = None
    shared_u = None
    for f in members:
        l_tag, u_tag = recognize_sides(f)
        l_set, u_set = set(l_tag.exact), set(u_tag.exact)
        shared_l = l_set if shared_l is None else shared_l & l_set
        shared_u = u_set if shared_u is None else shared_u & u_set
    if not shared_l or not shared_u:
        raise ClassMismatch("members do not share pure class tags on both sides")

    mats = [compose(f) for f in members]
    m = len(members)
    total = m**k
    if total <= sample_limit:
        mode = "exhaustive"
        combos = itertools.product(range(m), repeat=k)
        count = total
    else:
        mode = "sampled"
        rng = random.Random(seed)
        combos = (
            tuple(rng.randrange(m) for _ in range(k)) for _ in range(sample_limit)
        )
        count = sample_limit
    for combo in combos:
        prod = mats[combo[0]]
        for idx in combo[1:]:
            prod = mat_mul(prod, mats[idx])
        if not is_tp(prod, cap).ok:
            return ProductFamilyResult(False, mode, count, tuple(combo))
    return ProductFamilyResult(True, mode, count, None)


def early_tp_product_scan(
    factorizations, k: int, cap: int | None = None
) -> tuple[tuple[int, ...], ...]:
    """Ordered k-products that are already totally positive although every
    member involved has exponent above k.  An exploration tool."""
    members = list(factorizations)
    if not members or k < 1:
        raise ParamOutOfRange("need at least one member and k >= 1")
    mats = [compose(f) for f in members]
    exps = [exponent_bruteforce(mat, cap).r for mat in mats]
    hits = []
    for combo in itertools.product(range(len(members)), repeat=k):
        if all(exps[i] > k for i in combo):
            prod = mats[combo[0]]
            for idx in combo[1:]:
                prod = mat_mul(prod, mats[idx])
            if is_tp(prod, cap).ok:
                hits.append(tuple(combo))
    return tuple(hits)
