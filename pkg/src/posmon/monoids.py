"""Finite descriptors for the monoid families of the gallery, with
membership and divisibility decision procedures.

Membership is exact (In/Out) wherever a decision procedure exists:
finitely generated monoids (bounded knapsack), conductive monoids and lex
cones (cone rule), the geometric monoid <q^n> (denominator descent), the
prime-reciprocal monoid <1/p> (residue decomposition), localized rays
Z[1/p]_{>=t}, their unions, and direct products.  The two families built
around an irrational basis element only admit bounded verdicts, reported
honestly as ``unknown`` rather than coerced to Out.

Descriptors are immutable; generator windows are memoized behind
``functools.lru_cache`` and all operations may be called concurrently.
Descriptors serialize to a canonical JSON form (family tag plus
parameters in the canonical element text forms).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Optional, Union

from .elements import (
    Group,
    GroupElement,
    GroupMismatch,
    Q,
    T,
    group_from_token,
    parse_element,
    rational,
    to_text,
    triple,
    zero,
)
from .primes import calkin_wilf, factorize, first_primes, is_prime, is_squarefree

DEFAULT_DEPTH = 12

IN, OUT, UNKNOWN = "in", "out", "unknown"


class UnsupportedFamily(ValueError):
    """Raised when an operation has no procedure for the given family."""


class NotAMember(ValueError):
    """Raised when an argument required to be a member is not one."""


# ---------------------------------------------------------------------------
# elements of product monoids


@dataclass(frozen=True)
class ProductElement:
    """A pair (left, right) of group elements, for Product descriptors."""

    left: GroupElement
    right: GroupElement

    def __add__(self, other: "ProductElement") -> "ProductElement":
        return ProductElement(self.left + other.left, self.right + other.right)

    def __sub__(self, other: "ProductElement") -> "ProductElement":
        return ProductElement(self.left - other.left, self.right - other.right)

    def __neg__(self) -> "ProductElement":
        return ProductElement(-self.left, -self.right)

    @property
    def is_zero(self) -> bool:
        return self.left.is_zero and self.right.is_zero

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


Element = Union[GroupElement, ProductElement]


# ---------------------------------------------------------------------------
# verdicts and windows


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a membership (or divisibility) query.

    An ``in`` verdict always carries a certificate: a tuple of
    (generator, coefficient) pairs whose replayed sum reproduces the
    element exactly.  ``unknown`` records the depth at which the bounded
    search stopped; it is never silently coerced to ``out``.
    """

    status: str
    certificate: Optional[tuple[tuple[Element, int], ...]] = None
    depth: Optional[int] = None

    @property
    def is_in(self) -> bool:
        return self.status == IN

    @property
    def is_out(self) -> bool:
        return self.status == OUT

    @property
    def is_unknown(self) -> bool:
        return self.status == UNKNOWN


def verdict_in(cert: tuple[tuple[Element, int], ...]) -> MembershipVerdict:
    return MembershipVerdict(IN, certificate=cert)


VERDICT_OUT = MembershipVerdict(OUT)


def replay_certificate(verdict: MembershipVerdict, zero_element: Element) -> Element:
    """Sum of coefficient * generator over the certificate."""
    if verdict.certificate is None:
        raise ValueError("verdict carries no certificate")
    total = zero_element
    for gen, coeff in verdict.certificate:
        if coeff < 0:
            raise ValueError("certificate coefficients must be nonnegative")
        if isinstance(gen, ProductElement):
            for _ in range(coeff):
                total = total + gen
        else:
            total = total + gen.scale(coeff)
    return total


@dataclass(frozen=True)
class GeneratorWindow:
    """A finite, deterministic, depth-monotone slice of a generating set."""

    descriptor: "MonoidDescriptor"
    depth: int
    generators: tuple[Element, ...]


# ---------------------------------------------------------------------------
# descriptors


class MonoidDescriptor:
    """Base class; all concrete families are frozen dataclasses."""

    family: str = "abstract"

    @property
    def group(self) -> Group:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.family


@dataclass(frozen=True)
class FiniteGenerated(MonoidDescriptor):
    """<g_1, ..., g_k> for finitely many positive generators."""

    generators: tuple[GroupElement, ...]
    family = "finite-generated"

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("need at least one generator")
        g0 = self.generators[0].group
        for g in self.generators:
            if g.group != g0:
                raise GroupMismatch("generators from different groups")
            if not g.is_positive:
                raise ValueError("generators must be positive")

    @property
    def group(self) -> Group:
        return self.generators[0].group

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def numerical(*gens: int) -> FiniteGenerated:
    """Additive submonoid of the nonnegative rationals with integer generators."""
    return FiniteGenerated(tuple(rational(g) for g in gens))


@dataclass(frozen=True)
class GeometricPuiseux(MonoidDescriptor):
    """M_q = <q^n | n >= 0> for 0 < q < 1 whose inverse is not an integer."""

    q: Fraction
    family = "geometric"

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", Fraction(self.q))
        if not 0 < self.q < 1:
            raise ValueError("ratio must lie strictly between 0 and 1")
        if self.q.numerator < 2:
            raise ValueError("ratio must have numerator >= 2 (1/q not an integer)")

    @property
    def group(self) -> Group:
        return Q

    def __str__(self) -> str:
        return f"M_{self.q}"


@dataclass(frozen=True)
class PrimeReciprocal(MonoidDescriptor):
    """M_0 = <1/p | p prime>."""

    family = "prime-reciprocal"

    @property
    def group(self) -> Group:
        return Q

    def __str__(self) -> str:
        return "M_0"


@dataclass(frozen=True)
class Conductive(MonoidDescriptor):
    """M_a = {0} union G_{>=a} for a positive threshold a."""

    threshold: GroupElement
    family = "conductive"

    def __post_init__(self) -> None:
        if not self.threshold.is_positive:
            raise ValueError("threshold must be positive")

    @property
    def group(self) -> Group:
        return self.threshold.group

    def __str__(self) -> str:
        return f"M_a[{self.group.token}, a={self.threshold}]"


FIRST_POSITIVE = "first-positive"
FULL_CONE = "full-cone"


@dataclass(frozen=True)
class LexCone(MonoidDescriptor):
    """A cone-style positive monoid of a lex vector group.

    rule "full-cone": the whole nonnegative cone G+.
    rule "first-positive": {0} union {v : priority coordinate of v > 0};
    e.g. {0} u (N x Z) in Z^2 and {0} u (Q_{>0} x Q) in Q^2.
    """

    lex_group: Group
    rule: str
    family = "lex-cone"

    def __post_init__(self) -> None:
        if self.lex_group.kind != "lex":
            raise ValueError("LexCone needs a lex vector group")
        if self.rule not in (FIRST_POSITIVE, FULL_CONE):
            raise ValueError(f"unknown cone rule {self.rule!r}")

    @property
    def group(self) -> Group:
        return self.lex_group

    def __str__(self) -> str:
        return f"cone[{self.lex_group.token}, {self.rule}]"


@dataclass(frozen=True)
class Localized(MonoidDescriptor):
    """{0} union {x in Z[1/p] : x >= t} for a prime p and threshold t >= 0."""

    prime: int
    min_nonzero: Fraction
    family = "localized"

    def __post_init__(self) -> None:
        object.__setattr__(self, "min_nonzero", Fraction(self.min_nonzero))
        if not is_prime(self.prime):
            raise ValueError("localization base must be prime")
        if self.min_nonzero < 0:
            raise ValueError("threshold must be nonnegative")

    @property
    def group(self) -> Group:
        return Q

    def __str__(self) -> str:
        return f"Z[1/{self.prime}]_(>= {self.min_nonzero})"


@dataclass(frozen=True)
class Product(MonoidDescriptor):
    """Direct product; members are ProductElement pairs, componentwise."""

    left: MonoidDescriptor
    right: MonoidDescriptor
    family = "product"

    @property
    def group(self) -> Group:
        raise UnsupportedFamily("a product has no single ambient ground group")

    def __str__(self) -> str:
        return f"({self.left}) x ({self.right})"


UNION = "union"
GENERATE = "generate"


@dataclass(frozen=True)
class UnionShift(MonoidDescriptor):
    """Extension of a base monoid by a tail.

    mode "union" with a threshold: members are base-members together with
    the elements of the difference group of the base that are >= threshold
    (a set union; both parts are closed under addition across the union).

    mode "generate" with a tail descriptor: the monoid generated by the
    union of the two member sets, i.e. all sums base + tail.
    """

    base: MonoidDescriptor
    tail: Optional[MonoidDescriptor] = None
    threshold: Optional[Fraction] = None
    mode: str = UNION
    family = "union-shift"

    def __post_init__(self) -> None:
        if self.threshold is not None:
            object.__setattr__(self, "threshold", Fraction(self.threshold))
        if self.mode == UNION:
            if self.threshold is None or self.tail is not None:
                raise ValueError("union mode takes a threshold and no tail")
            if not isinstance(self.base, PrimeReciprocal):
                raise UnsupportedFamily(
                    "group-tail union is implemented over the prime-reciprocal base"
                )
        elif self.mode == GENERATE:
            if self.tail is None or self.threshold is not None:
                raise ValueError("generate mode takes a tail and no threshold")
            if not (
                isinstance(self.base, Localized)
                and isinstance(self.tail, Localized)
                and self.base.prime != self.tail.prime
            ):
                raise UnsupportedFamily(
                    "generated union is implemented for two localized rays "
                    "at distinct primes"
                )
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def group(self) -> Group:
        return Q

    def __str__(self) -> str:
        if self.mode == UNION:
            return f"{self.base} u gp_(>= {self.threshold})"
        return f"<{self.base} u {self.tail}>"


@dataclass(frozen=True)
class AlphaBeta(MonoidDescriptor):
    """The rank-three construction over M_q with two extra basis directions.

    Generated by s, (alpha - s)/phi(s) and (beta - s)/phi(s) for s ranging
    over S = {s in M_q : s < alpha}, with alpha = sqrt2, beta = sqrt3 and
    phi the injection of S into the primes by discovery order.
    """

    q: Fraction
    family = "alpha-beta"

    def __post_init__(self) -> None:
        GeometricPuiseux(self.q)  # validates the ratio
        object.__setattr__(self, "q", Fraction(self.q))

    @property
    def group(self) -> Group:
        return T

    def __str__(self) -> str:
        return f"M_(a,b)[{self.q}]"


@dataclass(frozen=True)
class NearlyAtomicAlpha(MonoidDescriptor):
    """<q, (alpha + q)/phi(q) | q in Q_{>=0}> with alpha = sqrt2 and phi the
    injection of Q_{>=0} into the primes by Calkin-Wilf order."""

    family = "nearly-atomic-alpha"

    @property
    def group(self) -> Group:
        return T

    def __str__(self) -> str:
        return "M_nearly[sqrt2]"


def quasi_not_almost_instance() -> UnionShift:
    """<Z[1/2]_{>=0} u Z[1/3]_{>=4/3}>."""
    return UnionShift(
        base=Localized(2, Fraction(0)),
        tail=Localized(3, Fraction(4, 3)),
        mode=GENERATE,
    )


def almost_not_nearly_instance() -> UnionShift:
    """M_0 extended by the elements of its difference group that are >= 1."""
    return UnionShift(base=PrimeReciprocal(), threshold=Fraction(1), mode=UNION)


# ---------------------------------------------------------------------------
# phi enumerations


@lru_cache(maxsize=None)
def _sqrt2_floor_check(value: Fraction) -> bool:
    """value < sqrt2, exactly (value assumed >= 0)."""
    return value.numerator**2 * 1 < 2 * value.denominator**2


@lru_cache(maxsize=None)
def alphabeta_domain(q: Fraction, count: int) -> tuple[Fraction, ...]:
    """First `count` elements of S = {s in M_q : s < sqrt2}, in discovery order.

    Discovery order: representations c_0 + c_1 q + ... + c_K q^K are
    enumerated by increasing grade K + sum(c_i) and lexicographic
    coefficient order inside a grade; a value joins S the first time it
    appears.  The order is fixed so that phi (n-th element -> n-th prime)
    is reproducible across runs.
    """
    q = Fraction(q)
    found: list[Fraction] = []
    seen: set[Fraction] = set()
    grade = 0
    while len(found) < count:
        for value in _graded_values(q, grade):
            if value in seen or not _sqrt2_floor_check(value):
                continue
            seen.add(value)
            found.append(value)
            if len(found) == count:
                break
        grade += 1
        if grade > 200:
            raise RuntimeError("discovery enumeration exceeded its safety cap")
    return tuple(found)


def _graded_values(q: Fraction, grade: int):
    """Values of coefficient vectors whose top index K and coefficient sum
    satisfy K + sum(c) == grade, top coefficient nonzero (except the empty
    vector at grade 0)."""
    powers = [q**i for i in range(grade + 1)]
    out: list[Fraction] = []
    for top_index in range(grade + 1):
        budget = grade - top_index
        if top_index == 0:
            for c in range(budget + 1):
                if grade == 0 or c >= 1:
                    out.append(powers[0] * c)
            continue

        def rec(idx: int, budget_: int, acc: Fraction):
            if idx > top_index:
                out.append(acc)
                return
            lo = 1 if idx == top_index else 0
            for c in range(lo, budget_ + 1):
                rec(idx + 1, budget_ - c, acc + powers[idx] * c)

        rec(0, budget, Fraction(0))
    return out


def alphabeta_phi(q: Fraction, s: Fraction) -> int:
    """phi(s): the prime assigned to s by discovery order."""
    count = 16
    while True:
        dom = alphabeta_domain(q, count)
        if s in dom:
            return first_primes(len(dom))[dom.index(s)]
        if count > 4096:
            raise RuntimeError(f"{s} not discovered within the enumeration cap")
        count *= 2


def nearly_phi(x: Fraction) -> int:
    """phi(x) for the Calkin-Wilf enumeration of Q_{>=0}."""
    count = 16
    while True:
        dom = calkin_wilf(count)
        if x in dom:
            return first_primes(len(dom))[dom.index(x)]
        if count > 1 << 20:
            raise RuntimeError(f"{x} not reached within the enumeration cap")
        count *= 2


def nearly_atom(x: Fraction) -> GroupElement:
    """The atom (alpha + x)/phi(x) of the nearly-atomic instance."""
    p = nearly_phi(x)
    return triple(Fraction(x) / p, Fraction(1, p), 0)


def alphabeta_atom(q: Fraction, s: Fraction, direction: str) -> GroupElement:
    """(alpha - s)/phi(s) or (beta - s)/phi(s) as an exact triple."""
    p = alphabeta_phi(q, s)
    if direction == "alpha":
        return triple(-Fraction(s) / p, Fraction(1, p), 0)
    if direction == "beta":
        return triple(-Fraction(s) / p, 0, Fraction(1, p))
    raise ValueError("direction must be 'alpha' or 'beta'")


# ---------------------------------------------------------------------------
# generator windows


def generators(m: MonoidDescriptor, depth: int = DEFAULT_DEPTH) -> GeneratorWindow:
    """A deterministic finite generator list, monotone in depth."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return _window_cached(m, depth)


@lru_cache(maxsize=None)
def _window_cached(m: MonoidDescriptor, depth: int) -> GeneratorWindow:
    gens = tuple(_window_elements(m, depth))
    for g in gens:
        positive = (not g.is_zero) if isinstance(g, ProductElement) else g.is_positive
        if not positive:
            raise AssertionError("window produced a non-positive generator")
    return GeneratorWindow(m, depth, gens)


def _window_elements(m: MonoidDescriptor, depth: int) -> list[Element]:
    if isinstance(m, FiniteGenerated):
        return list(dict.fromkeys(m.generators))
    if isinstance(m, GeometricPuiseux):
        return [rational(m.q**i) for i in range(depth + 1)]
    if isinstance(m, PrimeReciprocal):
        return [rational(Fraction(1, p)) for p in first_primes(depth)]
    if isinstance(m, Conductive):
        return _conductive_window(m, depth)
    if isinstance(m, LexCone):
        return [v for v in _lex_box(m.lex_group, depth) if _cone_holds(m, v) and not v.is_zero]
    if isinstance(m, Localized):
        return _localized_window(m, depth)
    if isinstance(m, Product):
        lg = _window_elements(m.left, depth)
        rg = _window_elements(m.right, depth)
        lzero = _zero_of(m.left)
        rzero = _zero_of(m.right)
        return [ProductElement(g, rzero) for g in lg] + [
            ProductElement(lzero, h) for h in rg
        ]
    if isinstance(m, UnionShift):
        if m.mode == UNION:
            base = _window_elements(m.base, depth)
            return base + _group_tail_window(m, depth)
        return _window_elements(m.base, depth) + _window_elements(m.tail, depth)
    if isinstance(m, AlphaBeta):
        out: list[Element] = []
        for s in alphabeta_domain(m.q, depth):
            if s != 0:
                out.append(triple(s, 0, 0))
            out.append(alphabeta_atom(m.q, s, "alpha"))
            out.append(alphabeta_atom(m.q, s, "beta"))
        return out
    if isinstance(m, NearlyAtomicAlpha):
        out = []
        for x in calkin_wilf(depth):
            if x != 0:
                out.append(triple(x, 0, 0))
            out.append(nearly_atom(x))
        return out
    raise UnsupportedFamily(f"no generator window for {m.family}")


def _zero_of(m: MonoidDescriptor) -> Element:
    if isinstance(m, Product):
        return ProductElement(_zero_of(m.left), _zero_of(m.right))
    return zero(m.group)


def _conductive_window(m: Conductive, depth: int) -> list[GroupElement]:
    g = m.group
    a = m.threshold
    if g.kind == "lex" and g.rank == 1 and not g.rational_coords:
        lead = a.value[0]
        return [GroupElement(g, (lead + t,)) for t in range(depth + 1)]
    if g.kind == "lex":
        # a slice of the cone anchored at the conductor: a + box offsets
        out = [a + delta for delta in _lex_box(g, depth)]
        return sorted(v for v in out if v >= a)
    if g.kind == "Q":
        vals = sorted(
            {
                a.value + Fraction(i, j)
                for j in range(1, depth + 1)
                for i in range(0, depth * j + 1)
            }
        )
        return [rational(v) for v in vals]
    raise UnsupportedFamily("conductive windows exist for Q and lex groups")


@lru_cache(maxsize=None)
def _lex_box(group: Group, size: int) -> tuple[GroupElement, ...]:
    """All box elements with |coord| <= size, in ascending lex order.

    For rational-coordinate groups the coordinate grid is the set of
    fractions in [-size, size] with denominator at most min(size, 5); the
    denominator cap keeps window sizes sane and preserves monotonicity in
    the depth.
    """
    if group.rational_coords:
        dmax = min(size, 5)
        grid = sorted(
            {
                Fraction(p, q)
                for q in range(1, dmax + 1)
                for p in range(-size * q, size * q + 1)
            }
        )
    else:
        grid = list(range(-size, size + 1))
    coords: list[tuple] = [()]
    for _ in range(group.rank):
        coords = [c + (v,) for c in coords for v in grid]
    out = [GroupElement(group, c) for c in coords]
    out.sort()
    return tuple(out)


def _cone_holds(m: LexCone, v: GroupElement) -> bool:
    if v.is_zero:
        return True
    if m.rule == FULL_CONE:
        return v.is_positive
    return v.value[m.lex_group.priority] > 0


def _localized_window(m: Localized, depth: int) -> list[GroupElement]:
    """Ray elements with denominator exponent <= min(depth, 4) and value at
    most threshold + depth; the exponent cap keeps windows desk-sized."""
    p = m.prime
    lo = m.min_nonzero
    hi = lo + depth
    vals: set[Fraction] = set()
    for j in range(min(depth, 4) + 1):
        den = p**j
        start = max(1, -(-lo.numerator * den // lo.denominator))  # ceil(lo*den)
        for num in range(start, hi.numerator * den // hi.denominator + 1):
            v = Fraction(num, den)
            if lo <= v <= hi and v > 0:
                vals.add(v)
    return [rational(v) for v in sorted(vals)]


def _group_tail_window(m: UnionShift, depth: int) -> list[GroupElement]:
    """Sample of gp(M_0)_{>= threshold}: prime denominators up to the
    depth-th prime, values up to threshold + min(depth, 4)."""
    ps = first_primes(depth)
    dens = [1] + list(ps)
    out: set[Fraction] = set()
    lo = m.threshold
    hi = m.threshold + min(depth, 4)
    for den in dens:
        for num in range(lo.numerator * den // lo.denominator, hi.numerator * den // hi.denominator + 1):
            v = Fraction(num, den)
            if lo <= v <= hi:
                out.add(v)
    return [rational(v) for v in sorted(out)]


# ---------------------------------------------------------------------------
# membership


def contains(
    m: MonoidDescriptor, x: Element, depth: int = DEFAULT_DEPTH
) -> MembershipVerdict:
    """Decide x in m; exact for every family except the two irrational
    constructions and out-of-window combinations, which report unknown."""
    _check_element(m, x)
    if _is_negative(m, x):
        raise ValueError("membership queries require a nonnegative element")
    if isinstance(m, FiniteGenerated):
        return _fg_contains(m, x)
    if isinstance(m, GeometricPuiseux):
        return _mq_contains(m, x)
    if isinstance(m, PrimeReciprocal):
        return _m0_contains(x.value)
    if isinstance(m, Conductive):
        if x.is_zero:
            return verdict_in(())
        return verdict_in(((x, 1),)) if x >= m.threshold else VERDICT_OUT
    if isinstance(m, LexCone):
        if x.is_zero:
            return verdict_in(())
        return verdict_in(((x, 1),)) if _cone_holds(m, x) else VERDICT_OUT
    if isinstance(m, Localized):
        return _localized_contains(m, x.value)
    if isinstance(m, Product):
        lv = contains(m.left, x.left, depth)
        rv = contains(m.right, x.right, depth)
        if lv.is_out or rv.is_out:
            return VERDICT_OUT
        if lv.is_in and rv.is_in:
            lzero, rzero = _zero_of(m.left), _zero_of(m.right)
            cert = tuple(
                (ProductElement(g, rzero), c) for g, c in lv.certificate
            ) + tuple((ProductElement(lzero, h), c) for h, c in rv.certificate)
            return verdict_in(cert)
        return MembershipVerdict(UNKNOWN, depth=depth)
    if isinstance(m, UnionShift):
        return _union_contains(m, x.value, depth)
    if isinstance(m, AlphaBeta):
        return _alphabeta_contains(m, x, depth)
    if isinstance(m, NearlyAtomicAlpha):
        return _nearly_contains(x, depth)
    raise UnsupportedFamily(f"no membership procedure for {m.family}")


def divides(
    m: MonoidDescriptor, d: Element, x: Element, depth: int = DEFAULT_DEPTH
) -> MembershipVerdict:
    """Verdict for "d divides x in m", i.e. x - d in m."""
    _check_element(m, d)
    _check_element(m, x)
    diff = x - d
    if _is_negative(m, diff):
        return VERDICT_OUT
    return contains(m, diff, depth)


def _check_element(m: MonoidDescriptor, x: Element) -> None:
    if isinstance(m, Product):
        if not isinstance(x, ProductElement):
            raise GroupMismatch("product monoids take pair elements")
        _check_element(m.left, x.left)
        _check_element(m.right, x.right)
        return
    if not isinstance(x, GroupElement) or x.group != m.group:
        raise GroupMismatch(f"element does not live in the ground group of {m}")


def _is_negative(m: MonoidDescriptor, x: Element) -> bool:
    if isinstance(x, ProductElement):
        return _is_negative(m.left, x.left) or _is_negative(m.right, x.right)
    return x.is_negative


# -- finitely generated ------------------------------------------------------


def _fg_contains(m: FiniteGenerated, x: GroupElement) -> MembershipVerdict:
    if x.is_zero:
        return verdict_in(())
    gens = sorted(set(m.generators), reverse=True)
    combo = _first_combination(gens, x)
    if combo is None:
        return VERDICT_OUT
    cert = tuple((g, c) for g, c in zip(gens, combo) if c > 0)
    return verdict_in(cert)


def _first_combination(
    gens: list[GroupElement], target: GroupElement
) -> Optional[list[int]]:
    """First multiplicity vector over descending generators summing to the
    target, by depth-first search with residual and level pruning."""
    counts = [0] * len(gens)

    def level(v: GroupElement) -> int:
        if v.group.kind != "lex":
            return 0
        for pos, i in enumerate(v.group.priority_order):
            if v.value[i] != 0:
                return pos
        return v.group.rank

    def rec(i: int, residual: GroupElement) -> bool:
        if residual.is_zero:
            return True
        if i == len(gens):
            return False
        if residual.is_negative:
            return False
        if level(gens[i]) > level(residual):
            return False  # remaining generators are infinitesimal vs residual
        top = _max_multiplicity(gens[i], residual)
        for c in range(top, -1, -1):
            counts[i] = c
            if rec(i + 1, residual - gens[i].scale(c)):
                return True
        counts[i] = 0
        return False

    return list(counts) if rec(0, target) else None


def _max_multiplicity(atom: GroupElement, residual: GroupElement) -> int:
    """Largest c >= 0 with c * atom <= residual (atom positive, bounded case)."""
    if atom.group.kind == "Q":
        if residual.value < 0:
            return 0
        return int(residual.value / atom.value)
    lo, hi = 0, 1
    while atom.scale(hi) <= residual:
        hi *= 2
        if hi > 1 << 62:
            raise OverflowError("unbounded multiplicity")
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if atom.scale(mid) <= residual:
            lo = mid
        else:
            hi = mid
    return lo


# -- geometric <q^n> ---------------------------------------------------------


def _den_support_ok(den: int, d: int) -> bool:
    """den divides a power of d."""
    t = den
    g = gcd(t, d)
    while g > 1:
        while t % g == 0:
            t //= g
        g = gcd(t, d)
    return t == 1


@lru_cache(maxsize=65536)
def _mq_solve(q: Fraction, x: Fraction) -> Optional[tuple[tuple[int, int], ...]]:
    """Coefficients ((i, c_i), ...) with sum c_i q^i == x, or None.

    Descends one power at a time: the coefficient at the current level is
    congruent to the residue of the value modulo n(q), and subtracting it
    and dividing by q strictly reduces the d(q)-part of the denominator.
    """
    n, d = q.numerator, q.denominator
    memo: dict[Fraction, Optional[list[int]]] = {}

    def rec(y: Fraction) -> Optional[list[int]]:
        if y == 0:
            return []
        if y < 0:
            return None
        if y.denominator == 1:
            return [int(y)]
        if y in memo:
            return memo[y]
        if not _den_support_ok(y.denominator, d):
            memo[y] = None
            return None
        r = (y.numerator * pow(y.denominator, -1, n)) % n
        top = y.numerator // y.denominator
        if top >= r:
            start = top - ((top - r) % n)
        else:
            memo[y] = None
            return None
        result: Optional[list[int]] = None
        for c0 in range(start, -1, -n):
            rest = (y - c0) / q
            sub = rec(rest)
            if sub is not None:
                result = [c0] + sub
                break
        memo[y] = result
        return result

    coeffs = rec(Fraction(x))
    if coeffs is None:
        return None
    return tuple((i, c) for i, c in enumerate(coeffs) if c > 0)


def _mq_contains(m: GeometricPuiseux, x: GroupElement) -> MembershipVerdict:
    if x.is_zero:
        return verdict_in(())
    sol = _mq_solve(m.q, x.value)
    if sol is None:
        return VERDICT_OUT
    return verdict_in(tuple((rational(m.q**i), c) for i, c in sol))


# -- prime reciprocals -------------------------------------------------------


@lru_cache(maxsize=65536)
def _m0_solve(x: Fraction) -> Optional[tuple[tuple[int, int], ...]]:
    """Coefficients ((p, c_p), ...) with sum c_p / p == x, or None.

    The denominator must be squarefree; for each prime p dividing it the
    residue of c_p mod p is forced, and the leftover must be a nonnegative
    integer (absorbed as 2m copies of 1/2).
    """
    if x < 0:
        return None
    den = x.denominator
    fac = factorize(den)
    if any(e > 1 for e in fac.values()):
        return None
    coeffs: dict[int, int] = {}
    rest = x
    for p in sorted(fac):
        a = (x.numerator * pow(den // p, -1, p)) % p
        coeffs[p] = a
        rest -= Fraction(a, p)
    if rest.denominator != 1 or rest < 0:
        return None
    if rest > 0:
        coeffs[2] = coeffs.get(2, 0) + 2 * int(rest)
    return tuple(sorted(coeffs.items()))


def _m0_contains(x: Fraction) -> MembershipVerdict:
    if x == 0:
        return verdict_in(())
    sol = _m0_solve(x)
    if sol is None:
        return VERDICT_OUT
    return verdict_in(tuple((rational(Fraction(1, p)), c) for p, c in sol))


# -- localized rays and unions ----------------------------------------------


def _power_support(den: int, p: int) -> bool:
    while den % p == 0:
        den //= p
    return den == 1


def _localized_contains(m: Localized, x: Fraction) -> MembershipVerdict:
    if x == 0:
        return verdict_in(())
    if not _power_support(x.denominator, m.prime):
        return VERDICT_OUT
    if x < m.min_nonzero:
        return VERDICT_OUT
    return verdict_in(((rational(x), 1),))


def _union_contains(m: UnionShift, x: Fraction, depth: int) -> MembershipVerdict:
    if x == 0:
        return verdict_in(())
    if m.mode == UNION:
        base = contains(m.base, rational(x), depth)
        if base.is_in:
            return base
        if x >= m.threshold and is_squarefree(x.denominator):
            return verdict_in(((rational(x), 1),))
        return VERDICT_OUT
    return _two_ray_contains(m.base, m.tail, x)


def _two_ray_contains(
    base: Localized, tail: Localized, x: Fraction
) -> MembershipVerdict:
    """Exact membership in <base u tail> = base + ({0} u tail).

    Splitting x = A/p1^a + B/p2^b over the two prime parts, the tail
    component is forced modulo the integers, so membership reduces to the
    existence of an integer k with tail and base thresholds both honored.
    """
    p1, t1 = base.prime, base.min_nonzero
    p2, t2 = tail.prime, tail.min_nonzero
    den = x.denominator
    a = 0
    while den % p1 == 0:
        den //= p1
        a += 1
    b = 0
    while den % p2 == 0:
        den //= p2
        b += 1
    if den != 1:
        return VERDICT_OUT
    # pure base-part (tail component zero)
    if b == 0 and (x == 0 or x >= t1):
        return verdict_in(((rational(x), 1),))
    # pure tail-part (base component zero)
    if a == 0 and x >= t2:
        return verdict_in(((rational(x), 1),))
    pa, pb = p1**a, p2**b
    A = (x.numerator * pow(pb, -1, pa)) % pa if pa > 1 else 0
    B = (x.numerator - A * pb) // pa
    # the tail part is forced to be B/pb + k for an integer k, so membership
    # is the existence of k with  t2 - B/pb <= k <= A/pa - t1
    lo = t2 - Fraction(B, pb)
    hi = Fraction(A, pa) - t1
    k_min = -((-lo.numerator) // lo.denominator)  # ceil(lo)
    k_max = hi.numerator // hi.denominator  # floor(hi)
    for k in range(k_min, k_max + 1):
        v = Fraction(B, pb) + k
        u = x - v
        if v >= t2 and (u == 0 or u >= t1) and u >= 0:
            if u == 0:
                return verdict_in(((rational(v), 1),))
            return verdict_in(((rational(u), 1), (rational(v), 1)))
    return VERDICT_OUT


# -- irrational constructions -------------------------------------------------


def _prime_part_solve(
    parts: list[tuple[Fraction, int]], target: Fraction
) -> Optional[list[int]]:
    """Multiplicities m_i with sum m_i / p_i == target over distinct primes.

    The residue of m_i mod p_i is forced for every prime dividing the
    target's denominator; the leftover integer is absorbed by the first
    available prime (p copies of 1/p).
    """
    if target < 0:
        return None
    mults = [0] * len(parts)
    if target == 0:
        return mults
    if not parts:
        return None
    index = {p: i for i, (_, p) in enumerate(parts)}
    den = target.denominator
    fac = factorize(den)
    if any(e > 1 for e in fac.values()):
        return None
    rest = target
    for p in sorted(fac):
        if p not in index:
            return None
        a = (target.numerator * pow(den // p, -1, p)) % p
        mults[index[p]] += a
        rest -= Fraction(a, p)
    if rest.denominator != 1 or rest < 0:
        return None
    if rest > 0:
        p0 = min(index)
        mults[index[p0]] += p0 * int(rest)
    return mults


def _nearly_contains(x: GroupElement, depth: int) -> MembershipVerdict:
    c0, c1, c2 = x.value
    if c2 != 0 or c1 < 0:
        return VERDICT_OUT
    if c1 == 0:
        if c0 < 0:
            return VERDICT_OUT
        return verdict_in(((triple(c0, 0, 0), 1),)) if c0 > 0 else verdict_in(())
    parts = [(q, nearly_phi(q)) for q in calkin_wilf(depth)]
    mults = _prime_part_solve(parts, c1)
    if mults is not None:
        rat = c0 - sum(Fraction(q) * m / p for (q, p), m in zip(parts, mults))
        if rat >= 0:
            cert = [
                (nearly_atom(q), m) for (q, p), m in zip(parts, mults) if m > 0
            ]
            if rat > 0:
                cert.append((triple(rat, 0, 0), 1))
            return verdict_in(tuple(cert))
    return MembershipVerdict(UNKNOWN, depth=depth)


def _alphabeta_contains(
    m: AlphaBeta, x: GroupElement, depth: int
) -> MembershipVerdict:
    c0, c1, c2 = x.value
    if c1 < 0 or c2 < 0:
        return VERDICT_OUT
    if c1 == 0 and c2 == 0:
        base = _mq_contains(GeometricPuiseux(m.q), GroupElement(Q, c0))
        if base.is_out:
            return VERDICT_OUT
        cert = tuple((triple(g.value, 0, 0), c) for g, c in base.certificate)
        return verdict_in(cert)
    dom = alphabeta_domain(m.q, depth)
    parts = [(s, alphabeta_phi(m.q, s)) for s in dom]
    am = _prime_part_solve(parts, c1)
    bm = _prime_part_solve(parts, c2)
    if am is not None and bm is not None:
        rat = (
            c0
            + sum(Fraction(s) * k / p for (s, p), k in zip(parts, am))
            + sum(Fraction(s) * k / p for (s, p), k in zip(parts, bm))
        )
        sub = _mq_solve(m.q, rat) if rat >= 0 else None
        if sub is not None:
            cert = [
                (alphabeta_atom(m.q, s, "alpha"), k)
                for (s, p), k in zip(parts, am)
                if k > 0
            ]
            cert += [
                (alphabeta_atom(m.q, s, "beta"), k)
                for (s, p), k in zip(parts, bm)
                if k > 0
            ]
            cert += [(triple(m.q**i, 0, 0), c) for i, c in sub]
            return verdict_in(tuple(cert))
    return MembershipVerdict(UNKNOWN, depth=depth)


# ---------------------------------------------------------------------------
# difference groups


def gp_membership(m: MonoidDescriptor, x: GroupElement) -> bool:
    """Exact membership in the difference group, for the rational families
    that support it.

    For the generated dyadic/triadic union this decides the documented
    bound on the subgroup generated by the atoms (denominator a power of
    the tail prime), not the difference group of the whole monoid.
    """
    if isinstance(m, Product):
        raise UnsupportedFamily("no difference-group procedure for products")
    if not isinstance(x, GroupElement) or x.group != m.group:
        raise GroupMismatch("element is not in the ground group")
    if isinstance(m, PrimeReciprocal):
        return is_squarefree(x.value.denominator)
    if isinstance(m, FiniteGenerated):
        if m.group.kind != "Q":
            raise UnsupportedFamily("lattice membership implemented over Q")
        dens = lcm(*[g.value.denominator for g in m.generators])
        step = gcd(*[int(g.value * dens) for g in m.generators])
        scaled = x.value * dens
        return scaled.denominator == 1 and int(scaled) % step == 0
    if isinstance(m, Localized):
        return _power_support(x.value.denominator, m.prime)
    if isinstance(m, UnionShift):
        if m.mode == UNION:
            return is_squarefree(x.value.denominator)
        return _power_support(x.value.denominator, m.tail.prime)
    raise UnsupportedFamily(f"no difference-group procedure for {m.family}")


# ---------------------------------------------------------------------------
# bounded member enumeration (for probes)


def members_within(m: MonoidDescriptor, bound) -> tuple[Element, ...]:
    """All members below the bound, for the families where that set is
    finite and membership below the bound is exact.

    For value-ordered families the bound is a number; for lex families it
    is a coordinate box (b_1, ..., b_k) and "below" means |coord_i| <= b_i.
    """
    if isinstance(m, FiniteGenerated) and m.group.kind == "Q":
        limit = Fraction(bound)
        dens = lcm(limit.denominator, *[g.value.denominator for g in m.generators])
        gens = sorted({int(g.value * dens) for g in m.generators})
        top = int(limit * dens)
        reach = bytearray(top + 1)
        reach[0] = 1
        for g in gens:
            for v in range(g, top + 1):
                if reach[v - g]:
                    reach[v] = 1
        return tuple(
            rational(Fraction(v, dens)) for v in range(top + 1) if reach[v]
        )
    if isinstance(m, Conductive) and m.group.kind == "lex":
        box = _normalize_box(m.group, bound)
        return tuple(
            v for v in _box_elements(m.group, box) if v.is_zero or v >= m.threshold
        )
    if isinstance(m, LexCone) and not m.lex_group.rational_coords:
        box = _normalize_box(m.lex_group, bound)
        return tuple(v for v in _box_elements(m.lex_group, box) if _cone_holds(m, v))
    raise UnsupportedFamily(
        f"member enumeration below a bound is not exact/finite for {m.family}"
    )


def _normalize_box(group: Group, bound) -> tuple[int, ...]:
    if isinstance(bound, (tuple, list)):
        box = tuple(int(b) for b in bound)
    else:
        box = (int(bound),) * group.rank
    if len(box) != group.rank:
        raise ValueError("box rank mismatch")
    return box


def _box_elements(group: Group, box: tuple[int, ...]) -> list[GroupElement]:
    coords: list[tuple[int, ...]] = [()]
    for b in box:
        coords = [c + (v,) for c in coords for v in range(-b, b + 1)]
    out = [GroupElement(group, c) for c in coords]
    out.sort()
    return out


# ---------------------------------------------------------------------------
# JSON forms


def element_to_json(x: Element):
    if isinstance(x, ProductElement):
        return {"left": element_to_json(x.left), "right": element_to_json(x.right)}
    return {"group": x.group.token, "value": to_text(x)}


def element_from_json(obj) -> Element:
    if "left" in obj:
        return ProductElement(
            element_from_json(obj["left"]), element_from_json(obj["right"])
        )
    return parse_element(group_from_token(obj["group"]), obj["value"])


def descriptor_to_json(m: MonoidDescriptor) -> dict:
    if isinstance(m, FiniteGenerated):
        return {
            "family": m.family,
            "generators": [element_to_json(g) for g in m.generators],
        }
    if isinstance(m, GeometricPuiseux):
        return {"family": m.family, "ratio": str(m.q)}
    if isinstance(m, PrimeReciprocal):
        return {"family": m.family}
    if isinstance(m, Conductive):
        return {"family": m.family, "threshold": element_to_json(m.threshold)}
    if isinstance(m, LexCone):
        return {"family": m.family, "group": m.lex_group.token, "rule": m.rule}
    if isinstance(m, Localized):
        return {"family": m.family, "prime": m.prime, "min": str(m.min_nonzero)}
    if isinstance(m, Product):
        return {
            "family": m.family,
            "left": descriptor_to_json(m.left),
            "right": descriptor_to_json(m.right),
        }
    if isinstance(m, UnionShift):
        out = {"family": m.family, "mode": m.mode, "base": descriptor_to_json(m.base)}
        if m.mode == UNION:
            out["threshold"] = str(m.threshold)
        else:
            out["tail"] = descriptor_to_json(m.tail)
        return out
    if isinstance(m, AlphaBeta):
        return {"family": m.family, "ratio": str(m.q)}
    if isinstance(m, NearlyAtomicAlpha):
        return {"family": m.family}
    raise UnsupportedFamily(f"no JSON form for {m.family}")


def descriptor_from_json(obj: dict) -> MonoidDescriptor:
    fam = obj["family"]
    if fam == "finite-generated":
        return FiniteGenerated(tuple(element_from_json(g) for g in obj["generators"]))
    if fam == "geometric":
        return GeometricPuiseux(Fraction(obj["ratio"]))
    if fam == "prime-reciprocal":
        return PrimeReciprocal()
    if fam == "conductive":
        return Conductive(element_from_json(obj["threshold"]))
    if fam == "lex-cone":
        return LexCone(group_from_token(obj["group"]), obj["rule"])
    if fam == "localized":
        return Localized(obj["prime"], Fraction(obj["min"]))
    if fam == "product":
        return Product(
            descriptor_from_json(obj["left"]), descriptor_from_json(obj["right"])
        )
    if fam == "union-shift":
        if obj["mode"] == UNION:
            return UnionShift(
                base=descriptor_from_json(obj["base"]),
                threshold=Fraction(obj["threshold"]),
                mode=UNION,
            )
        return UnionShift(
            base=descriptor_from_json(obj["base"]),
            tail=descriptor_from_json(obj["tail"]),
            mode=GENERATE,
        )
    if fam == "alpha-beta":
        return AlphaBeta(Fraction(obj["ratio"]))
    if fam == "nearly-atomic-alpha":
        return NearlyAtomicAlpha()
    raise UnsupportedFamily(f"unknown family tag {fam!r}")
