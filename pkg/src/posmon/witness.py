"""Construction and machine-checking of explicit witnesses: non-stabilizing
chains of principal ideals, the hereditary-break synthesis (a sequence of
pairwise-combined differences whose generated submonoid provably excludes
the chain head), and the witnesses separating the quasi/almost/nearly
atomic classes.

Every certificate replays: its ``verify`` routine re-checks all recorded
identities in exact arithmetic and re-runs the exhaustive exclusion
searches.  Certificates serialize to JSON with full transcripts; the CLI
``verify`` subcommand re-checks any certificate file.

Construction is deterministic: wherever an existential step permits a
choice, the minimal admissible index is taken.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .elements import Q, rational, triple, zero
from .monoids import (
    DEFAULT_DEPTH,
    GeometricPuiseux,
    NotAMember,
    almost_not_nearly_instance,
    alphabeta_atom,
    alphabeta_domain,
    alphabeta_phi,
    contains,
    nearly_atom,
    nearly_phi,
    quasi_not_almost_instance,
    replay_certificate,
)
from .primes import calkin_wilf, iter_primes, prime_support


class CertificateError(AssertionError):
    """A certificate failed to replay."""


# ---------------------------------------------------------------------------
# ascending chains


@dataclass(frozen=True)
class ChainCertificate:
    """Witness that (q_n + M) ascends strictly to depth N:
    q_n = q_{n+1} + a_{n+1} with every a_{n+1} a nonzero member."""

    ratio: Fraction
    elements: tuple[Fraction, ...]  # q_0 ... q_N
    differences: tuple[Fraction, ...]  # a_1 ... a_N

    @property
    def depth(self) -> int:
        return len(self.differences)

    def verify(self) -> None:
        m = GeometricPuiseux(self.ratio)
        if len(self.elements) != len(self.differences) + 1:
            raise CertificateError("chain length mismatch")
        for n, a in enumerate(self.differences):
            if self.elements[n] != self.elements[n + 1] + a:
                raise CertificateError(f"chain identity fails at step {n}")
            if a <= 0:
                raise CertificateError(f"difference {n + 1} is not positive")
            v = contains(m, rational(a))
            if not v.is_in:
                raise CertificateError(f"difference {n + 1} is not a member")
            if replay_certificate(v, zero(Q)) != rational(a):
                raise CertificateError(f"membership certificate {n + 1} broken")

    def to_json(self) -> dict:
        return {
            "kind": "ascending-chain",
            "ratio": str(self.ratio),
            "elements": [str(x) for x in self.elements],
            "differences": [str(x) for x in self.differences],
        }

    @staticmethod
    def from_json(obj: dict) -> "ChainCertificate":
        return ChainCertificate(
            Fraction(obj["ratio"]),
            tuple(Fraction(x) for x in obj["elements"]),
            tuple(Fraction(x) for x in obj["differences"]),
        )


def mq_chain(q: Fraction, depth: int) -> ChainCertificate:
    """The canonical non-stabilizing chain of M_q:
    q_n = d(q) q^n and a_{n+1} = (d(q) - n(q)) q^n."""
    q = Fraction(q)
    GeometricPuiseux(q)  # validates 0 < q < 1 and n(q) >= 2
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    n, d = q.numerator, q.denominator
    elements = tuple(d * q**k for k in range(depth + 1))
    differences = tuple((d - n) * q**k for k in range(depth))
    cert = ChainCertificate(q, elements, differences)
    cert.verify()
    return cert


# ---------------------------------------------------------------------------
# hereditary break synthesis


@dataclass(frozen=True)
class ExclusionTranscript:
    """Exhaustive-search record that the head is not generated by the
    combined elements: no multiplicity vector within the bounds hits it."""

    head: Fraction
    generators: tuple[Fraction, ...]
    bounds: tuple[int, ...]
    combinations_checked: int

    def verify(self) -> None:
        expected_bounds = tuple(int(self.head / g) for g in self.generators)
        if self.bounds != expected_bounds:
            raise CertificateError("exclusion bounds do not match the head")
        checked = 0
        stack = [(0, Fraction(0))]
        while stack:
            i, acc = stack.pop()
            if i == len(self.generators):
                checked += 1
                if acc == self.head:
                    raise CertificateError(
                        f"exclusion broken: {self.head} is generated"
                    )
                continue
            g = self.generators[i]
            for c in range(self.bounds[i] + 1):
                nxt = acc + c * g
                if nxt <= self.head:
                    stack.append((i + 1, nxt))
                else:
                    checked += 1  # pruned branch counts as examined
        if checked != self.combinations_checked:
            raise CertificateError("exclusion transcript count mismatch")

    def to_json(self) -> dict:
        return {
            "head": str(self.head),
            "generators": [str(g) for g in self.generators],
            "bounds": list(self.bounds),
            "combinations_checked": self.combinations_checked,
        }

    @staticmethod
    def from_json(obj: dict) -> "ExclusionTranscript":
        return ExclusionTranscript(
            Fraction(obj["head"]),
            tuple(Fraction(g) for g in obj["generators"]),
            tuple(obj["bounds"]),
            obj["combinations_checked"],
        )


def _run_exclusion(head: Fraction, gens: tuple[Fraction, ...]) -> ExclusionTranscript:
    bounds = tuple(int(head / g) for g in gens)
    checked = 0
    hit = False
    stack = [(0, Fraction(0))]
    while stack:
        i, acc = stack.pop()
        if i == len(gens):
            checked += 1
            if acc == head:
                hit = True
            continue
        for c in range(bounds[i] + 1):
            nxt = acc + c * gens[i]
            if nxt <= head:
                stack.append((i + 1, nxt))
            else:
                checked += 1
    if hit:
        raise CertificateError(f"{head} is generated; exclusion impossible")
    return ExclusionTranscript(head, gens, bounds, checked)


@dataclass(frozen=True)
class BreakStep:
    combined: Fraction  # a'_k
    chain_indices: tuple[int, int]  # the two chain differences summed (1-based)
    partial_sum: Fraction  # s'_k
    divides_index: int  # m(k): s'_k divides s_{m(k)}
    leftover_indices: tuple[int, ...]  # witness: s_{m(k)} - s'_k = sum a_idx
    exclusion: ExclusionTranscript


@dataclass(frozen=True)
class HereditaryBreakCertificate:
    """Transcript of the constructive half of the chain-vs-hereditary
    atomicity equivalence: combined differences a'_k with (1) the head
    excluded from <a'_1..a'_k> by exhaustive search, (2) every a'_k in the
    head's Archimedean class, (3) s'_k dividing a chain partial sum."""

    ratio: Fraction
    chain: ChainCertificate
    steps: tuple[BreakStep, ...]

    def verify(self) -> None:
        self.chain.verify()
        q0 = self.chain.elements[0]
        a = self.chain.differences  # a_1 ... (index shift: a[i-1] = a_i)
        s = [Fraction(0)]
        for x in a:
            s.append(s[-1] + x)
        running: list[Fraction] = []
        for k, step in enumerate(self.steps, start=1):
            i1, i2 = step.chain_indices
            if not (1 <= i1 < i2 <= len(a)):
                raise CertificateError(f"step {k}: bad chain indices")
            if step.combined != a[i1 - 1] + a[i2 - 1]:
                raise CertificateError(f"step {k}: combined element mismatch")
            if step.combined <= 0:
                raise CertificateError(f"step {k}: combined element not positive")
            running.append(step.combined)
            expected = sum(running, Fraction(0))
            if step.partial_sum != expected:
                raise CertificateError(f"step {k}: partial sum mismatch")
            mk = step.divides_index
            leftover = s[mk] - step.partial_sum
            if leftover != sum((a[i - 1] for i in step.leftover_indices), Fraction(0)):
                raise CertificateError(f"step {k}: divisibility witness mismatch")
            if leftover < 0:
                raise CertificateError(f"step {k}: negative divisibility leftover")
            if step.exclusion.head != q0 or step.exclusion.generators != tuple(running):
                raise CertificateError(f"step {k}: exclusion transcript wrong target")
            step.exclusion.verify()

    def to_json(self) -> dict:
        return {
            "kind": "hereditary-break",
            "ratio": str(self.ratio),
            "chain": self.chain.to_json(),
            "steps": [
                {
                    "combined": str(st.combined),
                    "chain_indices": list(st.chain_indices),
                    "partial_sum": str(st.partial_sum),
                    "divides_index": st.divides_index,
                    "leftover_indices": list(st.leftover_indices),
                    "exclusion": st.exclusion.to_json(),
                }
                for st in self.steps
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "HereditaryBreakCertificate":
        return HereditaryBreakCertificate(
            Fraction(obj["ratio"]),
            ChainCertificate.from_json(obj["chain"]),
            tuple(
                BreakStep(
                    Fraction(st["combined"]),
                    tuple(st["chain_indices"]),
                    Fraction(st["partial_sum"]),
                    st["divides_index"],
                    tuple(st["leftover_indices"]),
                    ExclusionTranscript.from_json(st["exclusion"]),
                )
                for st in obj["steps"]
            ),
        )


def synthesize_break(
    q: Fraction, steps: int, depth: int = 400
) -> HereditaryBreakCertificate:
    """Run the constructive synthesis for the chain of M_q.

    Step 1 combines the first difference with the earliest later one whose
    sum fails to generate the head; step k+1 combines the difference just
    past the current divisibility index with the earliest admissible later
    one (no element of the finite excluded set is an integer multiple of
    the sum).  Exclusions are certified by exhaustive bounded knapsack,
    which is absolute here because all combined elements are positive
    rationals.
    """
    q = Fraction(q)
    chain = mq_chain(q, depth)
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    a = chain.differences
    q0 = chain.elements[0]
    s = [Fraction(0)]
    for x in a:
        s.append(s[-1] + x)
    built: list[BreakStep] = []
    running: list[Fraction] = []
    m_index = 0
    for k in range(1, steps + 1):
        excluded = _positive_remainders(q0, tuple(running))
        if k == 1:
            lo = 2
            base_idx = 1
        else:
            lo = m_index + 2
            base_idx = m_index + 1
        choice = None
        for j in range(lo, len(a) + 1):
            cand = a[base_idx - 1] + a[j - 1]
            if all((r / cand).denominator != 1 for r in excluded):
                choice = j
                break
        if choice is None:
            raise RuntimeError(
                f"step {k}: no admissible index within chain depth {depth}; "
                "increase the depth"
            )
        cand = a[base_idx - 1] + a[choice - 1]
        running.append(cand)
        leftover = tuple(range(base_idx + 1, choice)) + tuple(
            built[-1].leftover_indices if built else ()
        )
        step = BreakStep(
            combined=cand,
            chain_indices=(base_idx, choice),
            partial_sum=sum(running, Fraction(0)),
            divides_index=choice,
            leftover_indices=tuple(sorted(leftover)),
            exclusion=_run_exclusion(q0, tuple(running)),
        )
        built.append(step)
        m_index = choice
    cert = HereditaryBreakCertificate(q, chain, tuple(built))
    cert.verify()
    return cert


def _positive_remainders(q0: Fraction, gens: tuple[Fraction, ...]) -> list[Fraction]:
    """The finite set (q0 - <gens>) intersected with the positives,
    including q0 itself (the empty combination)."""
    out: set[Fraction] = set()
    stack = [(0, Fraction(0))]
    while stack:
        i, acc = stack.pop()
        if i == len(gens):
            if acc < q0:
                out.add(q0 - acc)
            continue
        c = 0
        while True:
            nxt = acc + c * gens[i]
            if nxt >= q0:
                break
            stack.append((i + 1, nxt))
            c += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# quasi-atomic witnesses


@dataclass(frozen=True)
class SubatomicWitness:
    """A per-element witness for one of the weakened atomicity notions."""

    kind: str  # "quasi"
    element: Fraction
    companion: Fraction
    atomic_value: Fraction
    atom: Fraction
    multiplicity: int

    def verify(self) -> None:
        m = quasi_not_almost_instance()
        q = self.element
        if q <= 0 or not contains(m, rational(q)).is_in:
            raise CertificateError("witness element is not a nonzero member")
        d, n = q.denominator, q.numerator
        if self.companion != (4 * d - 1) * q:
            raise CertificateError("companion is not (4 d(q) - 1) q")
        if self.atomic_value != self.companion + q or self.atomic_value != 4 * n:
            raise CertificateError("companion sum is not 4 n(q)")
        if self.atom != Fraction(4, 3) or self.multiplicity != 3 * n:
            raise CertificateError("factorization is not 3 n(q) copies of 4/3")
        if self.multiplicity * self.atom != self.atomic_value:
            raise CertificateError("factorization does not replay")

    def to_json(self) -> dict:
        return {
            "kind": "quasi-witness",
            "element": str(self.element),
            "companion": str(self.companion),
            "atomic_value": str(self.atomic_value),
            "atom": str(self.atom),
            "multiplicity": self.multiplicity,
        }

    @staticmethod
    def from_json(obj: dict) -> "SubatomicWitness":
        return SubatomicWitness(
            "quasi",
            Fraction(obj["element"]),
            Fraction(obj["companion"]),
            Fraction(obj["atomic_value"]),
            Fraction(obj["atom"]),
            obj["multiplicity"],
        )


def verify_quasi_witness(q: Fraction) -> SubatomicWitness:
    """For a nonzero member q of the dyadic/triadic union, the companion
    b = (4 d(q) - 1) q makes b + q = 4 n(q), which factors into 3 n(q)
    copies of the atom 4/3."""
    q = Fraction(q)
    m = quasi_not_almost_instance()
    if q <= 0:
        raise NotAMember("the witness element must be a nonzero member")
    if not contains(m, rational(q)).is_in:
        raise NotAMember(f"{q} is not a member of the dyadic/triadic union")
    d, n = q.denominator, q.numerator
    w = SubatomicWitness(
        kind="quasi",
        element=q,
        companion=(4 * d - 1) * q,
        atomic_value=Fraction(4 * n),
        atom=Fraction(4, 3),
        multiplicity=3 * n,
    )
    w.verify()
    return w


# ---------------------------------------------------------------------------
# almost-but-not-nearly: exact prime-sum refutations


@dataclass(frozen=True)
class PrimeSumCertificate:
    """For candidate q, a finite prime set S disjoint from the support of
    d(q) with sum of reciprocals exceeding q + 2 exactly, plus the element
    r = 1 + prod 1/p.  Any atomic decomposition of q + r would contain S
    and thus exceed q + 2, while q + r < q + 2."""

    q: Fraction
    excluded: tuple[int, ...]
    count: int
    last_prime: int
    sum_num_digest: str
    sum_den_digest: str

    def verify(self) -> None:
        if self.q <= 0:
            raise CertificateError("candidate must be a positive member")
        m = almost_not_nearly_instance()
        if not contains(m, rational(self.q)).is_in:
            raise CertificateError("candidate is not a member")
        if tuple(prime_support(self.q.denominator)) != self.excluded:
            raise CertificateError("excluded set is not the denominator support")
        primes = _greedy_primes(self.excluded, self.count)
        if len(primes) != self.count or primes[-1] != self.last_prime:
            raise CertificateError("prime set does not replay")
        num, den = _sum_reciprocals(primes)
        threshold = self.q + 2
        if not num * threshold.denominator > threshold.numerator * den:
            raise CertificateError("sum does not exceed q + 2")
        if self.count > 1:
            # dropping the last term must fall back below the threshold
            num2 = num - den // primes[-1]
            if num2 * threshold.denominator > threshold.numerator * den:
                raise CertificateError("prime set is not the minimal greedy prefix")
        if _digest(num) != self.sum_num_digest or _digest(den) != self.sum_den_digest:
            raise CertificateError("exact sum digest mismatch")
        # r = 1 + 1/prod(S) is a member below 2 structurally: the primes in
        # S are distinct, so the denominator is squarefree and r >= 1 lies
        # in the group tail (running the generic membership test would
        # trial-factor a denominator with millions of digits)
        if len(set(primes)) != len(primes):
            raise CertificateError("replayed prime set has repetitions")
        if den <= 1:
            raise CertificateError("companion element r is not below 2")

    def to_json(self) -> dict:
        return {
            "kind": "prime-sum-refutation",
            "q": str(self.q),
            "excluded": list(self.excluded),
            "count": self.count,
            "last_prime": self.last_prime,
            "sum_num_digest": self.sum_num_digest,
            "sum_den_digest": self.sum_den_digest,
        }

    @staticmethod
    def from_json(obj: dict) -> "PrimeSumCertificate":
        return PrimeSumCertificate(
            Fraction(obj["q"]),
            tuple(obj["excluded"]),
            obj["count"],
            obj["last_prime"],
            obj["sum_num_digest"],
            obj["sum_den_digest"],
        )


def _digest(n: int) -> str:
    """Hex form for small integers, a hash beyond that (hex conversion is
    linear-time and exempt from the interpreter's str-digit limit)."""
    h = hex(n)
    if len(h) <= 66:
        return h
    return "sha256:" + hashlib.sha256(h.encode()).hexdigest()


def _sum_reciprocals(primes: list[int]) -> tuple[int, int]:
    """Exact numerator/denominator of sum(1/p), by balanced tree summation.

    The result is already in lowest terms: the denominator is the product
    of the distinct primes and the numerator is a unit modulo each.
    """
    def rec(lo: int, hi: int) -> tuple[int, int]:
        if hi - lo == 1:
            return (1, primes[lo])
        mid = (lo + hi) // 2
        n1, d1 = rec(lo, mid)
        n2, d2 = rec(mid, hi)
        return (n1 * d2 + n2 * d1, d1 * d2)

    return rec(0, len(primes))


def _greedy_primes(excluded: Iterable[int], count: int) -> list[int]:
    skip = set(excluded)
    out: list[int] = []
    for p in iter_primes():
        if p in skip:
            continue
        out.append(p)
        if len(out) == count:
            return out
    return out


def prime_sum_refutation(
    q: Fraction, prime_cap: Optional[int] = None
) -> PrimeSumCertificate:
    """Construct the greedy refuting prime set for candidate q: the minimal
    prefix of the primes outside the support of d(q) whose reciprocal sum
    exceeds q + 2, verified by exact rational arithmetic.

    A float scan locates the crossover; the boundary is then confirmed
    exactly with balanced tree sums.  ``prime_cap`` aborts early when the
    scan would exceed it (the construction for small q needs millions of
    primes; see verify_almost_not_nearly for estimates).
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError("candidates must be nonzero members")
    m = almost_not_nearly_instance()
    if not contains(m, rational(q)).is_in:
        raise NotAMember(f"{q} is not a member")
    excluded = prime_support(q.denominator)
    threshold = q + 2
    tfloat = float(threshold)
    primes: list[int] = []
    approx = 0.0
    skip = set(excluded)
    for p in iter_primes():
        if p in skip:
            continue
        primes.append(p)
        approx += 1.0 / p
        if approx > tfloat + 1e-7:
            break
        if prime_cap is not None and p > prime_cap:
            raise RuntimeError(
                f"candidate {q} needs primes beyond the cap {prime_cap}"
            )
    # exact confirmation at the float crossover, stepping as needed
    num, den = _sum_reciprocals(primes)
    while not num * threshold.denominator > threshold.numerator * den:
        nxt = _next_prime_skipping(primes[-1], skip)
        primes.append(nxt)
        num = num * nxt + den
        den = den * nxt
    while len(primes) > 1:
        num2 = num - den // primes[-1]
        if num2 * threshold.denominator > threshold.numerator * den:
            dropped = primes.pop()
            num, den = num2 // dropped, den // dropped
        else:
            break
    cert = PrimeSumCertificate(
        q=q,
        excluded=excluded,
        count=len(primes),
        last_prime=primes[-1],
        sum_num_digest=_digest(num),
        sum_den_digest=_digest(den),
    )
    cert.verify()
    return cert


def _next_prime_skipping(after: int, skip: set[int]) -> int:
    for p in iter_primes():
        if p > after and p not in skip:
            return p
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class NearRefutationReport:
    certificates: tuple[PrimeSumCertificate, ...]
    skipped: tuple[tuple[str, str], ...]  # (candidate, reason)

    def to_json(self) -> dict:
        return {
            "kind": "near-atomicity-refutation-report",
            "certificates": [c.to_json() for c in self.certificates],
            "skipped": [list(s) for s in self.skipped],
        }


def verify_almost_not_nearly(
    prime_window: int,
    candidates: Optional[Iterable[Fraction]] = None,
    prime_cap: int = 200_000,
) -> NearRefutationReport:
    """Refute near-atomicity for candidate companions q whose denominator
    support lies in the first ``prime_window`` primes.

    Candidates whose greedy prime set would exceed ``prime_cap`` (the
    crossover grows like exp(exp(q + 2 - sum of excluded reciprocals)))
    are reported as skipped rather than silently truncated; pass a larger
    cap to certify them.
    """
    from .primes import first_primes

    if candidates is None:
        candidates = [Fraction(1, p) for p in first_primes(prime_window)]
    done: list[PrimeSumCertificate] = []
    skipped: list[tuple[str, str]] = []
    for q in candidates:
        q = Fraction(q)
        if q == 0:
            raise ValueError("the candidate must be a nonzero member")
        est = _crossover_estimate(q)
        if est > prime_cap:
            skipped.append(
                (str(q), f"estimated crossover near prime {est:d} exceeds the cap")
            )
            continue
        done.append(prime_sum_refutation(q, prime_cap=None))
    return NearRefutationReport(tuple(done), tuple(skipped))


def _crossover_estimate(q: Fraction) -> int:
    """Rough location of the prime where the reciprocal sum outside the
    support of d(q) passes q + 2 (Mertens asymptotics)."""
    import math

    mertens = 0.26149721
    lost = sum(1.0 / p for p in prime_support(q.denominator))
    target = float(q) + 2.0 - mertens + lost
    return int(math.exp(math.exp(target))) + 1


# ---------------------------------------------------------------------------
# nearly-atomic verification


@dataclass(frozen=True)
class NearlyAtomicReport:
    decompositions: tuple[dict, ...]
    rational_obstructions: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "kind": "nearly-atomic-report",
            "decompositions": list(self.decompositions),
            "rational_obstructions": list(self.rational_obstructions),
        }


def verify_nearly_atomic(depth: int = DEFAULT_DEPTH) -> NearlyAtomicReport:
    """For members r = q0 + (atoms) of the nearly-atomic instance, verify
    the exact atomic decomposition of alpha + r as phi(q0) copies of
    (alpha + q0)/phi(q0) plus the atoms; and certify that no nonzero
    rational member decomposes into window atoms (every atom contributes
    a positive alpha-coordinate)."""
    alpha = triple(0, 1, 0)
    qs = calkin_wilf(depth)
    decomps: list[dict] = []
    for idx, q0 in enumerate(qs):
        p = nearly_phi(q0)
        head = nearly_atom(q0)
        extra = [nearly_atom(qs[(idx + 1) % len(qs)])] if len(qs) > 1 else []
        r = triple(q0, 0, 0) + sum(extra, zero(head.group))
        lhs = alpha + r
        rhs = head.scale(p)
        for at in extra:
            rhs = rhs + at
        if lhs != rhs:
            raise CertificateError(f"decomposition fails for q0 = {q0}")
        decomps.append(
            {
                "q0": str(q0),
                "phi": p,
                "extra_atoms": len(extra),
                "identity": f"alpha + r = {p}*[(alpha+{q0})/{p}] + extras",
            }
        )
    obstructions: list[dict] = []
    for x in qs:
        if x == 0:
            continue
        # a decomposition of the rational x into atoms needs the atoms'
        # alpha-coordinates to sum to 0; each is 1/phi(q) > 0
        obstructions.append(
            {
                "member": str(x),
                "alpha_coordinate": "0",
                "conclusion": "no decomposition: every atom adds 1/phi(q) > 0",
            }
        )
    return NearlyAtomicReport(tuple(decomps), tuple(obstructions))


# ---------------------------------------------------------------------------
# failure of strong atomicity for the two-direction construction


@dataclass(frozen=True)
class CommonDivisorReplay:
    divisor: Fraction
    exponent: int
    shifted: Fraction  # divisor + q^k
    phi: int

    def to_json(self) -> dict:
        return {
            "divisor": str(self.divisor),
            "exponent": self.exponent,
            "shifted": str(self.shifted),
            "phi": self.phi,
        }


def verify_not_strongly_atomic(
    q: Fraction, depth: int = DEFAULT_DEPTH
) -> tuple[CommonDivisorReplay, ...]:
    """For candidate common divisors d of alpha and beta (elements of the
    rational window), find k <= depth with d + q^k still below alpha, and
    replay the identities showing q^k is a nonzero common divisor of
    alpha - d and beta - d.  Reports are per-divisor; a missing k within
    the depth raises (the construction gives no a-priori bound on k)."""
    q = Fraction(q)
    out = []
    domain = alphabeta_domain(q, depth)
    alpha = triple(0, 1, 0)
    beta = triple(0, 0, 1)
    for d in domain[: max(4, depth // 2)]:
        k = None
        for kk in range(1, depth + 1):
            u = d + q**kk
            if u.numerator**2 < 2 * u.denominator**2:  # u < sqrt2
                k = kk
                break
        if k is None:
            raise RuntimeError(
                f"no exponent within depth {depth} keeps {d} + q^k below alpha"
            )
        u = d + q**k
        p = alphabeta_phi(q, u)
        lhs_a = alpha - triple(d, 0, 0)
        rhs_a = alphabeta_atom(q, u, "alpha").scale(p) + triple(q**k, 0, 0)
        lhs_b = beta - triple(d, 0, 0)
        rhs_b = alphabeta_atom(q, u, "beta").scale(p) + triple(q**k, 0, 0)
        if lhs_a != rhs_a or lhs_b != rhs_b:
            raise CertificateError(f"common-divisor identity fails at d = {d}")
        out.append(CommonDivisorReplay(d, k, u, p))
    return tuple(out)


# ---------------------------------------------------------------------------
# certificate file verification


def verify_certificate_json(obj: dict) -> str:
    """Re-check a serialized certificate; returns its kind on success."""
    kind = obj.get("kind")
    if kind == "ascending-chain":
        ChainCertificate.from_json(obj).verify()
    elif kind == "hereditary-break":
        HereditaryBreakCertificate.from_json(obj).verify()
    elif kind == "quasi-witness":
        SubatomicWitness.from_json(obj).verify()
    elif kind == "prime-sum-refutation":
        PrimeSumCertificate.from_json(obj).verify()
    else:
        raise CertificateError(f"unknown certificate kind {kind!r}")
    return kind
