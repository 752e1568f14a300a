"""Exact capacity bounds for local retrieval on replicated storage.

All stored values are exact: rationals are `fractions.Fraction`, and the
handful of square-root expressions are kept symbolically as
coeff / sqrt(radicand) pairs compared by squaring.  Floats appear only in
reports as approximations and in third-party comparison literals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

from .errors import (
    EmptyInput,
    InvalidFamilyParams,
    NotBipartite,
    TOutOfRange,
    UnsupportedFamily,
)
from .graphs import Graph, bipartition, components, detect_family


@dataclass(frozen=True)
class BoundValue:
    """Exact nonnegative value coeff / sqrt(radicand).

    Rational values have radicand 1.  Square factors are folded into the
    coefficient at construction so equal values compare equal.
    """

    coeff: Fraction
    radicand: int = 1

    def __post_init__(self):
        coeff = Fraction(self.coeff)
        if coeff < 0 or self.radicand < 1:
            raise InvalidFamilyParams("bound values must be nonnegative")
        r, s = self.radicand, 1
        f = 2
        while f * f <= r:
            while r % (f * f) == 0:
                r //= f * f
                s *= f
            f += 1
        object.__setattr__(self, "coeff", coeff / s if r != self.radicand else coeff)
        object.__setattr__(self, "radicand", r)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise InvalidFamilyParams(f"{self} is irrational")
        return self.coeff

    def as_float(self) -> float:
        return float(self.coeff) / math.sqrt(self.radicand)

    def _squared(self) -> Fraction:
        return self.coeff * self.coeff / self.radicand

    def __lt__(self, other):
        return self._squared() < _as_bound(other)._squared()

    def __le__(self, other):
        return self._squared() <= _as_bound(other)._squared()

    def __gt__(self, other):
        return self._squared() > _as_bound(other)._squared()

    def __ge__(self, other):
        return self._squared() >= _as_bound(other)._squared()

    def __str__(self):
        if self.is_rational:
            return str(self.coeff)
        num, den = self.coeff.numerator, self.coeff.denominator
        if den == 1:
            return f"{num}/sqrt({self.radicand})"
        return f"{num}/({den}*sqrt({self.radicand}))"

    def to_json(self) -> dict:
        return {"num": self.coeff.numerator, "den": self.coeff.denominator,
                "radicand": self.radicand, "approx": self.as_float()}


def _as_bound(value) -> BoundValue:
    if isinstance(value, BoundValue):
        return value
    return BoundValue(Fraction(value))


@dataclass(frozen=True)
class Comparator:
    """A cited capacity value for the non-local (fully private) problem."""

    value: float | None
    source: str
    note: str = ""

    def to_json(self) -> dict:
        return {"value": self.value, "source": self.source, "note": self.note}


@dataclass
class BoundReport:
    family: str
    n: int
    lower: BoundValue
    upper: BoundValue
    exact: bool
    optimizer: tuple[int, int] | None = None
    cited_lower: BoundValue | None = None
    cited_note: str = ""
    comparators: list[Comparator] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "family": self.family,
            "n": self.n,
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "exact": self.exact,
            "optimizer": (None if self.optimizer is None else
                          {"t_i": self.optimizer[0], "t_j": self.optimizer[1]}),
            "pir_comparators": [c.to_json() for c in self.comparators],
        }
        if self.cited_lower is not None:
            out["cited_lower"] = self.cited_lower.to_json()
            out["cited_note"] = self.cited_note
        return out


# --- achievable-rate arithmetic ---------------------------------------------

def union_capacity(parts) -> Fraction:
    """Rate of a scheme assembled from per-component schemes.

    parts: iterable of (message_count, message_length, expected_download).
    Value = sum(K_c * L_c) / sum(K_c * E[D_c]).
    """
    parts = list(parts)
    if not parts:
        raise EmptyInput("no components given")
    num = sum(Fraction(k) * Fraction(l) for (k, l, _) in parts)
    den = sum(Fraction(k) * Fraction(d) for (k, _, d) in parts)
    return Fraction(num, den)


def lambda_weight(d_i: int, d_j: int, t_i: int, t_j: int) -> Fraction:
    """Share of the desired message delivered by the first endpoint."""
    _check_t(t_i, d_i)
    _check_t(t_j, d_j)
    b_i = comb(d_i - 1, t_i - 1)
    b_j = comb(d_j - 1, t_j - 1)
    return Fraction(b_i, b_i + b_j)


def et_rate(d_i: int, d_j: int, t_i: int, t_j: int) -> Fraction:
    """Exact rate of the t-sum plan: message length over download."""
    from .scheme import et_download_cost, subpacketization

    return Fraction(subpacketization(d_i, d_j, t_i, t_j),
                    et_download_cost(d_i, d_j, t_i, t_j))


def et_lower_bound(d_i: int, d_j: int) -> tuple[Fraction, int, int]:
    """Best t-sum rate over every (t_i, t_j), by brute force.

    Ties resolve to the lexicographically smallest pair.  The search is
    integer-only: the rate for (t_i, t_j) equals
    t_i*t_j*(b_i+b_j) / (g_i*t_j + g_j*t_i) with b = C(d-1, t-1) and
    g = b*(d + t*(t-1)).
    """
    if d_i < 1 or d_j < 1:
        raise TOutOfRange(f"degrees must be >= 1, got ({d_i},{d_j})")
    bs_i = [comb(d_i - 1, t - 1) for t in range(1, d_i + 1)]
    bs_j = [comb(d_j - 1, t - 1) for t in range(1, d_j + 1)]
    gs_i = [b * (d_i + t * (t - 1)) for t, b in enumerate(bs_i, start=1)]
    gs_j = [b * (d_j + t * (t - 1)) for t, b in enumerate(bs_j, start=1)]
    best_num, best_den = 0, 1
    best_pair = (1, 1)
    for t_i in range(1, d_i + 1):
        for t_j in range(1, d_j + 1):
            num = t_i * t_j * (bs_i[t_i - 1] + bs_j[t_j - 1])
            den = gs_i[t_i - 1] * t_j + gs_j[t_j - 1] * t_i
            if num * best_den > best_num * den:
                best_num, best_den, best_pair = num, den, (t_i, t_j)
    return Fraction(best_num, best_den), best_pair[0], best_pair[1]


def equal_degree_bound(d: int) -> Fraction:
    """Closed-form best t-sum rate when both endpoints have degree d.

    The objective 1/(d/t + t - 1) peaks at an integer next to sqrt(d), so
    only floor and ceiling need checking.
    """
    if d < 1:
        raise TOutOfRange(f"degree must be >= 1, got {d}")
    root = isqrt(d)
    candidates = {root, root if root * root == d else root + 1}
    return max(Fraction(t, d + t * (t - 1)) for t in candidates if t >= 1)


def bipartite_lower_bound(g: Graph, partition=None) -> Fraction:
    """Rate of the cover plan: K over the smaller sum of squared degrees."""
    if partition is None:
        partition = bipartition(g)
        if partition is None:
            raise NotBipartite("graph is not two-colorable")
    sums = [sum(g.degree(v) ** 2 for v in part) for part in partition]
    return Fraction(g.K, min(sums))


def _check_t(t: int, deg: int) -> None:
    if not 1 <= t <= deg:
        raise TOutOfRange(f"t={t} outside 1..{deg}")


# --- per-family reports ------------------------------------------------------

def family_bounds(name: str, n: int) -> BoundReport:
    """Best known lower/upper capacity bounds for a named family.

    `cited_lower` carries the published square-root simplification where
    one exists; the `lower` field is always the sharper exact value the
    package can actually certify with a scheme.
    """
    if name == "cycle":
        if n < 3:
            raise InvalidFamilyParams(f"cycle needs n >= 3, got {n}")
        half = BoundValue(Fraction(1, 2))
        return BoundReport(
            "cycle", n, half, half, True,
            comparators=[Comparator(float(Fraction(2, n + 1)), "BU19",
                                    f"full privacy: 2/(n+1) = {Fraction(2, n + 1)}")])
    if name == "path":
        if n < 2:
            raise InvalidFamilyParams(f"path needs n >= 2, got {n}")
        lower = Fraction(n - 1, 2 * n - 4) if n % 2 else Fraction(n - 1, 2 * n - 3)
        upper = Fraction(n - 1, 2 * n - 4) if n >= 3 else Fraction(1)
        return BoundReport(
            "path", n, BoundValue(lower), BoundValue(upper), lower == upper,
            comparators=[Comparator(float(Fraction(2, n)), "journal2025",
                                    f"full privacy: 2/n = {Fraction(2, n)}")])
    if name == "star":
        if n < 2:
            raise InvalidFamilyParams(f"star needs n >= 2, got {n}")
        one = BoundValue(Fraction(1))
        return BoundReport(
            "star", n, one, one, True,
            comparators=[Comparator(None, "SGT23",
                                    "full privacy: Theta(1/sqrt(n))")])
    if name == "complete":
        if n < 2:
            raise InvalidFamilyParams(f"complete needs n >= 2, got {n}")
        value, t_i, t_j = et_lower_bound(n - 1, n - 1)
        lower = BoundValue(value)
        comparators = _complete_comparators(n)
        return BoundReport(
            "complete", n, lower, BoundValue(Fraction(1)), value == 1,
            optimizer=(t_i, t_j),
            cited_lower=BoundValue(Fraction(1, 2), n - 1),
            cited_note="closed form 1/(2*sqrt(n-1)), always at or below "
                       "the exact t-sum optimum",
            comparators=comparators)
    if name == "complete_bipartite":
        if n < 2 or n % 2:
            raise InvalidFamilyParams(
                f"balanced complete bipartite needs even n >= 2, got {n}")
        d = n // 2
        value, t_i, t_j = et_lower_bound(d, d)
        cover = Fraction(1, d)
        lower, optimizer = ((value, (t_i, t_j)) if value >= cover
                            else (cover, None))
        return BoundReport(
            "complete_bipartite", n, BoundValue(lower),
            BoundValue(Fraction(1)), lower == 1, optimizer=optimizer,
            cited_lower=BoundValue(Fraction(2), n),
            cited_note="published closed form 2/sqrt(n); exceeds what the "
                       "t-sum scheme attains, kept for reference only",
            comparators=[
                Comparator(float(Fraction(4, 3 * n)), "krishnan_graph",
                           f"full privacy lower: 4/(3n) = {Fraction(4, 3 * n)}"),
                Comparator(1.0 / (n * (math.exp(0.5) - 1)), "gePIR",
                           "full privacy upper: 1/(n(e^0.5 - 1))"),
            ])
    raise UnsupportedFamily(f"no bounds on record for family {name!r}")


def _complete_comparators(n: int) -> list[Comparator]:
    if n == 4:
        return [Comparator(0.35, "gePIR", "full privacy lower (cited)"),
                Comparator(0.3529, "gePIR", "full privacy upper (cited)")]
    return [
        Comparator(float(Fraction(4, 3 * n)), "gePIR",
                   "full privacy lower: (4/3 - o(1))/n, o(1) dropped"),
        Comparator(1.0 / (n * (math.e - 2)), "gePIR",
                   "full privacy upper: 1/(n(e - 2))"),
    ]


def graph_bounds(g: Graph) -> BoundReport:
    """Bounds for an arbitrary storage graph.

    Recognized family members get their family report.  Otherwise the
    lower bound is the best rate among the schemes this package can build
    (t-sum at the tuned subset sizes when every edge joins the same degree
    pair, singleton sums otherwise, and the cover plan when two-colorable);
    the upper bound is the trivial 1 unless composition of exact component
    capacities applies.
    """
    comps = components(g)
    if len(comps) > 1:
        return _union_graph_bounds(g, comps)
    det = detect_family(g)
    if det is not None:
        name, params = det
        if name == "complete_bipartite":
            if params["a"] == params["b"]:
                return family_bounds(name, params["a"] + params["b"])
        else:
            return family_bounds(name, params["n"])
    candidates: list[tuple[Fraction, tuple[int, int] | None]] = []
    pairs = {tuple(sorted((g.degree(u), g.degree(v)))) for (u, v) in g.edges}
    if len(pairs) == 1:
        d_small, d_large = pairs.pop()
        value, t_i, t_j = et_lower_bound(d_small, d_large)
        candidates.append((value, (t_i, t_j)))
    else:
        degsq = sum(d * d for d in g.degrees())
        candidates.append((Fraction(2 * g.K, degsq), (1, 1)))
    parts = bipartition(g)
    if parts is not None:
        candidates.append((bipartite_lower_bound(g, parts), None))
    value, optimizer = max(candidates, key=lambda c: c[0])
    return BoundReport("custom", g.n_vertices, BoundValue(value),
                       BoundValue(Fraction(1)), value == 1,
                       optimizer=optimizer)


def _union_graph_bounds(g: Graph, comps) -> BoundReport:
    from .scheme import build_plan, default_component_config

    parts = []
    all_exact = True
    for comp in comps:
        sub = graph_bounds(comp.graph)
        all_exact = all_exact and sub.exact
        cfg = default_component_config(comp.graph)
        plans = [build_plan(comp.graph, cfg, k) for k in comp.graph.messages]
        length = plans[0].lengths[plans[0].theta]
        expected = Fraction(sum(p.download_count() for p in plans),
                            comp.graph.K)
        parts.append((comp.graph.K, length, expected))
    value = union_capacity(parts)
    lower = BoundValue(value)
    upper = lower if all_exact else BoundValue(Fraction(1))
    return BoundReport("union", g.n_vertices, lower, upper, all_exact)
