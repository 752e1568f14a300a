"""Exact checkers for retrieval plans: privacy, decodability, cost.

The privacy condition is distributional: the physical queries a server
receives must look the same no matter which of its own stored messages is
wanted.  Because the only private randomness is one uniform permutation per
message, the induced query distribution at one server can be enumerated
exactly; probabilities are Fractions and verdicts are exact, never sampled.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

from .errors import EmptyInput, EnumerationTooLarge, LocalPIRError
from .field import Field
from .graphs import Graph
from .scheme import (
    Atom,
    Randomness,
    SchemePlan,
    answer,
    decode,
    et_download_cost,
    sample_randomness,
    to_physical,
)

DEFAULT_CAP = 10**6

Fingerprint = tuple[tuple[tuple[int, int], ...], ...]


def query_fingerprint(atoms: tuple[Atom, ...], rnd: Randomness) -> Fingerprint:
    """What a server actually observes, canonicalized.

    References are mapped to physical positions, each atom's references are
    sorted, and the atoms themselves are sorted, so two query lists that
    differ only in presentation order produce the same fingerprint.
    """
    mapped = [tuple(sorted((m, rnd.physical(m, p)) for (m, p) in atom))
              for atom in atoms]
    return tuple(sorted(mapped))


def enumerate_randomness(message_ids, length: int, cap: int = DEFAULT_CAP):
    """Yield every tuple of per-message permutations, each exactly once.

    All listed messages share symbol count `length`.  Raises
    EnumerationTooLarge before yielding anything if (length!)^|ids|
    exceeds cap.
    """
    ids = tuple(sorted(set(message_ids)))
    total = factorial(length) ** len(ids)
    if total > cap:
        raise EnumerationTooLarge(
            f"randomness space has {total} points, cap is {cap}")
    spaces = [itertools.permutations(range(1, length + 1)) for _ in ids]
    for combo in itertools.product(*spaces):
        yield Randomness(dict(zip(ids, combo)))


def fingerprint_distribution(plan: SchemePlan, server: int,
                             cap: int = DEFAULT_CAP) -> dict[Fingerprint, Fraction]:
    """Exact distribution of the server's observed queries.

    Only permutations of messages referenced at this server matter; the
    rest marginalize out, which keeps the enumeration small.
    """
    atoms = plan.atoms_at(server)
    msgs = sorted({m for atom in atoms for (m, _) in atom})
    total = prod(factorial(plan.lengths[m]) for m in msgs)
    if total > cap:
        raise EnumerationTooLarge(
            f"server {server} needs {total} permutation points, cap is {cap}")
    counts: dict[Fingerprint, int] = {}
    spaces = [itertools.permutations(range(1, plan.lengths[m] + 1))
              for m in msgs]
    for combo in itertools.product(*spaces):
        rnd = Randomness(dict(zip(msgs, combo)))
        fp = query_fingerprint(atoms, rnd)
        counts[fp] = counts.get(fp, 0) + 1
    return {fp: Fraction(c, total) for fp, c in counts.items()}


def _fingerprint_json(fp: Fingerprint | None):
    if fp is None:
        return None
    return [[list(ref) for ref in atom] for atom in fp]


@dataclass
class PrivacyReport:
    server: int
    thetas: tuple[int, ...]
    verdict: str                       # "PASS" or "FAIL"
    support_size: int
    counterexample: Fingerprint | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "PASS"

    def to_json(self) -> dict:
        return {"server": self.server, "thetas": list(self.thetas),
                "verdict": self.verdict, "support_size": self.support_size,
                "counterexample": _fingerprint_json(self.counterexample)}


def privacy_check(plans: dict[int, SchemePlan], g: Graph, server: int,
                  cap: int = DEFAULT_CAP) -> PrivacyReport:
    """Decide whether `server` can tell apart the messages it stores.

    Compares the exact query distribution at this server across every
    desired message the server replicates.  PASS means all distributions
    are identical; FAIL carries one fingerprint whose probability differs.
    """
    thetas = g.index_set(server)
    if not plans:
        raise EmptyInput("no plans given")
    for t in thetas:
        if t not in plans:
            raise EmptyInput(f"no plan for desired message {t}")
    dists = {t: fingerprint_distribution(plans[t], server, cap)
             for t in thetas}
    if not thetas:
        return PrivacyReport(server, (), "PASS", 0)
    reference = dists[thetas[0]]
    support: set[Fingerprint] = set()
    for d in dists.values():
        support |= set(d)
    for fp in sorted(support):
        probs = {t: dists[t].get(fp, Fraction(0)) for t in thetas}
        if len(set(probs.values())) > 1:
            return PrivacyReport(server, thetas, "FAIL", len(support), fp)
    return PrivacyReport(server, thetas, "PASS", len(support))


@dataclass
class ProbeReport:
    """Outcome of testing the stricter hide-everything condition."""

    server: int
    reference_theta: int
    distinguishable: tuple[int, ...]

    @property
    def canonical(self) -> bool:
        return not self.distinguishable

    def to_json(self) -> dict:
        return {"server": self.server,
                "reference_theta": self.reference_theta,
                "distinguishable": list(self.distinguishable),
                "canonical": self.canonical}


def canonical_privacy_probe(plans: dict[int, SchemePlan], g: Graph,
                            server: int,
                            cap: int = DEFAULT_CAP) -> ProbeReport:
    """Check whether the server's view hides the desired message globally.

    The local condition only compares messages the server stores; this
    probe compares every message against the first stored one and lists
    the ones the server could tell apart.  A non-empty list shows the
    scheme is local-private but not private in the classical sense.
    """
    thetas = g.index_set(server)
    if not thetas:
        return ProbeReport(server, 0, ())
    for t in g.messages:
        if t not in plans:
            raise EmptyInput(f"no plan for desired message {t}")
    reference_theta = thetas[0]
    reference = fingerprint_distribution(plans[reference_theta], server, cap)
    distinguishable = []
    for t in g.messages:
        if t == reference_theta:
            continue
        if fingerprint_distribution(plans[t], server, cap) != reference:
            distinguishable.append(t)
    return ProbeReport(server, reference_theta, tuple(distinguishable))


@dataclass
class DecodeReport:
    trials: int
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return "PASS" if self.ok else "FAIL"

    def to_json(self) -> dict:
        return {"trials": self.trials, "verdict": self.verdict,
                "failures": self.failures}


def decode_check(plans: dict[int, SchemePlan], g: Graph, q: int = 2,
                 seeds: int = 32) -> DecodeReport:
    """Run every plan end to end on random storage and compare the output.

    Each (message, seed) pair draws fresh storage contents and fresh user
    randomness, executes the queries against honest servers, decodes, and
    checks the result equals the stored message symbol for symbol.
    """
    fld = Field(q)
    report = DecodeReport(trials=0)
    for theta in sorted(plans):
        plan = plans[theta]
        for seed in range(seeds):
            report.trials += 1
            rng = random.Random(f"decode:{theta}:{seed}")
            storage = {k: [rng.randrange(q) for _ in range(plan.lengths[k])]
                       for k in g.messages}
            try:
                rnd = sample_randomness(plan, rng, seed)
                physical = to_physical(plan, rnd)
                answers = {
                    server: answer(atoms,
                                   {k: storage[k]
                                    for k in g.index_set(server)}, fld)
                    for server, atoms in physical.items()}
                got = decode(plan, answers, rnd, fld)
            except LocalPIRError as exc:
                report.failures.append(
                    {"theta": theta, "seed": seed,
                     "reason": f"{type(exc).__name__}: {exc}"})
                continue
            if got != storage[theta]:
                report.failures.append(
                    {"theta": theta, "seed": seed,
                     "reason": f"decoded {got}, stored {storage[theta]}"})
    return report


@dataclass
class CostReport:
    per_theta: dict[int, int]
    per_server: dict[int, Fraction]
    expected_download: Fraction
    rate: Fraction
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "per_theta": {str(t): d for t, d in self.per_theta.items()},
            "per_server": {str(s): [c.numerator, c.denominator]
                           for s, c in self.per_server.items()},
            "expected_download": [self.expected_download.numerator,
                                  self.expected_download.denominator],
            "rate": [self.rate.numerator, self.rate.denominator],
            "mismatches": self.mismatches,
        }


def cost_audit(plans: dict[int, SchemePlan], g: Graph) -> CostReport:
    """Count downloads and cross-check them against closed forms.

    Rate is total message length over total download, messages weighted
    equally (the desired index is uniform).
    """
    per_theta = {t: plans[t].download_count() for t in sorted(plans)}
    k = len(per_theta)
    if k == 0:
        raise EmptyInput("no plans given")
    per_server = {
        s: Fraction(sum(len(plans[t].atoms_at(s)) for t in plans), k)
        for s in g.vertices}
    total = sum(per_theta.values())
    lengths = sum(plans[t].length for t in plans)
    mismatches = []
    for t, plan in plans.items():
        if plan.kind == "et":
            expect = et_download_cost(plan.meta["deg_i"], plan.meta["deg_j"],
                                      plan.meta["t_i"], plan.meta["t_j"])
            if per_theta[t] != expect:
                mismatches.append(
                    f"theta {t}: downloaded {per_theta[t]}, "
                    f"closed form says {expect}")
        elif plan.kind == "bipartite":
            expect = g.degree(plan.meta["cover_vertex"]) * plan.length
            if per_theta[t] != expect:
                mismatches.append(
                    f"theta {t}: downloaded {per_theta[t]}, "
                    f"cover form says {expect}")
    return CostReport(per_theta, per_server, Fraction(total, k),
                      Fraction(lengths, total), mismatches)


@dataclass
class SchemeReport:
    privacy: list[PrivacyReport]
    decode: DecodeReport
    cost: CostReport

    @property
    def ok(self) -> bool:
        return (all(r.ok for r in self.privacy)
                and self.decode.ok and self.cost.ok)

    @property
    def verdict(self) -> str:
        return "PASS" if self.ok else "FAIL"

    def to_json(self) -> dict:
        return {"verdict": self.verdict,
                "privacy": [r.to_json() for r in self.privacy],
                "decode": self.decode.to_json(),
                "cost": self.cost.to_json()}


def check_scheme(plans: dict[int, SchemePlan], g: Graph, q: int = 2,
                 seeds: int = 8, cap: int = DEFAULT_CAP) -> SchemeReport:
    """Full audit: privacy at every server, decoding, and cost accounting."""
    privacy = [privacy_check(plans, g, s, cap) for s in g.vertices]
    dec = decode_check(plans, g, q, seeds)
    cost = cost_audit(plans, g)
    return SchemeReport(privacy, dec, cost)
