"""
Exhaustive verification of equidistribution and pointwise transport claims.

Every check enumerates S_n for ``n = 0 .. n_max`` and produces a
:class:`VerificationReport`.  A failing report carries the smallest
counterexample: smallest ``n`` first, then the lexicographically least
permutation.  Reports whose claim depends on the literal (unpublished here)
word bijection are marked non-binding and never affect the exit status.
"""

from __future__ import annotations

import json
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import bijections as bij
from .decomp import (
    ShuffleClassId, der, desar, dez, dez_set, enumerate_derangements,
    enumerate_desarrangements, mafz, maf, maf_by_offsets, mag, maz, pix, pix_set,
    pos, zder, zder_inverse, zdesar, zdesar_by_inverse,
    zdesar_inverse, zero_set,
)
from .perm import (
    des, des_set, fix, fix_set, ides_set, imaj, inv, inverse, maj,
    maj_mutation, permutations,
)
from .qseries import certify_gf_q, combinatorial_gf, gf_coefficients_t

__all__ = [
    "STATISTICS", "StatProfile", "Distribution", "VerificationReport",
    "BudgetExceeded", "enumeration_limit", "distribution", "partial_distribution",
    "check_generating_function", "check_pair_equidistribution", "check_triple_equidistribution",
    "check_structural_maps", "check_oracles", "check_derangement_counts",
    "run_suites", "SUITES", "binding_ok", "format_records", "format_table",
    "mutation_probe",
]

STATISTICS: dict[str, Callable] = {
    "fix": fix, "des": des, "maj": maj, "inv": inv, "imaj": imaj,
    "pix": pix, "maf": maf, "maz": maz, "mag": mag, "dez": dez,
    "FIX": fix_set, "DES": des_set, "IDES": ides_set, "DEZ": dez_set,
    "PIX": pix_set, "Der": der, "Desar": desar,
}

BUDGET_ENV = "FIXMAHONIAN_MAX_N"
DEFAULT_LIMIT = 8


class BudgetExceeded(ValueError):
    pass


def enumeration_limit() -> int:
    """Largest n enumerated without an explicit override (env ``FIXMAHONIAN_MAX_N``)."""
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_LIMIT


def _guard(n: int, allow_large: bool) -> None:
    limit = enumeration_limit()
    if n > limit and not allow_large:
        raise BudgetExceeded(
            f"n={n} needs {math.factorial(n)} permutations; the limit is n={limit} "
            f"(set {BUDGET_ENV} or pass allow_large)")


class _Components:
    """Picklable extractor returning a tuple of named statistics."""

    def __init__(self, names: Sequence[str]):
        unknown = [name for name in names if name not in STATISTICS]
        if unknown:
            raise ValueError(f"unknown statistic(s): {', '.join(unknown)}")
        self.names = tuple(names)

    def __call__(self, p):
        return tuple(STATISTICS[name](p) for name in self.names)

    def __getstate__(self):
        return self.names

    def __setstate__(self, names):
        self.names = names


@dataclass(frozen=True)
class StatProfile:
    name: str
    extractor: Callable

    @classmethod
    def of(cls, names: str | Sequence[str]) -> StatProfile:
        """Profile from ``"fix,maj"`` or ``("fix", "maj")``."""
        if isinstance(names, str):
            names = [s.strip() for s in names.split(",") if s.strip()]
        return cls("(" + ",".join(names) + ")", _Components(names))


@dataclass
class Distribution:
    domain_size: int = 0
    counts: Counter = field(default_factory=Counter)

    def __add__(self, other: Distribution) -> Distribution:
        return Distribution(self.domain_size + other.domain_size, self.counts + other.counts)

    def __eq__(self, other):
        return (isinstance(other, Distribution) and self.domain_size == other.domain_size
                and self.counts == other.counts)


def partial_distribution(n: int, profile: StatProfile, first_letters: Iterable[int]) -> Distribution:
    """Distribution over the permutations of S_n beginning with one of ``first_letters``."""
    starts = set(first_letters)
    counts = Counter()
    size = 0
    extract = profile.extractor
    for p in permutations(n):
        if n == 0 or p[0] in starts:
            counts[extract(p)] += 1
            size += 1
    return Distribution(size, counts)


def distribution(n: int, profile: StatProfile, workers: int = 1,
                 allow_large: bool = False) -> Distribution:
    _guard(n, allow_large)
    if workers <= 1 or n < 2:
        return partial_distribution(n, profile, range(1, n + 1))
    chunks = [list(range(k, n + 1, workers)) for k in range(1, min(workers, n) + 1)]
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(partial_distribution, [n] * len(chunks),
                              [profile] * len(chunks), chunks))
    total = Distribution()
    for part in parts:
        total = total + part
    return total


@dataclass
class VerificationReport:
    claim: str
    description: str
    n_min: int
    n_max: int
    status: str  # "pass" | "fail" | "informative"
    binding: bool = True
    witness: dict | None = None
    detail: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, ShuffleClassId):
        return str(value)
    return value


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def _pointwise(claim: str, description: str, n_max: int, check: Callable,
               n_min: int = 0, binding: bool = True,
               domain: Callable[[int], Iterable] = permutations) -> VerificationReport:
    """Run ``check(x)`` over ``domain(n)``; a truthy return is a failure detail."""
    with _Timer() as timer:
        witness = None
        for n in range(n_min, n_max + 1):
            for x in domain(n):
                try:
                    problem = check(x)
                except bij.FiberMismatch as exc:
                    problem = {"fiber_mismatch": str(exc)}
                if problem:
                    witness = {"n": n, "element": list(x), **problem}
                    break
            if witness:
                break
    if not binding:
        status = "informative"
        detail = "holds" if witness is None else "does not hold for the matched oracle"
    else:
        status = "pass" if witness is None else "fail"
        detail = ""
    return VerificationReport(claim, description, n_min, n_max, status, binding,
                              _jsonable(witness), detail, timer.seconds)


def _bijective(claim: str, description: str, n_max: int, fn: Callable) -> VerificationReport:
    with _Timer() as timer:
        witness = None
        for n in range(n_max + 1):
            images = {}
            for p in permutations(n):
                try:
                    image = fn(p)
                except bij.FiberMismatch as exc:
                    witness = {"n": n, "element": list(p), "fiber_mismatch": str(exc)}
                    break
                if image in images:
                    witness = {"n": n, "element": list(p), "collides_with": list(images[image]),
                               "image": list(image)}
                    break
                images[image] = p
            if witness:
                break
    return VerificationReport(claim, description, 0, n_max,
                              "pass" if witness is None else "fail", True,
                              _jsonable(witness), "", timer.seconds)


# --- generating function -----------------------------------------------------

def check_generating_function(n_max: int = 7, allow_large: bool = False) -> VerificationReport:
    """Generating-function polynomials against brute-force statistic sums."""
    _guard(n_max, allow_large)
    with _Timer() as timer:
        witness = None
        gf_t = gf_coefficients_t(n_max)
        gf_q = [a.subs(t=1) for a in gf_t]
        for n in range(n_max + 1):
            triple = combinatorial_gf(n, "triple")
            if gf_t[n] != triple:
                witness = {"n": n, "route": "fix,des,maj", "generating_function": str(gf_t[n]),
                           "enumeration": str(triple)}
                break
            pair = combinatorial_gf(n, "pair")
            if gf_q[n] != pair:
                witness = {"n": n, "route": "fix,maj", "generating_function": str(gf_q[n]),
                           "enumeration": str(pair)}
                break
        detail = ""
        if witness is None:
            cert = certify_gf_q(n_max, gf_q)
            detail = f"closed form at t=1 agrees at {cert['points']} exact points"
            if cert["mismatches"]:
                n, q, y = cert["mismatches"][0]
                witness = {"n": n, "route": "closed form at t=1", "q": str(q), "Y": y}
    return VerificationReport("gf-identity",
                              "A_n(Y,t,q) and A_n(Y,1,q) equal the (fix,des,maj) / (fix,maj) sums",
                              0, n_max, "pass" if witness is None else "fail", True,
                              witness, detail, timer.seconds)


# --- equidistribution groups --------------------------------------------------

PAIR_GROUPS = [
    ("pairs:fix-maj", ["fix,maj", "fix,maf", "fix,maz", "pix,mag", "pix,inv", "pix,imaj"]),
    ("pairs:FIX-maf", ["FIX,maf", "PIX,mag", "PIX,inv"]),
    ("pairs:fix-DES", ["fix,DEZ", "fix,DES", "pix,IDES"]),
    ("pairs:FIX-DEZ", ["FIX,DEZ", "PIX,IDES"]),
]

TRIPLE_GROUPS = [
    ("triples:Der", ["fix,maf,Der", "fix,maz,Der"]),
    ("triples:Desar", ["pix,mag,Desar", "pix,imaj,Desar"]),
]


def _least_witness(n: int, first: StatProfile, other: StatProfile,
                   d1: Distribution, d2: Distribution) -> dict:
    for p in permutations(n):
        for profile in (first, other):
            key = profile.extractor(p)
            if d1.counts.get(key, 0) != d2.counts.get(key, 0):
                return {"n": n, "element": list(p), "profiles": [first.name, other.name],
                        "key": key, "counts": [d1.counts.get(key, 0), d2.counts.get(key, 0)]}
    return {"n": n, "profiles": [first.name, other.name]}


def _equidistribution(claim: str, names: Sequence[str], n_max: int,
                      workers: int) -> VerificationReport:
    profiles = [StatProfile.of(name) for name in names]
    with _Timer() as timer:
        witness = None
        for n in range(n_max + 1):
            dists = [distribution(n, prof, workers, allow_large=True) for prof in profiles]
            for prof, dist in zip(profiles[1:], dists[1:]):
                if dist != dists[0]:
                    witness = _least_witness(n, profiles[0], prof, dists[0], dist)
                    break
            if witness:
                break
    description = "equidistributed: " + " ".join(p.name for p in profiles)
    return VerificationReport(claim, description, 0, n_max,
                              "pass" if witness is None else "fail", True,
                              _jsonable(witness), "", timer.seconds)


def check_pair_equidistribution(n_max: int = 7, workers: int = 1,
                      allow_large: bool = False) -> list[VerificationReport]:
    _guard(n_max, allow_large)
    return [_equidistribution(claim, names, n_max, workers) for claim, names in PAIR_GROUPS]


def check_triple_equidistribution(n_max: int = 7, workers: int = 1,
                      allow_large: bool = False) -> list[VerificationReport]:
    """Triple equidistribution plus pointwise transport along f3 and f3'."""
    _guard(n_max, allow_large)
    reports = [_equidistribution(claim, names, n_max, workers)
               for claim, names in TRIPLE_GROUPS]
    words = bij.word_f3_family()

    def along_f3(p):
        image = bij.f3(p, words)
        before, after = (fix(p), maz(p), der(p)), (fix(image), maf(image), der(image))
        if before != after:
            return {"image": list(image), "fix_maz_Der": before, "fix_maf_Der_of_image": after}

    def along_f3_prime(p):
        image = bij.f3_prime(p, words)
        before, after = (pix(p), imaj(p), desar(p)), (pix(image), mag(image), desar(image))
        if before != after:
            return {"image": list(image), "pix_imaj_Desar": before,
                    "pix_mag_Desar_of_image": after}

    reports.append(_pointwise("transport:F3", "(fix,maz,Der) p = (fix,maf,Der) f3(p)",
                              n_max, along_f3))
    reports.append(_pointwise("transport:F3'", "(pix,imaj,Desar) p = (pix,mag,Desar) f3'(p)",
                              n_max, along_f3_prime))
    reports.append(_bijective("bijective:F3", "f3 is a bijection of S_n", n_max,
                              lambda p: bij.f3(p, words)))
    reports.append(_bijective("bijective:F3'", "f3' is a bijection of S_n", n_max,
                              lambda p: bij.f3_prime(p, words)))
    return reports


# --- oracles and structural identities ---------------------------------------

def _oracle_report(claim: str, description: str, n_max: int,
                   tables: Callable[[int], Iterable]) -> VerificationReport:
    """Every table for ``n <= n_max`` must build and compose to the identity."""
    with _Timer() as timer:
        witness = None
        built = 0
        for n in range(n_max + 1):
            try:
                for table in tables(n):
                    built += 1
                    if any(table.inverse(table(x)) != x for x in table.forward):
                        witness = {"n": n, "table": table.domain_tag, "problem": "not invertible"}
                        break
            except bij.FiberMismatch as exc:
                witness = {"n": n, "table": exc.tag, "key": exc.key,
                           "counts": [exc.domain_count, exc.codomain_count]}
            if witness:
                break
    return VerificationReport(claim, description, 0, n_max,
                              "pass" if witness is None else "fail", True,
                              _jsonable(witness), f"{built} table(s) matched", timer.seconds)


def _all_classes(n: int) -> Iterable[ShuffleClassId]:
    for m in range(n + 1):
        for v in permutations(m):
            yield ShuffleClassId(n, v)


def check_oracles(dw_n_max: int = 7, chz_n_max: int = 7, phi_n_max: int = 7,
                  f3_n_max: int = 7) -> list[VerificationReport]:
    """Fiber matching must succeed: each success realizes an equidistribution."""
    return [
        _oracle_report("oracle:Phi", "(fix,DEZ,Der) and (fix,DES,Der) fibers match on S_n",
                       phi_n_max, lambda n: [bij.phi_table(n)]),
        _oracle_report("oracle:CHZ", "(fix,maf,Der) and (fix,maj,Der) fibers match on S_n",
                       chz_n_max, lambda n: [bij.chz_table(n)]),
        _oracle_report("oracle:DW", "DES on D_n and IDES on K_n have equal fibers",
                       dw_n_max, lambda n: [bij.dw_table(n)]),
        _oracle_report("oracle:F3-word",
                       "maj and mafz fibers match on every shuffle class Sh(0^k v)",
                       f3_n_max, lambda n: (bij.word_f3_table(c) for c in _all_classes(n))),
    ]


DERANGEMENT_NUMBERS = [1, 0, 1, 2, 9, 44, 265, 1854, 14833, 133496]


def check_derangement_counts(n_max: int = 7) -> VerificationReport:
    with _Timer() as timer:
        witness = None
        counts = []
        for n in range(n_max + 1):
            d = sum(1 for _ in enumerate_derangements(n))
            k = sum(1 for _ in enumerate_desarrangements(n))
            counts.append(d)
            if d != k:
                witness = {"n": n, "derangements": d, "desarrangements": k}
                break
    return VerificationReport("counts:D-K", "#D_n = #K_n", 0, n_max,
                              "pass" if witness is None else "fail", True, witness,
                              "counts " + " ".join(map(str, counts)), timer.seconds)


def check_structural_maps(n_max: int = 7, allow_large: bool = False,
                       dw: bij.OracleFamily | None = None,
                       words: bij.OracleFamily | None = None) -> list[VerificationReport]:
    """Pointwise properties of every bijection and encoding, plus oracle existence.

    ``dw`` and ``words`` default to fresh matched-oracle families.  The two
    commutation checks become binding only when ``words`` carries plugged-in
    literal tables.
    """
    _guard(n_max, allow_large)
    dw = dw or bij.dw_family()
    words = words or bij.word_f3_family()
    reports = []

    def f2_props(p):
        image = bij.f2(p)
        if inv(image) != maj(p) or ides_set(image) != ides_set(p):
            return {"image": list(image), "maj": maj(p), "inv_of_image": inv(image)}

    reports.append(_pointwise("F2:inv-maj-IDES", "inv f2(p) = maj p and IDES f2(p) = IDES p",
                              n_max, f2_props))
    reports.append(_bijective("bijective:F2", "f2 is a bijection of S_n", n_max, bij.f2))

    def f2p_props(p):
        image = bij.f2_prime(p)
        if inv(image) != imaj(p) or des_set(image) != des_set(p):
            return {"image": list(image), "imaj": imaj(p), "inv_of_image": inv(image)}

    reports.append(_pointwise("F2':inv-imaj-DES", "inv f2'(p) = imaj p and DES f2'(p) = DES p",
                              n_max, f2p_props))

    def f2loc_props(p):
        image = bij.f2_loc(p)
        if (pix_set(p), mag(p)) != (pix_set(image), inv(image)):
            return {"image": list(image), "PIX_mag": (pix_set(p), mag(p)),
                    "PIX_inv_of_image": (pix_set(image), inv(image))}

    reports.append(_pointwise("F2loc:PIX-mag", "(PIX,mag) p = (PIX,inv) f2loc(p)",
                              n_max, f2loc_props))
    reports.append(_bijective("bijective:F2loc", "f2loc is a bijection of S_n", n_max,
                              bij.f2_loc))

    def f2p_pix(p):
        image = bij.f2_prime(p)
        if (pix(image), inv(image)) != (pix(p), imaj(p)):
            return {"image": list(image)}

    reports.append(_pointwise("F2':pix-imaj", "(pix,inv) f2'(p) = (pix,imaj) p", n_max, f2p_pix))

    def dwloc_props(p):
        image = bij.dw_loc(p, dw)
        if (fix_set(p), des_set(der(p)), maf(p)) != (
                pix_set(image), ides_set(desar(image)), mag(image)):
            return {"image": list(image)}

    def dwloc_sets(p):
        image = bij.dw_loc(p, dw)
        if (fix_set(p), dez_set(p)) != (pix_set(image), ides_set(image)) or (
                fix(p), maz(p)) != (pix(image), imaj(image)):
            return {"image": list(image), "FIX_DEZ": (fix_set(p), dez_set(p)),
                    "PIX_IDES_of_image": (pix_set(image), ides_set(image))}

    reports.append(_pointwise("DWloc:FIX-maf",
                              "FIX p = PIX s, DES Der p = IDES Desar s, maf p = mag s for s = DWloc(p)",
                              n_max, dwloc_props))
    reports.append(_pointwise("DWloc:FIX-DEZ",
                              "(FIX,DEZ) p = (PIX,IDES) s and (fix,maz) p = (pix,imaj) s",
                              n_max, dwloc_sets))
    reports.append(_bijective("bijective:DWloc", "DWloc is a bijection of S_n", n_max,
                              lambda p: bij.dw_loc(p, dw)))

    def zder_props(p):
        w = zder(p)
        if (fix_set(p), der(p), maf(p), dez_set(p)) != (zero_set(w), pos(w), mafz(w), des_set(w)):
            return {"word": list(w)}
        if maf(p) != maf_by_offsets(p):
            return {"word": list(w), "maf_two_ways": (maf(p), maf_by_offsets(p))}
        if zder_inverse(w) != p:
            return {"word": list(w), "round_trip": list(zder_inverse(w))}

    def zdesar_props(p):
        w = zdesar(p)
        # the positive part of the word is the inverse of Desar
        if (pix_set(p), inverse(desar(p)), mag(p), ides_set(p)) != (
                zero_set(w), pos(w), mafz(w), des_set(w)):
            return {"word": list(w)}
        if w != zdesar_by_inverse(p):
            return {"word": list(w), "other_route": list(zdesar_by_inverse(p))}
        if zdesar_inverse(w) != p:
            return {"word": list(w), "round_trip": list(zdesar_inverse(w))}

    reports.append(_pointwise("ZDer:encoding", "(FIX,Der,maf,DEZ) p = (Zero,Pos,mafz,DES) ZDer(p)",
                              n_max, zder_props))
    reports.append(_pointwise("ZDesar:encoding",
                              "(PIX,Desar^-1,mag,IDES) p = (Zero,Pos,mafz,DES) ZDesar(p)",
                              n_max, zdesar_props))

    def dw_routes(p):
        w = zder(p)
        direct, composed = bij.dw_word(w, dw), bij.dw_word_by_composition(w, dw)
        if direct != composed:
            return {"word": list(w), "direct": list(direct), "composed": list(composed)}

    reports.append(_pointwise("dw:two-routes", "dw by zero/positive split = ZDesar . DWloc . ZDer^-1",
                              n_max, dw_routes))

    def dw_commutes(p):
        w = zder(p)
        left, right = bij.dw_word(words(w), dw), words(bij.dw_word(w, dw))
        if left != right:
            return {"word": list(w), "dw_after_F3": list(left), "F3_after_dw": list(right)}

    def square_commutes(p):
        left, right = bij.dw_loc(bij.f3(p, words), dw), bij.f3_prime(bij.dw_loc(p, dw), words)
        if left != right:
            return {"DWloc_after_F3": list(left), "F3p_after_DWloc": list(right)}

    binding = words.has_plug_ins
    reports.append(_pointwise("dw:F3-commute", "dw . F3 = F3 . dw on zero-words of derangements",
                              n_max, dw_commutes, binding=binding))
    reports.append(_pointwise("square:DWloc-F3", "DWloc . f3 = f3' . DWloc on S_n",
                              n_max, square_commutes, binding=binding))

    reports.extend(check_oracles(n_max, n_max, n_max, n_max))
    reports.append(check_derangement_counts(n_max))
    return reports


SUITES = {
    "thm1.1": lambda n, workers, allow: [check_generating_function(n, allow)],
    "thm1.2": lambda n, workers, allow: check_pair_equidistribution(n, workers, allow),
    "thm1.3": lambda n, workers, allow: check_triple_equidistribution(n, workers, allow),
    "props": lambda n, workers, allow: check_structural_maps(n, allow),
}


def run_suites(suite: str = "all", n_max: int = 7, workers: int = 1,
               allow_large: bool = False) -> list[VerificationReport]:
    names = list(SUITES) if suite == "all" else [suite]
    reports = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        reports.extend(SUITES[name](n_max, workers, allow_large))
    return reports


def binding_ok(reports: Iterable[VerificationReport]) -> bool:
    return all(r.status != "fail" for r in reports if r.binding)


def mutation_probe(n_max: int = 5) -> list[VerificationReport]:
    """Run the generating-function and equidistribution suites with maj off by one."""
    with maj_mutation():
        return (run_suites("thm1.1", n_max) + run_suites("thm1.2", n_max)
                + run_suites("thm1.3", n_max))


def format_records(reports: Iterable[VerificationReport], timing: bool = False) -> str:
    """One ``key=value`` record per line; values never contain spaces."""
    lines = []
    for r in reports:
        fields = [
            f"claim={r.claim}",
            f"status={r.status}",
            f"binding={'yes' if r.binding else 'no'}",
            f"n={r.n_min}..{r.n_max}",
        ]
        if timing:
            fields.append(f"seconds={r.seconds:.3f}")
        witness = "-" if r.witness is None else json.dumps(
            _jsonable(r.witness), separators=(",", ":"), sort_keys=True)
        fields.append(f"witness={witness}")
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def format_table(reports: Sequence[VerificationReport], timing: bool = False) -> str:
    rows = [("claim", "status", "n", "description")]
    for r in reports:
        status = r.status.upper() if r.status == "fail" else r.status
        if r.detail:
            description = f"{r.description} [{r.detail}]"
        else:
            description = r.description
        if timing:
            description += f" ({r.seconds:.2f}s)"
        rows.append((r.claim, status, f"{r.n_min}..{r.n_max}", description))
    widths = [max(len(row[k]) for row in rows) for k in range(3)]
    out = []
    for row in rows:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row[:3], widths)) + "  " + row[3])
    for r in reports:
        if r.status == "fail" and r.witness is not None:
            out.append(f"  {r.claim} counterexample: "
                       + json.dumps(_jsonable(r.witness), separators=(",", ":"), sort_keys=True))
    return "\n".join(out) + "\n"
