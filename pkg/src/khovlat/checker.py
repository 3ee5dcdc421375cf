"""End-to-end Khovanskii verdicts, sublattice reduction and the classification sweep."""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .classify import Verdict, is_free, predict_khovanskii, recognize_snake
from .polyalg import (
    GeneratorSet,
    MonomialOrder,
    Polynomial,
    SubductionResult,
    canonical_extension,
    compatible_order,
    format_polynomial,
    hibi_generators,
    subduction,
)
from .poset import (
    DistributiveLattice,
    Poset,
    build_lattice,
    enumerate_posets,
    format_poset,
    ordinal_decompose,
    parse_poset,
)
from .toric import (
    WalkBinomial,
    cocomparability_graph,
    default_bound,
    is_bipartite,
    iter_walk_binomials,
    substitute,
)

__all__ = [
    "WalkTrace",
    "CheckReport",
    "SweepRow",
    "SweepReport",
    "SweepDisagreement",
    "check_lattice",
    "khovanskii_check",
    "minimal_sublattice",
    "check_via_sublattices",
    "theorem_sweep",
    "linear_extensions",
    "order_independence_experiment",
]

REPORT_SCHEMA = "khovlat.check/1"
SWEEP_SCHEMA = "khovlat.sweep/1"


@dataclass
class WalkTrace:
    binomial: WalkBinomial
    substituted: Polynomial
    result: SubductionResult

    @property
    def reduced(self) -> bool:
        return self.result.reduced

    def to_dict(self, order: MonomialOrder, names: Sequence[str]) -> dict:
        return {
            "walk": self.binomial.walk.label(),
            "binomial": str(self.binomial),
            "substituted": format_polynomial(self.substituted, order, names),
            "reduced": self.reduced,
            "remainder": format_polynomial(self.result.r, order, names),
            "steps": len(self.result.trace),
        }


@dataclass
class CheckReport:
    poset: Poset | None
    lattice: DistributiveLattice
    order: MonomialOrder
    generators: GeneratorSet
    bipartite: bool
    bound: int
    verdict: Verdict
    walks: list[WalkTrace] = field(default_factory=list)
    sublattices: list[dict] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def lattice_size(self) -> int:
        return len(self.lattice)

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    @property
    def walk_count(self) -> int:
        return len(self.walks)

    def to_dict(self, traces: bool = True, timing: bool = False) -> dict:
        names = self.lattice.names
        out = {
            "schema": REPORT_SCHEMA,
            "poset": format_poset(self.poset) if self.poset is not None else None,
            "lattice_size": self.lattice_size,
            "order": [names[v] for v in self.order.ranking],
            "generator_count": self.generator_count,
            "bipartite": self.bipartite,
            "walk_bound": self.bound,
            "walk_count": self.walk_count,
            "verdict": self.verdict.to_dict(),
        }
        if traces:
            out["walks"] = [w.to_dict(self.order, names) for w in self.walks]
        if self.sublattices:
            out["sublattices"] = self.sublattices
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 6)
        return out

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), indent=2, ensure_ascii=False)


def _witness(trace: WalkTrace, order: MonomialOrder, names: Sequence[str]) -> dict:
    r = trace.result.r
    lead = r.initial_monomial(order)
    return {
        "walk": trace.binomial.walk.label(),
        "binomial": str(trace.binomial),
        "remainder": format_polynomial(r, order, names),
        "remainder_initial": format_polynomial(Polynomial.monomial(lead), order, names),
    }


def check_lattice(
    lat: DistributiveLattice,
    extension: Sequence[int] | None = None,
    bound: int | None = None,
    full: bool = False,
    poset: Poset | None = None,
) -> CheckReport:
    """Subduce every walk binomial evaluated at the generators.

    Walks come ascending by length; unless ``full`` is set the first walk
    that leaves a remainder stops the run.
    """
    start = time.perf_counter()
    order = compatible_order(lat, extension)
    gens = hibi_generators(lat, order)
    graph = cocomparability_graph(lat)
    bip = is_bipartite(graph)
    bound = default_bound(graph) if bound is None else bound
    traces: list[WalkTrace] = []
    failure: WalkTrace | None = None
    for b in iter_walk_binomials(graph, bound):
        f = substitute(b, gens)
        trace = WalkTrace(b, f, subduction(f, gens, order))
        traces.append(trace)
        if not trace.reduced and failure is None:
            failure = trace
            if not full:
                break
    if failure is not None:
        verdict = Verdict(False, "direct", witness=_witness(failure, order, lat.names))
    elif bip:
        verdict = Verdict(True, "direct")
    else:
        verdict = Verdict(True, "direct", status="pass-up-to-bound")
    return CheckReport(
        poset if poset is not None else lat.base,
        lat,
        order,
        gens,
        bip,
        bound,
        verdict,
        traces,
        elapsed=time.perf_counter() - start,
    )


def khovanskii_check(
    p: Poset,
    order: Sequence[int] | None = None,
    bound: int | None = None,
    full: bool = False,
) -> CheckReport:
    """Decide whether the Hibi binomials of L(p) form a Khovanskii basis.

    ``order`` optionally overrides the canonical linear extension; it lists
    lattice element indices from smallest to largest variable.
    """
    return check_lattice(build_lattice(p), order, bound, full, poset=p)


def _closure(lat: DistributiveLattice, seed: Iterable[int]) -> list[int]:
    members = set(seed)
    if not members:
        raise ValueError("seed must be nonempty")
    frontier = list(members)
    while frontier:
        new = []
        for a in frontier:
            for b in list(members):
                for c in (lat.join[a][b], lat.meet[a][b]):
                    if c not in members:
                        members.add(c)
                        new.append(c)
        frontier = new
    return sorted(members)


def minimal_sublattice(lat: DistributiveLattice, seed: Iterable[int]) -> DistributiveLattice:
    """Closure of ``seed`` under join and meet, keeping the ambient element order."""
    idx = _closure(lat, seed)
    return DistributiveLattice([lat.elements[k] for k in idx], base=lat.base, names=[lat.names[k] for k in idx])


def check_via_sublattices(
    p: Poset | DistributiveLattice,
    bound: int | None = None,
    full: bool = False,
) -> CheckReport:
    """Verdict from the sublattices generated by the vertices of each walk."""
    start = time.perf_counter()
    lat = build_lattice(p) if isinstance(p, Poset) else p
    poset = p if isinstance(p, Poset) else lat.base
    order = compatible_order(lat)
    gens = hibi_generators(lat, order)
    graph = cocomparability_graph(lat)
    bip = is_bipartite(graph)
    bound = default_bound(graph) if bound is None else bound
    cache: dict[tuple, CheckReport] = {}
    rows = []
    witness = None
    up_to_bound = False
    for b in iter_walk_binomials(graph, bound):
        idx = tuple(_closure(lat, b.walk.vertices))
        sub_report = cache.get(idx)
        if sub_report is None:
            sub = DistributiveLattice(
                [lat.elements[k] for k in idx], base=lat.base, names=[lat.names[k] for k in idx]
            )
            sub_report = check_lattice(sub)
            cache[idx] = sub_report
        status = sub_report.verdict.status
        rows.append(
            {
                "walk": b.walk.label(),
                "sublattice": [lat.names[k] for k in idx],
                "status": status,
            }
        )
        up_to_bound |= status == "pass-up-to-bound"
        if not sub_report.verdict.khovanskii and witness is None:
            witness = {"walk": b.walk.label(), "sublattice": [lat.names[k] for k in idx]}
            witness.update({k: v for k, v in sub_report.verdict.witness.items() if k != "walk"})
            if not full:
                break
    if witness is not None:
        verdict = Verdict(False, "direct", witness=witness)
    elif bip and not up_to_bound:
        verdict = Verdict(True, "direct")
    else:
        verdict = Verdict(True, "direct", status="pass-up-to-bound")
    return CheckReport(
        poset, lat, order, gens, bip, bound, verdict, [], rows, time.perf_counter() - start
    )


# -- sweep ---------------------------------------------------------------


class SweepDisagreement(AssertionError):
    def __init__(self, row: "SweepRow"):
        super().__init__(f"classification disagreement on poset:\n{row.poset}")
        self.row = row


@dataclass
class SweepRow:
    id: str
    n: int
    poset: str
    irreducible: bool
    free: bool
    snake: str | None
    direct: str
    predicted: bool

    @property
    def khovanskii(self) -> bool:
        return self.direct != "fail"

    @property
    def agrees(self) -> bool:
        if self.irreducible:
            return self.free == (self.snake is not None) == self.khovanskii
        return self.snake is None and self.predicted == self.khovanskii

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "n": self.n,
            "poset": self.poset,
            "irreducible": self.irreducible,
            "free": self.free,
            "snake": self.snake,
            "direct": self.direct,
            "predicted": self.predicted,
            "agrees": self.agrees,
        }


@dataclass
class SweepReport:
    n_max: int
    rows: list[SweepRow]

    @property
    def disagreements(self) -> list[SweepRow]:
        return [r for r in self.rows if not r.agrees]

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        irr = [r for r in self.rows if r.irreducible]
        return {
            "schema": SWEEP_SCHEMA,
            "n_max": self.n_max,
            "posets": len(self.rows),
            "irreducible": len(irr),
            "khovanskii_irreducible": sum(r.khovanskii for r in irr),
            "disagreements": len(self.disagreements),
            "rows": [r.to_dict() for r in self.rows],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def classify_row(ident: str, p: Poset) -> SweepRow:
    lat = build_lattice(p)
    return SweepRow(
        id=ident,
        n=len(p),
        poset=format_poset(p),
        irreducible=len(ordinal_decompose(p)) == 1,
        free=is_free(p),
        snake=recognize_snake(lat),
        direct=check_lattice(lat, poset=p).verdict.status,
        predicted=predict_khovanskii(p),
    )


def _row_job(args: tuple[str, str]) -> SweepRow:
    ident, text = args
    return classify_row(ident, parse_poset(text))


def theorem_sweep(n_max: int, jobs: int = 1, strict: bool = True, n_min: int = 2) -> SweepReport:
    """Classify every poset with ``n_min..n_max`` elements three ways and compare.

    For ordinal-irreducible posets the forbidden-subposet test, snake
    recognition on the lattice and the direct verdict must coincide; for
    reducible ones the summand-wise prediction must match the direct verdict.
    """
    jobs_in = [
        (f"n{n}-{k + 1}", format_poset(p))
        for n in range(n_min, n_max + 1)
        for k, p in enumerate(enumerate_posets(n))
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row_job, jobs_in, chunksize=8))
    else:
        rows = [_row_job(j) for j in jobs_in]
    report = SweepReport(n_max, rows)
    if strict and report.disagreements:
        raise SweepDisagreement(report.disagreements[0])
    return report


# -- order experiment ----------------------------------------------------


def linear_extensions(lat: DistributiveLattice, k: int, seed: int = 0) -> list[list[int]]:
    """Up to ``k`` distinct linear extensions, the canonical one first.

    Further ones are random topological sorts from a seeded generator; if
    fewer than ``k`` exist, all of them are returned.
    """
    n = len(lat)
    covers = lat.covers()
    preds = [set() for _ in range(n)]
    for i, j in covers:
        preds[j].add(i)
    out = [canonical_extension(lat)]
    seen = {tuple(out[0])}
    rng = random.Random(seed)
    attempts = 0
    while len(out) < k and attempts < 50 * k:
        attempts += 1
        done: set[int] = set()
        ext = []
        while len(ext) < n:
            ready = sorted(v for v in range(n) if v not in done and preds[v] <= done)
            v = rng.choice(ready)
            ext.append(v)
            done.add(v)
        if tuple(ext) not in seen:
            seen.add(tuple(ext))
            out.append(ext)
    return out


def order_independence_experiment(p: Poset, k: int, seed: int = 0) -> dict:
    """Run the direct check under up to ``k`` compatible orders and compare verdicts."""
    if k < 1:
        raise ValueError("k must be at least 1")
    lat = build_lattice(p)
    runs = []
    for ext in linear_extensions(lat, k, seed):
        report = check_lattice(lat, ext, poset=p)
        runs.append({"order": [lat.names[v] for v in ext], "status": report.verdict.status})
    statuses = {r["status"] for r in runs}
    return {
        "poset": format_poset(p),
        "orders_tried": len(runs),
        "coincide": len(statuses) == 1,
        "runs": runs,
    }
