"""Oracle checks for admissibility, consistency and mutual non-dominance.

Every report carries the recipe (a ``Scenario``) that rebuilds its graph,
partition and landmarks, so ``replay`` can recompute the violation from
scratch.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .embedding import AlpIndex, AltIndex, build_alp_index, build_alt_index, select_landmarks, sssp
from .graph import FAMILIES, Graph, generate, parse_dimacs, to_dimacs
from .heuristics import AlpHeuristic, AltHeuristic, HeuristicConfig, Tabulated, bind
from .partition import Partition, bfs_regions, louvain
from .search import astar_query

KINDS = ("admissibility", "consistency", "dominance_dl_over_l", "dominance_l_over_dl")
REL_EPS = 1e-9
ABS_EPS = 1e-12


def tolerance(x: float) -> float:
    return max(ABS_EPS, REL_EPS * max(1.0, abs(x)))


@dataclass(frozen=True)
class Scenario:
    """Seeded recipe for a graph, its partition, and both landmark sets.

    ``partition``: ``{"method": "louvain", "seed": s}``,
    ``{"method": "bfs", "k": k, "seed": s}`` or ``{"method": "explicit", "assignment": [...]}``.
    ``landmarks``/``alt_landmarks``: ``{"method": "random"|"farthest", "seed": s}``,
    ``{"method": "explicit", "ids": [...]}``, or for ALT only ``{"method": "sample", "k": k, "seed": s}``.
    ``alt_landmarks=None`` reuses the ALP landmark set.
    """

    family: str
    params: dict
    graph_seed: int
    partition: dict
    landmarks: dict
    mode: str = "exact"
    use_ptolemy: bool = True
    alt_landmarks: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        return cls(**d)

    def graph(self) -> Graph:
        if self.family == "dimacs":
            return parse_dimacs(self.params["text"])
        return generate(self.family, self.params, self.graph_seed)

    def build(self) -> "Built":
        g = self.graph()
        part = _make_partition(g, self.partition)
        alp_lm = _make_landmarks(g, part, self.landmarks)
        alt_lm = alp_lm if self.alt_landmarks is None else _make_landmarks(g, part, self.alt_landmarks)
        alp = build_alp_index(g, part, alp_lm, self.mode)
        alt = build_alt_index(g, alt_lm)
        return Built(self, g, part, alp, alt, HeuristicConfig(use_ptolemy=self.use_ptolemy))


@dataclass
class Built:
    scenario: Scenario
    graph: Graph
    partition: Partition
    alp: AlpIndex
    alt: AltIndex
    cfg: HeuristicConfig

    def heuristic(self, name: str):
        if name == "alp":
            return AlpHeuristic(self.alp, self.cfg)
        if name == "alt":
            return AltHeuristic(self.alt)
        raise ValueError(f"unknown heuristic {name!r}")


def _make_partition(g: Graph, spec: dict) -> Partition:
    method = spec["method"]
    if method == "louvain":
        return louvain(g, seed=spec.get("seed", 0), weighted=spec.get("weighted", True))
    if method == "bfs":
        return bfs_regions(g, min(spec["k"], g.vertex_count), seed=spec.get("seed", 0))
    if method == "explicit":
        return Partition.from_assignment(spec["assignment"], canonical=False)
    raise ValueError(f"unknown partition method {method!r}")


def _make_landmarks(g: Graph, part: Partition, spec: dict) -> list[int]:
    method = spec["method"]
    if method == "explicit":
        return list(spec["ids"])
    if method == "sample":
        rng = np.random.default_rng(spec.get("seed", 0))
        return sorted(rng.choice(g.vertex_count, size=min(spec["k"], g.vertex_count), replace=False).tolist())
    return select_landmarks(g, part, method, spec.get("seed", 0))


@dataclass
class ViolationReport:
    kind: str
    fingerprint: dict  # {"scenario": Scenario.to_dict(), "heuristic": name}, or {} when not replayable
    witness: tuple
    values: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = {"kind": self.kind, "fingerprint": self.fingerprint, "witness": list(self.witness), "values": self.values}
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "ViolationReport":
        d = json.loads(line)
        return cls(d["kind"], d["fingerprint"], tuple(d["witness"]), d["values"])


def freeze(report: ViolationReport) -> ViolationReport:
    """Copy of ``report`` whose scenario embeds its graph as DIMACS text instead of a generator recipe."""
    sc = report.fingerprint["scenario"]
    if sc["family"] == "dimacs":
        return report
    text = to_dimacs(Scenario.from_dict(sc).graph(), comment=f"{sc['family']} {sc['params']} seed={sc['graph_seed']}")
    frozen = {**sc, "family": "dimacs", "params": {"text": text}, "graph_seed": 0}
    return ViolationReport(report.kind, {**report.fingerprint, "scenario": frozen}, report.witness, dict(report.values))


def write_reports(reports: Iterable[ViolationReport]) -> str:
    return "".join(r.to_json() + "\n" for r in reports)


def read_reports(text: str) -> list[ViolationReport]:
    return [ViolationReport.from_json(ln) for ln in text.splitlines() if ln.strip()]


# --- checks --------------------------------------------------------------------------------


def all_pairs(g: Graph) -> np.ndarray:
    """|V| x |V| true distances from the heap Dijkstra, one run per source."""
    return np.vstack([sssp(g, s) for s in range(g.vertex_count)]) if g.vertex_count else np.zeros((0, 0))


def check_admissible(g: Graph, h, fingerprint: dict | None = None, dist: np.ndarray | None = None) -> list[ViolationReport]:
    """Every ordered pair (v, t) with h(v, t) > d(v, t) + eps."""
    if dist is None:
        dist = all_pairs(g)
    out = []
    n = g.vertex_count
    for t in range(n):
        ht = bind(h, t)
        col = dist[:, t].tolist()
        for v in range(n):
            if v == t:
                continue
            d = col[v]
            hv = ht(v)
            if hv > d + tolerance(d):
                out.append(ViolationReport("admissibility", fingerprint or {}, (v, t), {"h": hv, "d": d}))
    return out


def distances_agree(x: float, y: float, integer: bool) -> bool:
    if integer or math.isinf(x) or math.isinf(y):
        return x == y
    return math.isclose(x, y, rel_tol=REL_EPS, abs_tol=ABS_EPS)


def oracle_agreement(built: "Built", heuristics=("alt", "alp"), dist: np.ndarray | None = None) -> tuple[int, list[tuple]]:
    """All-pairs A* under each heuristic against Dijkstra distances.

    Returns the number of queries run and the mismatches as
    ``(heuristic, s, t, astar, dijkstra)``. Integer-weighted graphs must match
    exactly, real-weighted ones within ``REL_EPS``.
    """
    g = built.graph
    n = g.vertex_count
    if dist is None:
        dist = all_pairs(g)
    integer = g.has_integer_weights
    bad, queries = [], 0
    for name in heuristics:
        h = Tabulated(built.heuristic(name))
        for t in range(n):
            for s in range(n):
                got = astar_query(g, h, s, t).distance
                queries += 1
                if not distances_agree(got, float(dist[s, t]), integer):
                    bad.append((name, s, t, got, float(dist[s, t])))
    return queries, bad


def check_consistency(g: Graph, h, t: int, fingerprint: dict | None = None) -> list[ViolationReport]:
    """Every arc (u, v, w) with h(u, t) > w + h(v, t) + eps."""
    ht = bind(h, t)
    hv = [ht(v) for v in range(g.vertex_count)]
    out = []
    for u, v, w in g.arcs():
        rhs = w + hv[v]
        if hv[u] > rhs + tolerance(rhs):
            out.append(
                ViolationReport("consistency", fingerprint or {}, (u, v, t), {"h_u": hv[u], "h_v": hv[v], "w": w})
            )
    return out


def replay(report: ViolationReport) -> bool:
    """Rebuild the report's scenario and confirm the same inequality is violated."""
    fp = report.fingerprint
    built = Scenario.from_dict(fp["scenario"]).build()
    g = built.graph
    if report.kind == "admissibility":
        v, t = report.witness
        hv = bind(built.heuristic(fp["heuristic"]), t)(v)
        d = float(sssp(g, v)[t])
        return hv > d + tolerance(d) and math.isclose(hv, report.values["h"], rel_tol=1e-12, abs_tol=1e-12)
    if report.kind == "consistency":
        u, v, t = report.witness
        ht = bind(built.heuristic(fp["heuristic"]), t)
        arcs = [w for a, b, w in g.arcs() if a == u and b == v]
        if not arcs:
            return False
        rhs = min(arcs) + ht(v)
        return ht(u) > rhs + tolerance(rhs)
    v, t = report.witness
    alt = AltHeuristic(built.alt).bind(t)(v)
    alp = AlpHeuristic(built.alp, built.cfg).bind(t)(v)
    if report.kind == "dominance_l_over_dl":
        return alt > alp + tolerance(alp)
    if report.kind == "dominance_dl_over_l":
        return alp > alt + tolerance(alt)
    raise ValueError(f"unknown report kind {report.kind!r}")


# --- scenario generators ------------------------------------------------------------------


def family_params(family: str, n: int, rng: np.random.Generator) -> dict:
    """Parameters aiming at roughly ``n`` vertices after largest-component extraction."""
    if family == "grid":
        rows = int(rng.integers(2, max(3, int(math.isqrt(n)) + 1)))
        return {"rows": rows, "cols": max(2, round(n / rows))}
    if family == "erdos_renyi":
        return {"n": n, "p": round(float(rng.uniform(2.5, 5.0)) / n, 6)}
    if family == "barabasi_albert":
        return {"n": n, "m": int(rng.integers(1, 4))}
    if family == "watts_strogatz":
        return {"n": n, "k": int(rng.choice([2, 4])), "p": round(float(rng.uniform(0.05, 0.4)), 6)}
    if family == "random_geometric":
        return {"n": n, "radius": round(math.sqrt(float(rng.uniform(6.0, 12.0)) / (math.pi * n)), 6)}
    raise ValueError(f"unknown graph family {family!r}")


def sweep_scenarios(count: int, seed: int = 0, min_n: int = 10, max_n: int = 200, mode: str = "exact",
                    use_ptolemy: bool = False) -> list[Scenario]:
    """``count`` seeded scenarios cycling through every family, |V| log-uniform in [min_n, max_n]."""
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        family = FAMILIES[i % len(FAMILIES)]
        target = int(round(math.exp(rng.uniform(math.log(min_n), math.log(max_n)))))
        for attempt in range(100):
            params = family_params(family, target, rng)
            gseed = int(rng.integers(2**31))
            n = generate(family, params, gseed).vertex_count
            if min_n <= n <= max_n:
                break
        else:  # pragma: no cover - parameters above always land in range quickly
            raise RuntimeError(f"could not draw a {family} graph with {min_n}..{max_n} vertices")
        out.append(
            Scenario(
                family, params, gseed,
                {"method": "louvain", "seed": int(rng.integers(2**31))},
                {"method": "random", "seed": int(rng.integers(2**31))},
                mode=mode, use_ptolemy=use_ptolemy,
            )
        )
    return out


def random_scenario(rng: np.random.Generator, mode: str = "exact", use_ptolemy: bool = True,
                    min_n: int = 8, max_n: int = 40) -> Scenario | None:
    """Small scenario for witness searches; None when the draw is degenerate."""
    family = FAMILIES[int(rng.integers(len(FAMILIES)))]
    params = family_params(family, int(rng.integers(min_n, max_n + 1)), rng)
    gseed = int(rng.integers(2**31))
    n = generate(family, params, gseed).vertex_count
    if n < 4:
        return None
    if rng.random() < 0.5:
        part = {"method": "louvain", "seed": int(rng.integers(2**31))}
    else:
        part = {"method": "bfs", "k": int(rng.integers(2, max(3, n // 4 + 1))), "seed": int(rng.integers(2**31))}
    lms = {"method": "random", "seed": int(rng.integers(2**31))}
    return Scenario(family, params, gseed, part, lms, mode=mode, use_ptolemy=use_ptolemy)


# --- searches ------------------------------------------------------------------------------


def find_consistency_witness(trials: int, seed: int = 0, mode: str = "exact", use_ptolemy: bool = True,
                             stop_when_found: bool = True) -> tuple[list[ViolationReport], int]:
    """Randomized search for edges where the ALP bound drops faster than the edge weight.

    Returns the reports and the number of trials consumed.
    """
    found: list[ViolationReport] = []
    for i in range(trials):
        sc = random_scenario(np.random.default_rng([seed, i]), mode, use_ptolemy)
        if sc is None:
            continue
        built = sc.build()
        fp = {"scenario": sc.to_dict(), "heuristic": "alp"}
        h = built.heuristic("alp")
        for t in range(built.graph.vertex_count):
            reps = check_consistency(built.graph, h, t, fp)
            if reps:
                found.append(reps[0])
                break
        if found and stop_when_found:
            return found, i + 1
    return found, trials


def five_path_scenario() -> Scenario:
    """Path 0-1-2-3-4: ALP over {0, 4} with parts {0,1,2}/{3,4}; ALT over {2} alone."""
    return Scenario(
        "grid", {"rows": 1, "cols": 5}, 0,
        {"method": "explicit", "assignment": [0, 0, 0, 1, 1]},
        {"method": "explicit", "ids": [0, 4]},
        alt_landmarks={"method": "explicit", "ids": [2]},
    )


def _dominance_witnesses(built: Built, kind: str, limit: int) -> list[ViolationReport]:
    alt, alp = AltHeuristic(built.alt), AlpHeuristic(built.alp, built.cfg)
    fp = {"scenario": built.scenario.to_dict(), "heuristic": "alp+alt"}
    out = []
    n = built.graph.vertex_count
    for t in range(n):
        at, pt = alt.bind(t), alp.bind(t)
        for v in range(n):
            if v == t:
                continue
            x, y = at(v), pt(v)
            if kind == "dominance_l_over_dl" and x > y + tolerance(y) or kind == "dominance_dl_over_l" and y > x + tolerance(x):
                out.append(ViolationReport(kind, fp, (v, t), {"alt": x, "alp": y}))
                if len(out) >= limit:
                    return out
    return out


def find_dominance_counterexamples(trials: int, seed: int = 0, include_canonical: bool = True,
                                   stop_when_found: bool = True, per_trial: int = 1,
                                   use_ptolemy: bool = True) -> tuple[list[ViolationReport], list[ViolationReport]]:
    """Witnesses that neither bound dominates the other.

    Returns ``(l_over_dl, dl_over_l)``: ALT beating ALP on the very same
    landmark set, and ALP beating ALT when ALT uses a different set of the
    same size. ``include_canonical`` first evaluates the hand-checkable
    five-vertex path.
    """
    l_over_dl: list[ViolationReport] = []
    dl_over_l: list[ViolationReport] = []
    if include_canonical:
        dl_over_l += _dominance_witnesses(five_path_scenario().build(), "dominance_dl_over_l", per_trial)
    for i in range(trials):
        if stop_when_found and l_over_dl and dl_over_l and (not include_canonical or i > 0):
            break
        rng = np.random.default_rng([seed, i])
        same = random_scenario(rng, use_ptolemy=use_ptolemy)
        if same is None:
            continue
        if not l_over_dl or not stop_when_found:
            l_over_dl += _dominance_witnesses(same.build(), "dominance_l_over_dl", per_trial)
        if not _has_random(dl_over_l) or not stop_when_found:
            k = same.build().alp.landmark_count
            diff = Scenario(same.family, same.params, same.graph_seed, same.partition, same.landmarks,
                            use_ptolemy=use_ptolemy,
                            alt_landmarks={"method": "sample", "k": k, "seed": int(rng.integers(2**31))})
            b = diff.build()
            if set(b.alt.landmarks.tolist()) != set(b.alp.landmarks.tolist()):
                dl_over_l += _dominance_witnesses(b, "dominance_dl_over_l", per_trial)
    return l_over_dl, dl_over_l


def _has_random(reports: list[ViolationReport]) -> bool:
    canon = five_path_scenario().to_dict()
    return any(r.fingerprint["scenario"] != canon for r in reports)


# --- sweeps ------------------------------------------------------------------------------


@dataclass
class SweepSummary:
    family: str
    graphs: int = 0
    pairs: int = 0
    violations: int = 0

    @property
    def rate(self) -> float:
        return self.violations / self.pairs if self.pairs else 0.0


def admissibility_sweep(scenarios: list[Scenario], heuristic: str = "alp",
                        keep: int = 5) -> tuple[dict[str, SweepSummary], list[ViolationReport]]:
    """Per-family violation counts over all ordered pairs; keeps ``keep`` sample reports per family."""
    summary: dict[str, SweepSummary] = {f: SweepSummary(f) for f in FAMILIES}
    reports: list[ViolationReport] = []
    for sc in scenarios:
        built = sc.build()
        g = built.graph
        reps = check_admissible(g, built.heuristic(heuristic), {"scenario": sc.to_dict(), "heuristic": heuristic})
        s = summary.setdefault(sc.family, SweepSummary(sc.family))
        s.graphs += 1
        s.pairs += g.vertex_count * (g.vertex_count - 1)
        s.violations += len(reps)
        already = sum(1 for r in reports if r.fingerprint["scenario"]["family"] == sc.family)
        reports += reps[: max(0, keep - already)]
    return summary, reports


def ptolemy_config(summary: dict[str, SweepSummary]) -> dict[str, HeuristicConfig]:
    """Per-family config: the Ptolemy bound is switched off wherever it overestimated."""
    return {f: HeuristicConfig(use_ptolemy=s.violations == 0) for f, s in summary.items()}
