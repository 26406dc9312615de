"""Seeded generation of branch data and exhaustive checking of every invariant.

Instance ``k`` of a run is drawn from ``random.Random(f"{seed}:{k}")``, so the
instance list does not depend on how work is split across processes.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .branches import (
    BranchSpec,
    ContactSpec,
    _branch_points,
    _extended_points,
    branches_to_dict,
    build_cluster,
    cluster_numerical_data,
    cluster_to_graph,
)
from .calculus import (
    check_axioms,
    check_minimality,
    edge_decorations,
    lct,
    numerical_data_diagram,
    numerical_data_linear,
)
from .corpus import branch_corpus
from .errors import InconsistentContact, ResgraphError
from .graph import validate
from .theorems import check_all


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    count: int = 1000
    max_branches: int = 3
    max_g: int = 2
    max_exponent: int = 30
    max_factor: int = 3
    dd_max: int = 30
    include_corpus: bool = False

    def check(self) -> None:
        if self.count < 0:
            raise ValueError("count must be >= 0")
        for name in ("max_branches", "max_exponent", "max_factor", "dd_max"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.max_g < 0:
            raise ValueError("max_g must be >= 0")


@dataclass
class FuzzOutcome:
    instances_run: int = 0
    failures: List[dict] = field(default_factory=list)
    sharp: Dict[str, int] = field(default_factory=dict)
    applicable: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, cfg: Optional[FuzzConfig] = None) -> dict:
        out = {
            "ok": self.ok,
            "instances_run": self.instances_run,
            "failures": self.failures,
            "stats": {
                "sharp": {k: self.sharp[k] for k in sorted(self.sharp)},
                "applicable": {k: self.applicable[k] for k in sorted(self.applicable)},
            },
        }
        if cfg is not None:
            out["config"] = asdict(cfg)
        return out

    def to_json(self, cfg: Optional[FuzzConfig] = None) -> str:
        return json.dumps(self.to_dict(cfg), indent=2, sort_keys=True)


def _random_branch(rng: random.Random, cfg: FuzzConfig) -> BranchSpec:
    factor = rng.randint(1, cfg.max_factor)
    g = rng.randint(0, cfg.max_g)
    while g > 0:
        for _ in range(20):
            if cfg.max_exponent < 3:
                break
            m = rng.randint(2, cfg.max_exponent - 1)
            e, prev, beta = m, m, []
            for k in range(g):
                last = k == g - 1
                options = [
                    b
                    for b in range(prev + 1, cfg.max_exponent + 1)
                    if b % e and ((gcd(e, b) == 1) if last else (gcd(e, b) > 1))
                ]
                if not options:
                    break
                b = rng.choice(options)
                beta.append(b)
                e, prev = gcd(e, b), b
            else:
                return BranchSpec(m, tuple(beta), factor)
        g -= 1
    return BranchSpec(1, (), factor)


def _common_prefix(a: BranchSpec, b: BranchSpec) -> int:
    """Largest number of leading points the two branches could share."""
    length = max(len(_branch_points(a)), len(_branch_points(b))) + 3
    pa, pb = _extended_points(a, length + 1), _extended_points(b, length + 1)
    best = 0
    for s in range(1, length + 1):
        if pa[s - 1][1] != pb[s - 1][1]:
            break
        nxt_a, nxt_b = pa[s][1], pb[s][1]
        if not (nxt_a == nxt_b and len(nxt_a) > 1):
            best = s
    return max(best, 1)


def random_instance(seed: int, index: int, cfg: FuzzConfig) -> Tuple[List[BranchSpec], ContactSpec]:
    """A valid branch configuration, deterministic in ``(seed, index, cfg)``."""
    rng = random.Random(f"{seed}:{index}")
    count = rng.randint(1, cfg.max_branches)
    branches = [_random_branch(rng, cfg) for _ in range(count)]
    s: Dict[Tuple[int, int], int] = {}
    for i in range(1, count):
        j = rng.randrange(i)
        top = _common_prefix(branches[i], branches[j])
        for _ in range(10):
            depth = rng.randint(1, top)
            trial = dict(s)
            trial[(j, i)] = depth
            for k in range(i):
                if k != j:
                    trial[(k, i)] = min(depth, s[(min(j, k), max(j, k))])
            try:
                build_cluster(branches[: i + 1], ContactSpec(tuple((a, b, v) for (a, b), v in sorted(trial.items()))))
            except InconsistentContact:
                continue
            s = trial
            break
        else:
            for k in range(i):
                s[(k, i)] = 1
    return branches, ContactSpec(tuple((a, b, v) for (a, b), v in sorted(s.items())))


def _report_failure(failures, instance, check, report) -> None:
    failures.append({"instance": instance, "check": check, "report": report})


def run_instance(branches: Sequence[BranchSpec], contact: ContactSpec, dd_max: int) -> Tuple[List[dict], Counter, Counter]:
    """Every check on one instance; failures are returned, never raised."""
    instance = branches_to_dict(branches, contact)
    failures: List[dict] = []
    sharp: Counter = Counter()
    applicable: Counter = Counter()
    try:
        cluster = build_cluster(branches, contact)
        g = cluster_to_graph(cluster, check=False)
    except ResgraphError as exc:
        _report_failure(failures, instance, "resolve", {"error": f"{type(exc).__name__}: {exc}"})
        return failures, sharp, applicable
    report = validate(g)
    if not report.ok:
        _report_failure(failures, instance, "validate", report.to_dict())
        return failures, sharp, applicable
    d = edge_decorations(g, check=False)
    for name, rep in (("axioms", check_axioms(d)), ("minimality", check_minimality(d))):
        if not rep.ok:
            _report_failure(failures, instance, name, rep.to_dict())
    try:
        nd = numerical_data_linear(g)
    except ResgraphError as exc:
        _report_failure(failures, instance, "numerical_data_linear", {"error": str(exc)})
        return failures, sharp, applicable
    nd_diagram = numerical_data_diagram(d)
    if not nd.same_as(nd_diagram):
        _report_failure(
            failures,
            instance,
            "dual_oracle",
            {"linear": [nd.N, nd.nu], "diagram": [nd_diagram.N, nd_diagram.nu]},
        )
    n_rec, nu_rec = cluster_numerical_data(cluster)
    if n_rec != [nd.N[v] for v in g.ids] or nu_rec != [nd.nu[v] for v in g.ids]:
        _report_failure(failures, instance, "cluster_recursion", {"N": n_rec, "nu": nu_rec})
    if any(a.multiplicity == 1 for a in g.arrows) and lct(nd) > 1:
        _report_failure(failures, instance, "lct_at_most_one", {"lct": str(lct(nd))})
    try:
        reports = check_all(d, nd, dd_max)
    except ResgraphError as exc:
        _report_failure(failures, instance, "check_all", {"error": f"{type(exc).__name__}: {exc}"})
        return failures, sharp, applicable
    cmn_holds = {}
    for r in reports:
        if r.check == "cmn" and r.hypothesis_met:
            cmn_holds[(r.sites, r.d)] = r.conclusion_holds
    for r in reports:
        if r.failed:
            _report_failure(failures, instance, r.check, r.to_dict())
        if r.hypothesis_met:
            applicable[r.check] += 1
            if r.sharp:
                sharp[r.check] += 1
        if r.check == "main_theorem" and r.hypothesis_met and r.conclusion_holds:
            if cmn_holds.get((r.sites, r.d)) is False:
                _report_failure(failures, instance, "main_implies_cmn", r.to_dict())
    return failures, sharp, applicable


def _work(args) -> Tuple[List[dict], Counter, Counter]:
    index, cfg = args
    if index < 0:
        _, branches, contact = branch_corpus()[-index - 1]
    else:
        branches, contact = random_instance(cfg.seed, index, cfg)
    failures, sharp, applicable = run_instance(branches, contact, cfg.dd_max)
    for f in failures:
        f["index"] = index
    return failures, sharp, applicable


def run_fuzz(cfg: FuzzConfig, jobs: int = 1) -> FuzzOutcome:
    """Generate ``cfg.count`` instances (after the fixed corpus, if requested) and check them all.

    Corpus instances get negative indices ``-1, -2, ...``.
    """
    cfg.check()
    indices = list(range(cfg.count))
    if cfg.include_corpus:
        indices = [-(k + 1) for k in range(len(branch_corpus()))] + indices
    outcome = FuzzOutcome()
    tasks = [(k, cfg) for k in indices]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_work, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_work(t) for t in tasks]
    sharp: Counter = Counter()
    applicable: Counter = Counter()
    for failures, s, a in results:
        outcome.failures.extend(failures)
        sharp.update(s)
        applicable.update(a)
    outcome.instances_run = len(tasks)
    outcome.sharp = dict(sharp)
    outcome.applicable = dict(applicable)
    return outcome
