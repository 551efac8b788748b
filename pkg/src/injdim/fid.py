"""Finite injective dimension: the oracle, the checker and the sweep harness."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra, group_algebra, truncated_ci
from .complexes import Complex
from .ext import HomComplex, ext_hom
from .modules import (
    Module,
    dual_module,
    free_module,
    is_projective,
    random_module,
    syzygy_module,
    trivial_module,
    direct_sum,
)
from .operators import (
    CriterionReport,
    HopfContext,
    OperatorAction,
    degree_two_classes,
    eisenbud_operators,
    first_ml,
    first_window,
    koszul_pd,
    operator_action,
    torsion_verdict,
)
from .resolution import Verdict, projective_dimension

DEFAULT_BOUND = 12

ZOO = {
    "f2_x2": lambda: truncated_ci(2, [2]),
    "f2_x2y2": lambda: truncated_ci(2, [2, 2]),
    "f3_x3": lambda: truncated_ci(3, [3]),
    "f2_z2xz2": lambda: group_algebra(2, [2, 2]),
    "f2_z4": lambda: group_algebra(2, [4]),
}
DEFAULT_ZOO = list(ZOO)


def zoo_algebra(name: str) -> Algebra:
    try:
        return ZOO[name]()
    except KeyError:
        raise ValueError(f"unknown zoo algebra {name!r}; choose from {', '.join(ZOO)}") from None


def _as_complex(X) -> Complex:
    return Complex.from_module(X) if isinstance(X, Module) else X


def injective_dimension_oracle(X, bound: int = DEFAULT_BOUND) -> Verdict:
    """id(X) computed as the projective dimension of the k-dual over A^op."""
    if isinstance(X, Module):
        return projective_dimension(dual_module(X), bound)
    return projective_dimension(X.dual(), bound)


@dataclass
class FidReport:
    target: str
    algebra: str
    operators: str
    ext_table: list[int]
    criterion: CriterionReport
    oracle: Verdict
    consistent: bool
    actions: list[OperatorAction] = field(default_factory=list, repr=False)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if self.criterion.certified:
            return "FINITE"
        if self.oracle.finite:
            return "FINITE"
        if self.oracle.infinite:
            return "INFINITE"
        return "UNDECIDED"

    def to_json(self, timings: bool = False, matrices: bool = False) -> dict:
        out = {
            "target": self.target,
            "algebra": self.algebra,
            "operators": self.operators,
            "ext_table": list(self.ext_table),
            "criterion": self.criterion.to_json(),
            "oracle": self.oracle.to_json(),
            "consistent": self.consistent,
            "verdict": self.verdict,
        }
        if matrices:
            out["actions"] = [a.to_json() for a in self.actions]
        if timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out


def _operator_family(A: Algebra, operators: str) -> str:
    if operators == "auto":
        if A.ci is not None:
            return "eisenbud"
        if A.group is not None:
            return "hopf"
        return "none"
    if operators == "eisenbud" and A.ci is None:
        return "none"
    if operators == "hopf" and A.group is None:
        return "none"
    return operators


def compute_actions(X, H: HomComplex, bound: int, family: str) -> tuple[list[OperatorAction], list[int]]:
    A = H.algebra
    if family == "eisenbud":
        ts = eisenbud_operators(H.P)
        acts = [operator_action(t, H, 0, bound) for t in ts]
        return acts, [2] * len(acts)
    if family == "hopf":
        if not isinstance(X, Module):
            raise ValueError("the Hopf action is implemented for modules")
        ctx = HopfContext.build(X, bound, H)
        _, classes = degree_two_classes(A, bound)
        acts = []
        for i, alpha in enumerate(classes):
            alpha = ctx.H_k.cohomology(2).element(alpha.coords)
            acts.append(ctx.action(alpha, label=f"eta{i + 1}"))
        return acts, [2] * len(acts)
    return [], []


def check_fid(X, bound: int = DEFAULT_BOUND, operators: str = "auto", name: str = "") -> FidReport:
    """Run the torsion criterion and the duality oracle on a module or complex."""
    Xc = _as_complex(X)
    A = Xc.algebra
    timings = {}
    t0 = time.perf_counter()
    H = ext_hom(X, X, bound + 1)
    table = H.ext_dims(0, bound)
    timings["ext"] = time.perf_counter() - t0
    family = _operator_family(A, operators)
    t0 = time.perf_counter()
    acts, degs = compute_actions(X, H, bound, family)
    crit = torsion_verdict(table, acts, degs, A.p)
    timings["operators"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    oracle = injective_dimension_oracle(X, bound)
    timings["oracle"] = time.perf_counter() - t0
    consistent = not (crit.certified and oracle.infinite)
    return FidReport(name, A.name or repr(A), family, table, crit, oracle, consistent, acts, timings)


# --- sweep ------------------------------------------------------------------


def sweep_module(A: Algebra, seed: int) -> tuple[Module, dict]:
    """A seeded random module of varied shape, with its recipe."""
    rng = np.random.default_rng(seed)
    a = int(rng.integers(0, 4))
    b = int(rng.integers(1, 3))
    in_rad = bool(rng.integers(0, 2))
    sub = int(rng.integers(0, 2**31))
    M = random_module(A, a, b, sub, in_radical=in_rad)
    return M, {"kind": "random", "a": a, "b": b, "seed": sub, "in_radical": in_rad}


@dataclass
class SweepRecord:
    algebra: str
    index: int
    recipe: dict
    dim: int
    certified: bool
    window: bool
    ml: bool
    oracle: str
    oracle_exact: bool
    pd: str
    projective: bool
    ext_table: list[int]
    violations: list[str]

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SweepReport:
    seed: int
    count: int
    bound: int
    zoo: list[str]
    records: list[SweepRecord]
    koszul: list[dict] = field(default_factory=list)

    @property
    def violations(self) -> list[dict]:
        return [r.to_json() for r in self.records if r.violations]

    @property
    def koszul_failures(self) -> list[dict]:
        return [k for k in self.koszul if not k["finite"]]

    def counts(self) -> dict:
        def tally(pred):
            return sum(1 for r in self.records if pred(r))

        return {
            "targets": len(self.records),
            "certified": tally(lambda r: r.certified),
            "oracle_finite": tally(lambda r: r.oracle.startswith("Finite")),
            "oracle_infinite": tally(lambda r: r.oracle == "Infinite"),
            "soundness_violations": tally(lambda r: any(v.startswith("soundness") for v in r.violations)),
            "converse_violations": tally(lambda r: any(v.startswith("converse") for v in r.violations)),
            "projectivity_violations": tally(lambda r: any(v.startswith("projectivity") for v in r.violations)),
            "window_ml_disagreements": tally(lambda r: r.window != r.ml),
        }

    @property
    def ok(self) -> bool:
        return not self.violations and not self.koszul_failures

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "bound": self.bound,
            "zoo": list(self.zoo),
            "counts": self.counts(),
            "violations": self.violations,
            "koszul": list(self.koszul),
            "records": [r.to_json() for r in self.records],
        }


def _sweep_one(args) -> SweepRecord:
    name, index, seed, bound = args
    A = zoo_algebra(name)
    M, recipe = sweep_module(A, seed)
    rep = check_fid(M, bound, name=f"{name}#{index}")
    table = rep.ext_table
    viol = []
    if rep.criterion.certified and rep.oracle.infinite:
        viol.append("soundness: criterion certified but the oracle is Infinite")
    if rep.oracle.finite and rep.oracle.exact and any(table[1:]):
        viol.append("converse: finite injective dimension but Ext^{>=1}(M, M) != 0")
    proj, _ = is_projective(M)
    pd = projective_dimension(M, bound)
    if A.self_injective and rep.oracle.exact and rep.oracle.finite != proj:
        viol.append("projectivity: oracle Finite disagrees with is_projective")
    if A.self_injective and pd.finite != rep.oracle.finite:
        viol.append("projectivity: pd and id finiteness disagree")
    return SweepRecord(
        name,
        index,
        recipe,
        M.dim,
        rep.criterion.certified,
        first_window(table, 2) is not None,
        first_ml(table, 2) is not None,
        str(rep.oracle),
        rep.oracle.exact,
        str(pd),
        proj,
        list(table),
        viol,
    )


def sweep_seeds(seed: int, zoo: list[str], count: int) -> list[tuple[str, int, int]]:
    """Deterministic per-target seeds derived from the sweep seed."""
    ss = np.random.SeedSequence(seed)
    out = []
    for zi, (name, child) in enumerate(zip(zoo, ss.spawn(len(zoo)))):
        seeds = child.generate_state(count, dtype=np.uint32)
        out += [(name, i, int(s)) for i, s in enumerate(seeds)]
    return out


def verify_koszul_perfection(compacts: list[tuple[str, object]], ops: list[int] | None = None,
                             bound: int = DEFAULT_BOUND) -> list[dict]:
    out = []
    for label, C in compacts:
        v = koszul_pd(C, ops, bound=bound)
        out.append({"target": label, "pd": str(v), "finite": v.finite})
    return out


def koszul_compacts(A: Algebra, name: str, seeds: int = 5) -> list[tuple[str, object]]:
    k = trivial_module(A)
    items = [(f"{name}:k", k), (f"{name}:syz1(k)", syzygy_module(k, 1)), (f"{name}:R", free_module(A, 1))]
    for s in range(seeds):
        items.append((f"{name}:random{s}", random_module(A, 2, 2, s)))
    return items


def verify_theorem_sweep(zoo: list[str] | None = None, count: int = 50, seed: int = 7,
                         bound: int = DEFAULT_BOUND, jobs: int = 1, koszul: bool = True) -> SweepReport:
    """Check soundness, the converse and projectivity on seeded random modules."""
    zoo = list(zoo or DEFAULT_ZOO)
    tasks = [(name, i, s, bound) for name, i, s in sweep_seeds(seed, zoo, count)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(_sweep_one, tasks, chunksize=4))
    else:
        records = [_sweep_one(t) for t in tasks]
    kz = []
    if koszul:
        for name in zoo:
            A = zoo_algebra(name)
            if A.ci is not None:
                kz += verify_koszul_perfection(koszul_compacts(A, name), bound=bound)
    return SweepReport(seed, count, bound, zoo, records, kz)
