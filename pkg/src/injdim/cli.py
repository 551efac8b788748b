"""Command-line front end.

    injdim JOB.json [--bound N] [--seed S] [--format json|text] [--jobs K] [--zoo a,b]

Reads a JSON job description (``-`` for stdin), runs it and prints the
result.  Exit status: 0 on success, 1 on input errors, 2 when a consistency
check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import jsonschema
import numpy as np

from . import __version__
from .algebra import AlgebraError, from_structure_constants, group_algebra, truncated_ci
from .complexes import Complex, ComplexError, check_complex
from .ext import ext_hom
from .fid import DEFAULT_BOUND, DEFAULT_ZOO, ZOO, check_fid, verify_theorem_sweep, zoo_algebra
from .linalg import is_prime
from .modules import (
    ModuleError,
    direct_sum,
    free_module,
    module_from_actions,
    random_module,
    syzygy_module,
    trivial_module,
    zero_module,
)
from .operators import eisenbud_operators, koszul_of, operator_action
from .complexes import minimize
from .render import render_text, to_json
from .resolution import projective_dimension
from . import linalg as la

COMMANDS = ["resolve", "ext", "operators", "koszul", "check-fid", "verify"]

_TARGET = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["trivial", "free", "zero", "random", "module", "syzygy", "sum", "complex"]},
        "rank": {"type": "integer", "minimum": 0},
        "a": {"type": "integer", "minimum": 0},
        "b": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "in_radical": {"type": "boolean"},
        "dim": {"type": "integer", "minimum": 0},
        "actions": {"type": "array"},
        "n": {"type": "integer", "minimum": 0},
        "of": {"$ref": "#/$defs/target"},
        "summands": {"type": "array", "items": {"$ref": "#/$defs/target"}, "minItems": 1},
        "lo": {"type": "integer"},
        "terms": {"type": "array", "items": {"$ref": "#/$defs/target"}, "minItems": 1},
        "diffs": {"type": "array"},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "free"}}}, "then": {"required": ["rank"]}},
        {"if": {"properties": {"kind": {"const": "random"}}}, "then": {"required": ["a", "b"]}},
        {"if": {"properties": {"kind": {"const": "module"}}}, "then": {"required": ["dim", "actions"]}},
        {"if": {"properties": {"kind": {"const": "syzygy"}}}, "then": {"required": ["of"]}},
        {"if": {"properties": {"kind": {"const": "sum"}}}, "then": {"required": ["summands"]}},
        {"if": {"properties": {"kind": {"const": "complex"}}}, "then": {"required": ["terms"]}},
    ],
}

JOB_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command"],
    "properties": {
        "command": {"enum": COMMANDS},
        "algebra": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["truncated_ci", "group_algebra", "zoo", "structure_constants"]},
                "p": {"type": "integer", "minimum": 2},
                "exponents": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
                "factors": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                "name": {"enum": list(ZOO)},
                "mult": {"type": "array"},
                "unit": {"type": "array"},
                "augmentation": {"type": "array"},
            },
            "allOf": [
                {"if": {"properties": {"kind": {"const": "truncated_ci"}}}, "then": {"required": ["p", "exponents"]}},
                {"if": {"properties": {"kind": {"const": "group_algebra"}}}, "then": {"required": ["p", "factors"]}},
                {"if": {"properties": {"kind": {"const": "zoo"}}}, "then": {"required": ["name"]}},
                {"if": {"properties": {"kind": {"const": "structure_constants"}}}, "then": {"required": ["p", "mult"]}},
            ],
        },
        "target": {"$ref": "#/$defs/target"},
        "bound": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "format": {"enum": ["json", "text"]},
        "operators": {"enum": ["auto", "eisenbud", "hopf"]},
        "ops": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "count": {"type": "integer", "minimum": 0},
        "zoo": {"type": "array", "items": {"enum": list(ZOO)}},
        "jobs": {"type": "integer", "minimum": 1},
    },
    "allOf": [
        {
            "if": {"properties": {"command": {"not": {"const": "verify"}}}},
            "then": {"required": ["algebra", "target"]},
        }
    ],
    "$defs": {"target": _TARGET},
}


class InputError(ValueError):
    """A job description that cannot be run; ``path`` is a JSON pointer."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass
class JobSpec:
    command: str
    algebra: dict | None
    target: dict | None
    bound: int = DEFAULT_BOUND
    seed: int = 7
    format: str = "json"
    operators: str = "auto"
    ops: list[int] | None = None
    count: int = 50
    zoo: list[str] | None = None
    jobs: int = 1


def _pointer(parts) -> str:
    return "/" + "/".join(str(p) for p in parts) if parts else "/"


def parse_input(document: str | dict) -> JobSpec:
    """Validate a JSON job description and return a JobSpec."""
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError("/", f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    else:
        doc = document
    validator = jsonschema.Draft202012Validator(JOB_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        # a bad command makes the conditional requirements meaningless
        cmd_errors = [e for e in errors if list(e.absolute_path) == ["command"]]
        err = cmd_errors[0] if cmd_errors else jsonschema.exceptions.best_match(errors)
        path = list(err.absolute_path)
        if err.validator == "required":
            missing = [r for r in err.validator_value if not isinstance(err.instance, dict) or r not in err.instance]
            if missing:
                path.append(missing[0])
        raise InputError(_pointer(path), err.message)
    alg = doc.get("algebra")
    if alg is not None:
        _check_algebra(alg)
    return JobSpec(
        command=doc["command"],
        algebra=alg,
        target=doc.get("target"),
        bound=doc.get("bound", DEFAULT_BOUND),
        seed=doc.get("seed", 7),
        format=doc.get("format", "json"),
        operators=doc.get("operators", "auto"),
        ops=doc.get("ops"),
        count=doc.get("count", 50),
        zoo=doc.get("zoo"),
        jobs=doc.get("jobs", 1),
    )


def _check_algebra(alg: dict) -> None:
    if "p" in alg and not is_prime(alg["p"]):
        raise InputError("/algebra/p", f"characteristic {alg['p']} is not prime")
    if alg["kind"] == "group_algebra":
        p = alg["p"]
        for i, f in enumerate(alg["factors"]):
            q = f
            while q % p == 0:
                q //= p
            if q != 1:
                raise InputError(f"/algebra/factors/{i}", f"factor {f} is not a power of {p}")


def build_algebra(desc: dict):
    kind = desc["kind"]
    try:
        if kind == "truncated_ci":
            return truncated_ci(desc["p"], desc["exponents"])
        if kind == "group_algebra":
            return group_algebra(desc["p"], desc["factors"])
        if kind == "zoo":
            return zoo_algebra(desc["name"])
        return from_structure_constants(
            desc["p"], np.asarray(desc["mult"], dtype=np.int64), desc.get("unit"), desc.get("augmentation")
        )
    except (AlgebraError, ValueError) as exc:
        raise InputError("/algebra", str(exc)) from None


def build_target(A, desc: dict, path: str = "/target"):
    """A Module, or a Complex for kind 'complex'."""
    kind = desc["kind"]
    try:
        if kind == "trivial":
            return trivial_module(A)
        if kind == "zero":
            return zero_module(A)
        if kind == "free":
            return free_module(A, desc["rank"])
        if kind == "random":
            return random_module(A, desc["a"], desc["b"], desc.get("seed", 0), desc.get("in_radical", False))
        if kind == "module":
            return module_from_actions(A, desc["dim"], desc["actions"])
        if kind == "syzygy":
            M = build_target(A, desc["of"], path + "/of")
            if isinstance(M, Complex):
                raise InputError(path + "/of", "syzygies are taken of modules")
            return syzygy_module(M, desc.get("n", 1))
        if kind == "sum":
            mods = [build_target(A, s, f"{path}/summands/{i}") for i, s in enumerate(desc["summands"])]
            if any(isinstance(m, Complex) for m in mods):
                raise InputError(path + "/summands", "summands must be modules")
            return direct_sum(*mods)
        terms = [build_target(A, s, f"{path}/terms/{i}") for i, s in enumerate(desc["terms"])]
        diffs = [np.asarray(d, dtype=np.int64).reshape(terms[i + 1].dim, terms[i].dim) % A.p
                 for i, d in enumerate(desc.get("diffs", []))]
        X = Complex(A, desc.get("lo", 0), terms, diffs)
        check_complex(X)
        return X
    except InputError:
        raise
    except (ModuleError, ComplexError, ValueError) as exc:
        raise InputError(path, str(exc)) from None


def _describe(desc: dict | None) -> str:
    if desc is None:
        return "-"
    return json.dumps(desc, sort_keys=True, separators=(",", ":"))


def _algebra_label(A) -> str:
    return A.name or f"dim{A.dim}/F{A.p}"


def run(job: JobSpec) -> tuple[int, dict]:
    """Execute a job; returns (exit status, JSON-ready result)."""
    if job.command == "verify":
        rep = verify_theorem_sweep(job.zoo or DEFAULT_ZOO, job.count, job.seed, job.bound, job.jobs)
        out = {"command": "verify", "bound": job.bound, **rep.to_json()}
        return (0 if rep.ok else 2), out

    A = build_algebra(job.algebra)
    X = build_target(A, job.target)
    base = {
        "command": job.command,
        "algebra": _algebra_label(A),
        "target": _describe(job.target),
        "bound": job.bound,
    }
    if job.command == "resolve":
        Xc = Complex.from_module(X) if not isinstance(X, Complex) else X
        res = Xc.resolution(job.bound)
        P = res.complex
        degs = list(range(P.hi, P.lo - 1, -1))
        base.update(
            degrees=degs,
            betti=[P.rank(d) for d in degs],
            complete=res.complete,
            pd=projective_dimension(X, job.bound).to_json(),
        )
        return 0, base
    if job.command == "ext":
        H = ext_hom(X, X, job.bound + 1)
        base["ext_table"] = H.ext_dims(0, job.bound)
        return 0, base
    if job.command == "operators":
        if A.ci is None:
            raise InputError("/algebra", "operators need a complete-intersection presentation")
        H = ext_hom(X, X, job.bound + 1)
        acts = [operator_action(t, H, 0, job.bound) for t in eisenbud_operators(H.P)]
        commute = True
        for i in range(len(acts)):
            for j in range(i + 1, len(acts)):
                for n in acts[i].matrices:
                    if n + 2 not in acts[i].matrices:
                        continue
                    ab = la.matmul(acts[i].matrices[n + 2], acts[j].matrices[n], A.p)
                    ba = la.matmul(acts[j].matrices[n + 2], acts[i].matrices[n], A.p)
                    commute &= bool(np.array_equal(ab, ba))
        ops = []
        for a in acts:
            d = a.to_json()
            d["ranks"] = {str(n): la.rank(m, A.p) for n, m in sorted(a.matrices.items())}
            ops.append(d)
        base.update(ext_table=H.ext_dims(0, job.bound), operators=ops, commute=commute)
        return 0, base
    if job.command == "koszul":
        if A.ci is None:
            raise InputError("/algebra", "Koszul objects need a complete-intersection presentation")
        ops = job.ops if job.ops is not None else list(range(A.ci.c))
        if any(o >= A.ci.c for o in ops):
            raise InputError("/ops", f"operator index out of range (c = {A.ci.c})")
        K = koszul_of(X, ops)
        pd = projective_dimension(K, job.bound)
        Km = minimize(K)
        # the bottom term carries truncation debris; only degrees above it are reported
        degs = list(range(Km.hi, Km.lo, -1))
        base.update(ops=ops, degrees=degs, ranks=[Km.rank(d) for d in degs], pd=pd.to_json())
        return 0, base
    rep = check_fid(X, job.bound, job.operators, name=_describe(job.target))
    base.update(rep.to_json())
    base["target"] = _describe(job.target)
    return (0 if rep.consistent else 2), base


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="injdim", description="Finite injective dimension via cohomology operators.")
    ap.add_argument("job", help="JSON job file, or - for stdin")
    ap.add_argument("--bound", type=int, help=f"resolution bound (default {DEFAULT_BOUND})")
    ap.add_argument("--seed", type=int, help="sweep seed")
    ap.add_argument("--format", choices=["json", "text"], help="output format")
    ap.add_argument("--jobs", type=int, help="parallel workers for sweeps")
    ap.add_argument("--zoo", help="comma-separated zoo algebra names for sweeps")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = sys.stdin.read() if args.job == "-" else open(args.job, encoding="utf-8").read()
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        print(f"input error at /: invalid JSON: {exc.msg}", file=sys.stderr)
        return 1
    if isinstance(doc, dict):
        for key in ("bound", "seed", "format", "jobs"):
            val = getattr(args, key)
            if val is not None:
                doc[key] = val
        if args.zoo is not None:
            doc["zoo"] = [z.strip() for z in args.zoo.split(",") if z.strip()]
    try:
        job = parse_input(doc)
        status, result = run(job)
    except InputError as exc:
        print(f"input error at {exc.path}: {exc.message}", file=sys.stderr)
        return 1
    out = render_text(result) if job.format == "text" else to_json(result)
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
