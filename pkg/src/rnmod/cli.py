"""Command-line front end.

Reads a JSON instance, runs one command and writes a deterministic JSON
report to stdout and a one-line summary to stderr.

Exit codes: 0 feasible/success, 1 infeasible (with certificate where one
exists), 2 input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any

import jsonschema
import numpy as np

from . import axioms, concatenation, helly, separation, stratification, weak_star
from .conjugate import BidualTarget, RandomFunctional, functional_norm
from .l0 import AtomicSpace, AtomSet, DomainError, L0Scalar, PreconditionError
from .module import RNElement, norm

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
PROB_TOL = 1e-9

_scalar = {"oneOf": [{"type": "number"},
                     {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}
_vector = {"type": "array", "items": _scalar, "minItems": 1}
_piece = {
    "type": "object",
    "oneOf": [
        {"required": ["ball"], "properties": {"ball": {
            "type": "object", "required": ["center", "radius"],
            "properties": {"center": _vector, "radius": {"type": "number", "minimum": 0}},
            "additionalProperties": False}}},
        {"required": ["hull"], "properties": {"hull": {
            "type": "object", "required": ["points"],
            "properties": {"points": {"type": "array", "items": _vector, "minItems": 1}},
            "additionalProperties": False}}},
    ],
}
_per_atom_scalars = {"type": "array", "items": _scalar}
_body = {"type": "array", "items": _piece}

SCHEMA = {
    "type": "object",
    "required": ["space", "field", "dim"],
    "properties": {
        "space": {
            "type": "object", "required": ["atoms", "probs"],
            "properties": {"atoms": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                           "probs": {"type": "array", "items": {"type": "number",
                                                                "exclusiveMinimum": 0}}},
            "additionalProperties": False,
        },
        "field": {"enum": ["real", "complex"]},
        "dim": {"type": "integer", "minimum": 1},
        "functionals": {"type": "array", "items": {"type": "array", "items": _vector}},
        "targets": {"type": "array", "items": _per_atom_scalars},
        "beta": _per_atom_scalars,
        "epsilon": _per_atom_scalars,
        "x": {"type": "array", "items": _vector},
        "bodies": {"type": "object",
                   "properties": {"G": _body, "M": _body, "B": _body},
                   "additionalProperties": False},
        "g_interior": {"type": "boolean"},
    },
    "additionalProperties": False,
}


class InputError(ValueError):
    """Invalid instance; ``pointer`` names the offending field."""

    def __init__(self, pointer: str, msg: str):
        super().__init__(f"{pointer}: {msg}")
        self.pointer = pointer


# --- JSON <-> values --------------------------------------------------------

def _num(v, cplx: bool, where: str):
    if isinstance(v, list):
        if not cplx:
            raise InputError(where, "[re, im] pair in a real instance")
        return complex(v[0], v[1])
    return complex(v) if cplx else float(v)


def _enc(v) -> Any:
    """Scalar to JSON: plain number when real, ``[re, im]`` when complex."""
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real) + 0.0, float(v.imag) + 0.0]
    v = float(v) + 0.0  # no negative zeros in reports
    return v if np.isfinite(v) else None


def _enc_array(a: np.ndarray) -> Any:
    if a.ndim == 0:
        return _enc(a.item())
    return [_enc_array(x) for x in a]


@dataclass(eq=False)
class InstanceFile:
    """A parsed instance; equality is equality of canonical JSON."""

    space: AtomicSpace
    dim: int
    functionals: list[RandomFunctional] | None = None
    targets: list[L0Scalar] | None = None
    beta: L0Scalar | None = None
    epsilon: L0Scalar | None = None
    x: RNElement | None = None
    bodies: dict[str, separation.ConvexBody] | None = None
    g_interior: bool = True

    def to_json(self) -> dict:
        cplx = self.space.is_complex
        out: dict[str, Any] = {
            "space": {"atoms": list(self.space.atoms), "probs": self.space.probs.tolist()},
            "field": self.space.field,
            "dim": self.dim,
        }
        if self.functionals is not None:
            out["functionals"] = [_enc_array(f.riesz.coords) for f in self.functionals]
        if self.targets is not None:
            out["targets"] = [_enc_array(t.values.astype(complex) if cplx else t.values)
                              for t in self.targets]
        if self.beta is not None:
            out["beta"] = _enc_array(self.beta.values)
        if self.epsilon is not None:
            out["epsilon"] = _enc_array(self.epsilon.values)
        if self.x is not None:
            out["x"] = _enc_array(self.x.coords)
        if self.bodies is not None:
            out["bodies"] = {k: [_enc_piece(p, cplx) for p in b.pieces]
                             for k, b in sorted(self.bodies.items())}
            out["g_interior"] = self.g_interior
        return out

    def __eq__(self, other):
        if not isinstance(other, InstanceFile):
            return NotImplemented
        return _dumps(self.to_json()) == _dumps(other.to_json())


def _enc_piece(p, cplx: bool) -> dict:
    if isinstance(p, separation.Ball):
        c = p.center.astype(complex) if cplx else p.center
        return {"ball": {"center": _enc_array(c), "radius": float(p.radius)}}
    pts = p.points.astype(complex) if cplx else p.points
    return {"hull": {"points": _enc_array(pts)}}


def parse_instance(doc: dict) -> InstanceFile:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        raise InputError(e.json_path, e.message) from None
    atoms = doc["space"]["atoms"]
    probs = doc["space"]["probs"]
    if len(probs) != len(atoms):
        raise InputError("$.space.probs", "need one probability per atom")
    if abs(sum(probs) - 1) > PROB_TOL:
        raise InputError("$.space.probs", f"probabilities sum to {sum(probs)!r}")
    if len(set(atoms)) != len(atoms):
        raise InputError("$.space.atoms", "atom identifiers must be unique")
    cplx = doc["field"] == "complex"
    space = AtomicSpace(atoms, probs, doc["field"], rtol=PROB_TOL)
    m, d = len(atoms), doc["dim"]

    def per_atom(values, where, cplx=cplx):
        if len(values) != m:
            raise InputError(where, f"expected {m} per-atom values, got {len(values)}")
        return np.array([_num(v, cplx, f"{where}[{a}]") for a, v in enumerate(values)])

    def vectors(rows, where, length=None):
        if len(rows) != (m if length is None else length):
            raise InputError(where, f"expected {m if length is None else length} vectors")
        out = []
        for a, row in enumerate(rows):
            if len(row) != d:
                raise InputError(f"{where}[{a}]", f"expected a vector of length {d}")
            out.append([_num(v, cplx, f"{where}[{a}]") for v in row])
        return np.array(out, dtype=space.dtype)

    inst = InstanceFile(space, d)
    if "functionals" in doc:
        inst.functionals = [RandomFunctional(RNElement(space, vectors(f, f"$.functionals[{k}]")))
                            for k, f in enumerate(doc["functionals"])]
    if "targets" in doc:
        inst.targets = [L0Scalar(space, per_atom(t, f"$.targets[{k}]"))
                        for k, t in enumerate(doc["targets"])]
        if inst.functionals is not None and len(inst.targets) != len(inst.functionals):
            raise InputError("$.targets", "need one target per functional")
    for key in ("beta", "epsilon"):
        if key in doc:
            vals = per_atom(doc[key], f"$.{key}", cplx=False)
            if key == "beta" and np.any(vals < 0):
                raise InputError("$.beta", "budget must be nonnegative")
            if key == "epsilon" and np.any(vals <= 0):
                raise InputError("$.epsilon", "must be positive on every atom")
            setattr(inst, key, L0Scalar(space, vals))
    if "x" in doc:
        inst.x = RNElement(space, vectors(doc["x"], "$.x"))
    if "bodies" in doc:
        inst.g_interior = doc.get("g_interior", True)
        inst.bodies = {}
        for name, pieces in doc["bodies"].items():
            where = f"$.bodies.{name}"
            if len(pieces) != m:
                raise InputError(where, f"expected {m} pieces, got {len(pieces)}")
            parsed = []
            for a, p in enumerate(pieces):
                if "ball" in p:
                    c = vectors([p["ball"]["center"]], f"{where}[{a}].ball.center", 1)[0]
                    parsed.append(separation.Ball(c, float(p["ball"]["radius"])))
                else:
                    pts = p["hull"]["points"]
                    parsed.append(separation.Hull(
                        vectors(pts, f"{where}[{a}].hull.points", len(pts))))
            interior = inst.g_interior if name == "G" else True
            inst.bodies[name] = separation.ConvexBody(space, parsed, interior)
    return inst


def _require(inst: InstanceFile, *fields: str):
    for f in fields:
        if getattr(inst, f) is None:
            raise InputError(f"$.{f}", "required by this command")


def _require_body(inst: InstanceFile, name: str) -> separation.ConvexBody:
    if not inst.bodies or name not in inst.bodies:
        raise InputError(f"$.bodies.{name}", "required by this command")
    return inst.bodies[name]


def _atomset(A: AtomSet) -> list:
    return list(A)


def _scalar(xi: L0Scalar):
    return _enc_array(xi.values)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


# --- commands -------------------------------------------------------------

def _helly_instance(inst: InstanceFile) -> helly.HellyInstance:
    _require(inst, "functionals", "targets", "beta")
    return helly.HellyInstance(inst.functionals, inst.targets, inst.beta, inst.epsilon)


def _verdict_report(v: helly.HellyVerdict) -> dict:
    out = {"feasible": v.feasible, "min_norm": _scalar(v.min_norm)}
    if v.solution is not None:
        out["solution"] = _enc_array(v.solution.coords)
        out["solution_norm"] = _scalar(norm(v.solution))
        out["within_budget_without_slack"] = v.sharp
    if v.certificate is not None:
        out["certificate"] = {"lambda": [_scalar(l) for l in v.certificate.lambdas],
                              "violation_set": _atomset(v.certificate.violation_set),
                              "violation_measure": v.certificate.violation_set.measure()}
    return out


def cmd_check(inst, args):
    hi = _helly_instance(inst)
    v = helly.check_condition(hi, args.tolerance or helly.TOL)
    rep = _verdict_report(v)
    rep["oracle_sup_ratio"] = _scalar(helly.sup_ratio_oracle(
        hi.functionals, hi.targets, args.samples or 10_000, args.seed))
    msg = "condition holds" if v.feasible else "condition fails; certificate attached"
    return rep, (EXIT_OK if v.feasible else EXIT_INFEASIBLE), msg


def cmd_solve(inst, args):
    v = helly.solve(_helly_instance(inst), args.tolerance or helly.TOL)
    msg = "solved" if v.feasible else "infeasible; certificate attached"
    return _verdict_report(v), (EXIT_OK if v.feasible else EXIT_INFEASIBLE), msg


def cmd_stratify(inst, args):
    _require(inst, "functionals")
    st = stratification.quasi_free_stratification(
        inst.functionals, args.tolerance or stratification.RANK_TOL)
    rep = {
        "strata": {str(i): _atomset(A) for i, A in enumerate(st.parts) if A},
        "bases": {str(i): [_enc_array(g.riesz.coords) for g in b] for i, b in st.bases.items()},
        "selection": {a: [int(k) for k in row if k >= 0]
                      for a, row in zip(inst.space.atoms, st.selection)},
    }
    return rep, EXIT_OK, f"{len(st.nonempty())} nonempty strata"


def cmd_separate(inst, args):
    G, M = _require_body(inst, "G"), _require_body(inst, "M")
    try:
        f, H = separation.separate(G, M, jobs=args.jobs)
    except separation.NoSeparationError as e:
        return {"separable": False, "reason": str(e)}, EXIT_INFEASIBLE, "bodies meet on every atom"
    rep = {
        "separable": True,
        "H": _atomset(H),
        "H_measure": H.measure(),
        "riesz": _enc_array(f.riesz.coords),
        "sup_G": _scalar(separation.support_function(G, f.riesz)),
        "inf_M": _scalar(-separation.support_function(M, -f.riesz)),
    }
    return rep, EXIT_OK, f"separated on {len(H)} atoms"


def cmd_gauge(inst, args):
    B = _require_body(inst, "B")
    _require(inst, "x")
    p = separation.gauge(B, inst.x)
    return {"gauge": _scalar(p)}, EXIT_OK, "gauge computed"


def cmd_goldstine(inst, args):
    _require(inst, "functionals", "targets", "epsilon")
    bt = BidualTarget(inst.functionals, inst.targets)
    try:
        x = weak_star.goldstine_witness(bt, inst.epsilon)
    except weak_star.NotInUnitBidualBall as e:
        rep = {"realizable": False}
        if e.certificate is not None:
            rep["certificate"] = {"lambda": [_scalar(l) for l in e.certificate.lambdas],
                                  "violation_set": _atomset(e.certificate.violation_set)}
        return rep, EXIT_INFEASIBLE, "targets not realizable in the unit ball"
    errors = [abs(f(x) - t) for f, t in zip(bt.functionals, bt.targets)]
    rep = {"realizable": True, "witness": _enc_array(x.coords), "witness_norm": _scalar(norm(x)),
           "errors": [_scalar(e) for e in errors]}
    return rep, EXIT_OK, "witness constructed"


def cmd_exclude(inst, args):
    _require(inst, "functionals")
    g = inst.functionals[0]
    x, nb = weak_star.excluding_neighborhood(g)
    rep = {"anchor": _enc_array(x.coords), "eps": nb.eps, "lam": nb.lam,
           "functional_norm": _scalar(functional_norm(g))}
    return rep, EXIT_OK, "excluding neighborhood constructed"


def cmd_counterexample(inst, args):
    r = concatenation.counterexample_check(samples=args.samples or 1000, seed=args.seed)
    rep = r.as_dict()
    rep["solvable"] = False
    code = EXIT_INFEASIBLE if r.passed else EXIT_INTERNAL
    return rep, code, ("condition holds but no solution exists" if r.passed
                       else "counterexample check FAILED")


def cmd_axioms(inst, args):
    res = axioms.run_axiom_suites(seed=args.seed, samples=args.samples or 1000)
    rep = {k: {"passed": p, "total": t} for k, (p, t) in res.items()}
    failed = [k for k, (p, t) in res.items() if p != t]
    rep["failed_laws"] = failed
    return rep, (EXIT_OK if not failed else EXIT_INTERNAL), (
        "all laws hold" if not failed else f"laws with failures: {', '.join(failed)}")


COMMANDS = {
    "check": (cmd_check, True),
    "solve": (cmd_solve, True),
    "separate": (cmd_separate, True),
    "stratify": (cmd_stratify, True),
    "gauge": (cmd_gauge, True),
    "goldstine": (cmd_goldstine, True),
    "exclude": (cmd_exclude, True),
    "counterexample": (cmd_counterexample, False),
    "axioms": (cmd_axioms, False),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rnmod", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--instance", help="path to a JSON instance file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=None,
                   help="rank/consistency tolerance (relative)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--samples", type=int, default=None, help="sample count for sampling commands")
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.seed < 0 or args.jobs < 1 or (args.samples is not None and args.samples < 1):
        print("error: --seed must be >= 0, --jobs and --samples >= 1", file=stderr)
        return EXIT_INPUT
    fn, needs_instance = COMMANDS[args.command]
    report: dict[str, Any] = {"command": args.command, "seed": args.seed}
    inst = None
    try:
        if needs_instance:
            if not args.instance:
                raise InputError("--instance", "required by this command")
            try:
                with open(args.instance) as fh:
                    doc = json.load(fh)
            except (OSError, json.JSONDecodeError) as e:
                raise InputError("--instance", str(e)) from None
            inst = parse_instance(doc)
            report["instance"] = inst.to_json()
        body, code, summary = fn(inst, args)
    except InputError as e:
        print(json.dumps({"error": str(e), "pointer": e.pointer}, sort_keys=True), file=stdout)
        print(f"input error at {e.pointer}", file=stderr)
        return EXIT_INPUT
    except (PreconditionError, DomainError) as e:
        print(json.dumps({"error": str(e), "pointer": None}, sort_keys=True), file=stdout)
        print(f"input error: {e}", file=stderr)
        return EXIT_INPUT
    except Exception as e:  # noqa: BLE001
        print(json.dumps({"error": f"{type(e).__name__}: {e}"}, sort_keys=True), file=stdout)
        print(f"internal error: {e}", file=stderr)
        return EXIT_INTERNAL
    report["result"] = body
    report["exit_code"] = code
    print(_dumps(report), file=stdout)
    print(f"{args.command}: {summary}", file=stderr)
    return code


def main():
    sys.exit(run())
