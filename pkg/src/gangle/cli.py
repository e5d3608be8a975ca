"""Command line front end.

    gangle <task> --in problem.json [--out report.json] [--seed N] [--samples N]
                  [--refine-iters N] [--tol X] [--quiet]

A problem file is a JSON object::

    {"p": 2, "task": "angle2d",
     "vectors": {"u1": [1, 1, 2, 0], "u2": [2, 1, 3, 0], "v1": [1, 0], "v2": [0, 1]},
     "optimizer": {"samples": 4096, "seed": 42}}

``task`` in the file is optional but must agree with the command line when
present.  The JSON report goes to ``--out`` or stdout; a short human-readable
summary goes to stderr unless ``--quiet``.  Exit status: 0 success, 1 bad
input, 2 numerical failure.
"""
import argparse
from dataclasses import asdict, fields
import json
import math
import re
import sys
import time

from .angle import Subspace2, angle_1d, angle_2d, lemma_factorization_check
from .errors import InvalidInputError, LimitEstimationError, NumericalError
from .gram import gram_context, left_gram_schmidt, project
from .space import LpVector, SpaceConfig, g_closed, g_numeric, lp_norm, tau
from .twonorm import OptimizerConfig, two_norm_g, two_norm_s

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2

# fixed keys per task; None marks an indexed family (prefix1, prefix2, ...)
TASKS = {
    "g": (("x", "y"), None),
    "norm2": (("x1", "x2"), None),
    "project": (("u",), "v"),
    "orthonormalize": ((), "x"),
    "angle1d": (("u",), "v"),
    "angle2d": (("u1", "u2", "v1", "v2"), None),
    "lemma-check": (("u1", "u2", "v1", "v2", "y1", "y2"), None),
}


class ProblemError(InvalidInputError):
    pass


def _line_of(text, key):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _where(text, key):
    line = _line_of(text, key)
    return f"line {line}: " if line else ""


def _vector(text, name, value):
    if not isinstance(value, list) or not value:
        raise ProblemError(f"{_where(text, name)}vector {name!r} must be a nonempty array of numbers")
    for k, c in enumerate(value):
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise ProblemError(f"{_where(text, name)}vector {name!r}[{k}] is not a number: {c!r}")
        if not math.isfinite(c):
            raise ProblemError(f"{_where(text, name)}vector {name!r}[{k}] is not finite: {c!r}")
    return [float(c) for c in value]


def _indexed(vectors, prefix):
    found = []
    for key in vectors:
        m = re.fullmatch(re.escape(prefix) + r"(\d+)", key)
        if m:
            found.append((int(m.group(1)), key))
    return [key for _, key in sorted(found)]


def parse_problem(text: str, task: str = None) -> dict:
    """Validate a problem document; returns ``{"task", "p", "vectors", "optimizer"}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"line {exc.lineno}, column {exc.colno}: malformed JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ProblemError("line 1: the problem must be a JSON object")

    file_task = doc.get("task")
    if task is None:
        task = file_task
    if task not in TASKS:
        raise ProblemError(f"{_where(text, 'task')}unknown task {task!r}; expected one of {sorted(TASKS)}")
    if file_task is not None and file_task != task:
        raise ProblemError(f"{_where(text, 'task')}file task {file_task!r} disagrees with command line {task!r}")

    if "p" not in doc:
        raise ProblemError("missing key 'p'")
    p = doc["p"]
    if isinstance(p, bool) or not isinstance(p, (int, float)) or not math.isfinite(p) or p < 1:
        raise ProblemError(f"{_where(text, 'p')}p must be a finite number >= 1, got {p!r}")

    raw = doc.get("vectors")
    if not isinstance(raw, dict):
        raise ProblemError(f"{_where(text, 'vectors')}'vectors' must be an object of named arrays")
    fixed, family = TASKS[task]
    names = list(fixed)
    if family is not None:
        extra = _indexed(raw, family)
        if not extra:
            raise ProblemError(f"{_where(text, 'vectors')}task {task!r} needs vectors {family}1, {family}2, ...")
        names += extra
    missing = [k for k in names if k not in raw]
    if missing:
        raise ProblemError(f"{_where(text, 'vectors')}task {task!r} is missing vector(s) {missing}")
    vectors = {k: _vector(text, k, raw[k]) for k in names}

    opt = doc.get("optimizer", {})
    if not isinstance(opt, dict):
        raise ProblemError(f"{_where(text, 'optimizer')}'optimizer' must be an object")
    known = {f.name for f in fields(OptimizerConfig)}
    unknown = sorted(set(opt) - known)
    if unknown:
        raise ProblemError(f"{_where(text, 'optimizer')}unknown optimizer setting(s) {unknown}")

    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise ProblemError(f"{_where(text, 'options')}'options' must be an object")
    return {"task": task, "p": float(p), "vectors": vectors, "optimizer": dict(opt), "options": dict(options)}


def _family(vectors, prefix):
    return [vectors[k] for k in _indexed(vectors, prefix)]


def run_task(problem: dict, opt: OptimizerConfig) -> tuple:
    """Execute a parsed problem; returns ``(results, diagnostics)``."""
    task = problem["task"]
    cfg = SpaceConfig(p=problem["p"])
    vec = problem["vectors"]
    options = problem.get("options", {})

    if task == "g":
        x, y = vec["x"], vec["y"]
        res = {"g_closed": g_closed(x, y, cfg), "g_numeric": None, "norm_x": lp_norm(x, cfg)}
        diag = {}
        # the closed form is exact; a slow one-sided limit only voids the numeric cross-check
        try:
            res["g_numeric"] = g_numeric(x, y, cfg)
            if not LpVector(x).is_zero():
                tp, tm = tau(x, y, cfg)
                res.update(tau_plus=tp, tau_minus=tm)
        except LimitEstimationError as exc:
            diag["g_numeric_error"] = str(exc)
        return res, diag

    if task == "norm2":
        r = two_norm_g(vec["x1"], vec["x2"], cfg, opt)
        res = {"value": r.value, "argmax_y1": r.argmax_y1.tolist(), "argmax_y2": r.argmax_y2.tolist()}
        if cfg.p == 2.0:
            res["value_gram"] = two_norm_s(vec["x1"], vec["x2"])
        return res, {"evaluations": r.evaluations, "converged": r.converged}

    if task == "project":
        ctx = gram_context(_family(vec, "v"), cfg)
        r = project(vec["u"], ctx)
        res = {
            "projected": r.projected.tolist(),
            "complement": r.complement.tolist(),
            "coefficients": list(r.coefficients),
            "gamma": ctx.gamma,
        }
        return res, {}

    if task == "orthonormalize":
        out = left_gram_schmidt(_family(vec, "x"), cfg)
        ctx = gram_context(out, cfg)
        return {"vectors": [v.tolist() for v in out], "gram": ctx.gram.tolist(), "gamma": ctx.gamma}, {}

    if task == "angle1d":
        r = angle_1d(vec["u"], _family(vec, "v"), cfg)
        res = {"cos_sq": r.cos_sq, "angle_rad": r.angle_rad, "projection": r.diagnostics["projection"]}
        return res, {}

    U = Subspace2(vec["u1"], vec["u2"])
    V = Subspace2(vec["v1"], vec["v2"])
    if task == "angle2d":
        r = angle_2d(U, V, cfg, opt, projection_basis=options.get("projection_basis", "sup"))
        d = r.diagnostics
        res = {
            "cos_sq": r.cos_sq,
            "angle_rad": r.angle_rad,
            "num": r.num,
            "den_norm": r.den_norm,
            "den_sup": r.den_sup,
            "projections": d["projections"],
            "orthonormal_basis": d["orthonormal_basis"],
        }
        diag = {k: d[k] for k in ("num", "den_norm", "den_sup", "projection_basis")}
        return res, diag

    # lemma-check
    vstar = Subspace2(*left_gram_schmidt(V.basis, cfg))
    lhs, rhs = lemma_factorization_check(U, vstar, vec["y1"], vec["y2"], cfg)
    res = {
        "lhs": lhs,
        "rhs": rhs,
        "abs_diff": abs(lhs - rhs),
        "holds": abs(lhs - rhs) <= 1e-9 * (1.0 + abs(lhs)),
        "orthonormal_basis": [vstar.b1.tolist(), vstar.b2.tolist()],
    }
    return res, {}


def _summary(report) -> str:
    r = report["results"]
    lines = [f"task {report['task']} (p = {report['inputs']['p']})"]
    for key in ("value", "value_gram", "g_closed", "g_numeric", "gamma", "cos_sq", "lhs", "rhs"):
        if r.get(key) is not None:
            lines.append(f"  {key:<10} {r[key]:.12g}")
    if "angle_rad" in r:
        lines.append(f"  angle      {r['angle_rad']:.12g} rad = {math.degrees(r['angle_rad']):.9g} deg")
    return "\n".join(lines)


def build_parser():
    parser = argparse.ArgumentParser(prog="gangle", description=__doc__.split("\n\n")[0])
    parser.add_argument("task", choices=sorted(TASKS))
    parser.add_argument("--in", dest="infile", required=True, metavar="PATH", help="problem file (JSON)")
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--refine-iters", type=int, dest="refine_iters")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--quiet", action="store_true", help="no summary on stderr")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    err = sys.stderr
    try:
        with open(args.infile, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.infile}: {exc.strerror}", file=err)
        return EXIT_INPUT

    start = time.perf_counter()
    try:
        problem = parse_problem(text, args.task)
        overrides = {k: getattr(args, k) for k in ("seed", "samples", "refine_iters", "tol")}
        settings = dict(problem["optimizer"])
        settings.update({k: v for k, v in overrides.items() if v is not None})
        opt = OptimizerConfig(**settings)
        results, diagnostics = run_task(problem, opt)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error ({type(exc).__name__}): {exc}", file=err)
        return EXIT_NUMERICAL

    report = {
        "format_version": FORMAT_VERSION,
        "task": problem["task"],
        "inputs": {
            "p": problem["p"],
            "vectors": problem["vectors"],
            "optimizer": asdict(opt),
            "options": problem["options"],
        },
        "results": results,
        "diagnostics": dict(diagnostics, seed=opt.seed, wall_time_s=time.perf_counter() - start),
    }
    payload = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    if not args.quiet:
        print(_summary(report), file=err)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
