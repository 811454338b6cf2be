"""Command line front end.

Reports go to standard output as JSON (sorted keys, so identical runs are
byte-identical); logging goes to standard error.  Exit codes: 0 success,
1 invalid input (with a JSON error object), 2 a mathematical check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from . import exact as ex
from .elliptic import classify, parse_points
from .errors import OrthoQuivError
from .fixtures import get_fixture, list_fixtures
from .groups import gl_group, group_for_quiver
from .invariants import check_invariance_family, generate_invariants, restriction_surjectivity_check
from .local_models import local_model_report
from .quiver import DecompositionData, DimensionVector, Quiver, double, from_decomposition

log = logging.getLogger("orthoquiv")

EXIT_OK, EXIT_INVALID, EXIT_REFUTED = 0, 1, 2
SEED_MASK = 2**64 - 1


class ValidationError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    fixture: str | None = None
    input: str | None = None
    seed: int = 0
    degree_bound: int = 4
    max_cycle_len: int | None = None
    n_samples: int = 50
    n_reps: int = 10
    n_points: int | None = None
    backend: str = "exact"
    tolerance: float = 1e-9
    gl: bool = False
    group: str = "SO"
    oriented: bool = False
    rank: int | None = None
    w2: int = 1
    points: str = ""
    extra: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# inputs


def _load_document(cfg: RunConfig) -> dict:
    if cfg.fixture and cfg.input:
        raise ValidationError("give either --fixture or --input, not both")
    if cfg.fixture:
        try:
            return get_fixture(cfg.fixture).data.to_json()
        except KeyError as exc:
            raise ValidationError(str(exc.args[0])) from None
    if cfg.input:
        try:
            return json.loads(Path(cfg.input).read_text())
        except OSError as exc:
            raise ValidationError(f"cannot read {cfg.input}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{cfg.input} is not valid JSON: {exc}") from None
    raise ValidationError("an input is required: --fixture NAME or --input FILE")


def _load_decomposition(cfg: RunConfig) -> DecompositionData:
    doc = _load_document(cfg)
    return DecompositionData.from_json(doc)


def _load_quiver(cfg: RunConfig):
    """``(quiver, alpha, ambient_sign)`` from either document type."""
    doc = _load_document(cfg)
    if isinstance(doc, dict) and "summands" in doc:
        d = DecompositionData.from_json(doc)
        q, alpha, _ = from_decomposition(d)
        return q, alpha, (1 if d.ambient == "orthogonal" else -1)
    if isinstance(doc, dict) and "vertices" in doc:
        q = Quiver.from_json(doc)
        alpha = DimensionVector(doc.get("alpha") or {v: 1 for v in q.vertices})
        if not alpha.is_admissible(q):
            raise ValidationError("dimension vector is not admissible for the vertex kinds")
        return q, alpha, int(doc.get("ambient_sign", 1))
    raise ValidationError("input is neither a decomposition nor a quiver document")


# --------------------------------------------------------------------------
# subcommands


def _cmd_fixtures_list(cfg: RunConfig):
    return EXIT_OK, {"fixtures": list_fixtures()}


def _invariant_family(cfg: RunConfig):
    q, alpha, sign = _load_quiver(cfg)
    max_len = cfg.max_cycle_len
    if cfg.gl:
        invs = generate_invariants(q, alpha, max_len, seed=cfg.seed)
        spec = gl_group(q, alpha)
    else:
        dq = double(q)
        invs = generate_invariants(dq, alpha, max_len, seed=cfg.seed, ambient_sign=sign)
        spec = group_for_quiver(dq, alpha)
    return q, alpha, invs, spec


def _cmd_invariants_generate(cfg: RunConfig):
    q, alpha, invs, spec = _invariant_family(cfg)
    return EXIT_OK, {
        "group": spec.to_json(),
        "alpha": alpha.to_json(),
        "count": len(invs),
        "invariants": [{"id": t.id, "word": list(t.cycle.word), "degree": t.degree}
                       for t in invs],
    }


def _cmd_invariants_check(cfg: RunConfig):
    if cfg.max_cycle_len is None:
        cfg.max_cycle_len = 4
    q, alpha, invs, spec = _invariant_family(cfg)
    backend = ex.get_backend(cfg.backend, cfg.tolerance)
    reports = check_invariance_family(invs, spec, cfg.n_samples, cfg.seed, cfg.n_reps, backend)
    ok = all(r.passed for r in reports)
    failed = [r.invariant for r in reports if not r.passed]
    doc = {
        "group": spec.to_json(),
        "invariants": len(reports),
        "samples_per_invariant": cfg.n_samples * cfg.n_reps,
        "backend": backend.name,
        "pass": ok,
        "failed": failed,
        "reports": [r.to_json() for r in reports],
    }
    return (EXIT_OK if ok else EXIT_REFUTED), doc


def _cmd_surjectivity(cfg: RunConfig):
    if cfg.backend != "exact":
        raise ValidationError("surjectivity runs on the exact backend only")
    d = _load_decomposition(cfg)
    rep = restriction_surjectivity_check(d, cfg.degree_bound, cfg.n_points, cfg.seed)
    doc = rep.to_json()
    doc["decomposition"] = d.to_json()
    return (EXIT_OK if rep.contained else EXIT_REFUTED), doc


def _cmd_local_model(cfg: RunConfig):
    d = _load_decomposition(cfg)
    rep = local_model_report(d, cfg.group, cfg.oriented)
    doc = rep.to_json()
    doc["group"] = cfg.group
    return EXIT_OK, doc


def _cmd_elliptic(cfg: RunConfig):
    if cfg.rank is None:
        raise ValidationError("--rank is required")
    try:
        points = parse_points(cfg.points)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse --points: {exc}") from None
    return EXIT_OK, classify(cfg.group, cfg.rank, cfg.w2, points)


COMMANDS = {
    "fixtures list": _cmd_fixtures_list,
    "invariants generate": _cmd_invariants_generate,
    "invariants check": _cmd_invariants_check,
    "surjectivity": _cmd_surjectivity,
    "local-model report": _cmd_local_model,
    "elliptic classify": _cmd_elliptic,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one subcommand; never raises for bad input."""
    if not 0 <= cfg.seed <= SEED_MASK:
        return EXIT_INVALID, _error("ValidationError", "seed must be a 64-bit unsigned integer")
    try:
        handler = COMMANDS[cfg.subcommand]
    except KeyError:
        return EXIT_INVALID, _error("ValidationError", f"unknown subcommand {cfg.subcommand!r}")
    try:
        return handler(cfg)
    except ValidationError as exc:
        return EXIT_INVALID, _error("ValidationError", str(exc))
    except OrthoQuivError as exc:
        return EXIT_INVALID, _error(type(exc).__name__, str(exc))
    except (KeyError, TypeError, ValueError) as exc:
        return EXIT_INVALID, _error(type(exc).__name__, str(exc))


def _error(kind: str, message: str) -> dict:
    return {"error": {"type": kind, "message": message}}


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value <= SEED_MASK:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--backend", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", "--tolerance", dest="tolerance", type=float, default=1e-9)
    common.add_argument("-v", "--verbose", action="store_true")

    source = _Parser(add_help=False)
    source.add_argument("--fixture")
    source.add_argument("--input")

    p = _Parser(prog="orthoquiv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"orthoquiv {__version__}")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    inv = sub.add_parser("invariants", help="trace invariants")
    inv_sub = inv.add_subparsers(dest="action", parser_class=_Parser)
    for action in ("generate", "check"):
        a = inv_sub.add_parser(action, parents=[common, source])
        a.add_argument("--max-len", "--max-cycle-len", dest="max_cycle_len", type=int)
        a.add_argument("--gl", action="store_true",
                       help="GL(alpha) invariants of the base quiver instead")
        if action == "check":
            a.add_argument("--n-samples", type=int, default=50)
            a.add_argument("--n-reps", type=int, default=10)

    s = sub.add_parser("surjectivity", parents=[common, source])
    s.add_argument("--degree", "--degree-bound", dest="degree_bound", type=int, default=4)
    s.add_argument("--n-points", type=int)

    lm = sub.add_parser("local-model", help="local model reports")
    lm_sub = lm.add_subparsers(dest="action", parser_class=_Parser)
    r = lm_sub.add_parser("report", parents=[common, source])
    r.add_argument("--group", choices=("SO", "O", "Sp"), default="SO")
    r.add_argument("--oriented", action="store_true")

    el = sub.add_parser("elliptic", help="genus one")
    el_sub = el.add_subparsers(dest="action", parser_class=_Parser)
    c = el_sub.add_parser("classify", parents=[common])
    c.add_argument("--group", choices=("SO", "O", "Sp"), required=True)
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--w2", type=int, choices=(1, -1), default=1)
    c.add_argument("--points", default="")

    fx = sub.add_parser("fixtures", help="bundled decompositions")
    fx_sub = fx.add_subparsers(dest="action", parser_class=_Parser)
    fx_sub.add_parser("list", parents=[common])
    return p


def parse_config(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.cmd is None:
        raise ValidationError("a subcommand is required")
    name = ns.cmd if getattr(ns, "action", None) is None else f"{ns.cmd} {ns.action}"
    if ns.cmd in ("invariants", "local-model", "elliptic", "fixtures") and ns.action is None:
        raise ValidationError(f"'{ns.cmd}' needs an action")
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    fields.pop("subcommand", None)
    if getattr(ns, "verbose", False):
        logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    return RunConfig(subcommand=name, **fields)


def emit(doc: dict, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
    except ValidationError as exc:
        emit(_error("ValidationError", str(exc)))
        return EXIT_INVALID
    code, doc = run(cfg)
    emit(doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
