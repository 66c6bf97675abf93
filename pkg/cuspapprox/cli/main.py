"""
Command-Line Entry Point

Commands:
- enum: double cosets of the group ordered by |c|
- ford: cut-locus complex of the cusp (json or svg)
- approx: good approximating sequence of a boundary point
- hurwitz: min-max Hurwitz estimate, or the height spectrum
- torus h2|oracle|grid: once-punctured torus moduli

Usage:
    cuspapprox hurwitz --ring 0
    cuspapprox torus h2 --ell 1.9248473002384139 --theta 3.141592653589793
    cuspapprox ford --from-json ford.json --out ford.svg
"""

import argparse
import csv
import io
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from cuspapprox import __version__
from cuspapprox.cli.models import RunConfig, load_config
from cuspapprox.cli.render import approx_svg, ford_svg
from cuspapprox.core.errors import CuspApproxError, InvalidArgumentError
from cuspapprox.core.quadint import RingSpec
from cuspapprox.core.result import FordComplex, GoodSequence, HurwitzResult
from cuspapprox.engine.approx import good_sequence, hurwitz_of_xi
from cuspapprox.engine.ford import build_complex
from cuspapprox.engine.groups import GroupSpec, enumerate_by_c, horoball_centers
from cuspapprox.engine.hurwitz import height_spectrum, hurwitz_estimate
from cuspapprox.engine.torus import (
    FNPoint,
    fn_reduce,
    grid_table,
    h2,
    hurwitz_constant,
    pentagon,
    torus_oracle,
)
from cuspapprox.engine.utils import random_lattice_point

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
DEFAULT_C_MAX = {"enum": 3.0, "ford": 1.0, "hurwitz": 3.0}


@dataclass
class Output:
    """Artifact of one command before formatting"""

    payload: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)


def _c_max(cfg: RunConfig) -> Optional[float]:
    return cfg.c_max if cfg.c_max is not None else DEFAULT_C_MAX.get(cfg.command)


def _run_enum(cfg: RunConfig) -> Output:
    reps = enumerate_by_c(GroupSpec.of(cfg.ring), _c_max(cfg), threads=cfg.threads)
    rows = [rep.to_dict() for rep in reps]
    return Output({"rows": rows}, rows)


def _run_ford(cfg: RunConfig) -> Output:
    G = GroupSpec.of(cfg.ring)
    complex_ = build_complex(G, _c_max(cfg), threads=cfg.threads)
    logger.info("\n%s", complex_.summary())
    return Output(complex_.to_dict())


def _run_approx(cfg: RunConfig) -> Output:
    G = GroupSpec.of(cfg.ring)
    if cfg.xi == "random":
        seed = 0 if cfg.seed is None else cfg.seed
        xi: Any = random_lattice_point(G.ring, random.Random(seed))
        logger.info("random xi with seed %d: %s", seed, xi)
    else:
        xi = cfg.xi
    seq = good_sequence(
        G, xi, cfg.steps, c_max=cfg.c_max, xi_radius=cfg.xi_radius, precision=cfg.precision
    )
    logger.info("\n%s", seq.summary())
    payload = seq.to_dict()
    if len(seq.steps) >= 2:
        payload["hurwitz_of_xi"] = [s.to_dict() for s in hurwitz_of_xi(seq)]
    rows = [
        {k: v for k, v in step.to_dict().items() if k in ("n", "z", "depth", "dist", "a", "delta", "crossing_t")}
        for step in seq.steps
    ]
    return Output(payload, rows)


def _run_hurwitz(cfg: RunConfig) -> Output:
    G = GroupSpec.of(cfg.ring)
    c_max = _c_max(cfg)
    if cfg.spectrum:
        entries = height_spectrum(G, c_max, cfg.trace_max)
        rows = [
            {"height": e.height, "depth": e.depth, "tr": str(e.witness.trace()), "multiplicity": e.multiplicity}
            for e in entries
        ]
        return Output({"spectrum": [e.to_dict() for e in entries]}, rows)
    result = hurwitz_estimate(G, c_max, cfg.trace_max, cfg.word_len, threads=cfg.threads)
    logger.info("\n%s", result.summary())
    rows = [
        {k: v for k, v in c.to_dict().items() if k != "witness"} for c in result.classes
    ]
    return Output(result.to_dict(), rows)


def _run_torus(cfg: RunConfig) -> Output:
    if cfg.torus_action == "grid":
        rows = grid_table(cfg.n)
        return Output({"rows": rows}, rows)
    p = fn_reduce(FNPoint(cfg.ell, cfg.theta))
    if cfg.torus_action == "h2":
        row = {"ell": p.ell, "theta": p.theta, "h2": h2(p), "K": hurwitz_constant(p)}
        return Output({**row, "pentagon": pentagon(p).to_dict()}, [row])
    result = torus_oracle(p, word_len=cfg.word_len)
    payload = {**result.to_dict(), "closed_form_h2": h2(p)}
    return Output(payload, [result.to_dict()])


HANDLERS: Dict[str, Callable[[RunConfig], Output]] = {
    "enum": _run_enum,
    "ford": _run_ford,
    "approx": _run_approx,
    "hurwitz": _run_hurwitz,
    "torus": _run_torus,
}

ARTIFACTS = {"ford": FordComplex, "approx": GoodSequence, "hurwitz": HurwitzResult}


def _csv_text(rows: List[Dict[str, Any]]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in row.items()})
    return buf.getvalue()


def load_artifact(text: str) -> Tuple[RunConfig, Any]:
    """
    Parse a JSON artifact back into its configuration and record.

    Returns:
        (config, FordComplex | GoodSequence | HurwitzResult)

    Raises:
        InvalidArgumentError: If the text is not an artifact with a record type
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError("artifact is not JSON", reason=str(exc)) from exc
    if not isinstance(document, dict) or "config" not in document:
        raise InvalidArgumentError("artifact has no embedded config")
    cfg = RunConfig(**document["config"])
    record_type = ARTIFACTS.get(cfg.command)
    if record_type is None or cfg.spectrum:
        raise InvalidArgumentError("no record type for this artifact", command=cfg.command)
    try:
        record = record_type.from_dict(document)
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError("malformed artifact", missing=str(exc)) from exc
    return cfg, record


def render_artifact(text: str) -> str:
    """SVG of a ford or approx artifact, drawn from the parsed record only."""
    cfg, record = load_artifact(text)
    if cfg.command == "ford":
        return ford_svg(record, horoball_centers(GroupSpec.of(record.ring), record.c_max))
    if cfg.command == "approx":
        return approx_svg(record, RingSpec(record.ring).to_complex(*record.xi_coords))
    raise InvalidArgumentError("svg is drawn for ford and approx artifacts only", command=cfg.command)


def dispatch(cfg: RunConfig) -> str:
    """
    Run one command and format its artifact.

    JSON artifacts embed the configuration under "config" so a run can be
    reproduced from its output. SVG is drawn from the JSON artifact.

    Args:
        cfg: Validated configuration

    Returns:
        Artifact text (JSON, CSV or SVG)
    """
    logger.info("running %s on ring %d", cfg.command, cfg.ring)
    output = HANDLERS[cfg.command](cfg)
    if cfg.emit == "csv":
        return _csv_text(output.rows)
    document = {"config": cfg.model_dump(mode="json"), **output.payload}
    text = json.dumps(document, indent=2) + "\n"
    return render_artifact(text) if cfg.emit == "svg" else text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuspapprox",
        description="Diophantine approximation in cusped hyperbolic orbifolds",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(HANDLERS), help="Command to run")
    parser.add_argument("torus_action", nargs="?", choices=("h2", "oracle", "grid"), help="torus sub-action")
    parser.add_argument("--config", default=None, help="YAML file of configuration fields")
    parser.add_argument("--ring", type=int, help="0 for PSL2(Z), else d in 1, 2, 3, 7, 11")
    parser.add_argument("--c-max", dest="c_max", type=float, help="Bound on |c|")
    parser.add_argument("--trace-max", dest="trace_max", type=float, help="Bound on |tr|")
    parser.add_argument("--word-len", dest="word_len", type=int, help="Conjugate search depth / oracle word length")
    parser.add_argument("--spectrum", action="store_true", default=None, help="hurwitz: emit the height spectrum")
    parser.add_argument("--xi", help='Boundary point, e.g. "0.37+0.21i", or "random"')
    parser.add_argument("--xi-radius", dest="xi_radius", type=float, help="Absolute error of xi")
    parser.add_argument("--steps", type=int, help="Length of the approximating sequence")
    parser.add_argument("--ell", type=float, help="Length of the curve")
    parser.add_argument("--theta", type=float, help="Twist")
    parser.add_argument("--n", type=int, help="Grid size per axis")
    parser.add_argument("--emit", choices=("json", "csv", "svg"), help="Output format")
    parser.add_argument("--out", help="Output path (default stdout)")
    parser.add_argument("--from-json", dest="from_json", help="Redraw the SVG of a saved ford or approx artifact")
    parser.add_argument("--threads", type=int, help="Worker threads")
    parser.add_argument("--seed", type=int, help="Seed for --xi random")
    parser.add_argument("--precision", type=int, help="Decimal digits for interval checks")
    parser.add_argument("--verbose", action="store_true", default=None, help="DEBUG logging")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge the YAML file (if any) with explicit flags; flags win."""
    values: Dict[str, Any] = load_config(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key in ("config", "from_json") or value is None:
            continue
        values[key] = value
    return RunConfig(**values)


def _redraw(args: argparse.Namespace) -> str:
    try:
        with open(args.from_json, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read {args.from_json}", reason=str(exc)) from exc
    cfg, _ = load_artifact(text)
    if cfg.command != args.command:
        raise InvalidArgumentError(
            "artifact was produced by another command", expected=args.command, found=cfg.command
        )
    return render_artifact(text)


def _setup_logging(verbose: bool) -> None:
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _diagnostic(exc: Exception) -> Dict[str, Any]:
    if isinstance(exc, CuspApproxError):
        return exc.to_dict()
    if isinstance(exc, ValidationError):
        return {
            "error": "ValidationError",
            "message": str(exc),
            "errors": exc.errors(include_url=False, include_context=False),
        }
    return {"error": exc.__class__.__name__, "message": str(exc)}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI.

    Returns:
        0 on success, 2 for invalid input, 1 when a computation could not
        certify its result
    """
    args = build_parser().parse_args(argv)
    _setup_logging(bool(args.verbose))
    try:
        if args.from_json:
            text, out = _redraw(args), args.out
        else:
            cfg = config_from_args(args)
            text, out = dispatch(cfg), cfg.out
    except ValueError as exc:
        print(json.dumps(_diagnostic(exc), default=str), file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(json.dumps(_diagnostic(exc), default=str), file=sys.stderr)
        return 1
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
