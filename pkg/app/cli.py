"""
Command-line interface.

    bantqmc gen --s 2 --m 4 --antithetic
    bantqmc convergence --func f1 --s 10 --mrange 8..16 --variant both --out f1.csv
    bantqmc search --b 2 --n 4 --m 3 --s 2 --weights product:1
    bantqmc wce --net lattice.txt --weights product:1
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import NetFormatError, ParameterError, QMCError
from app.core.logging import configure_logging
from app.qmc.integration import exact_integral, integrate
from app.qmc.net import antithetic, save_net, to_array
from app.qmc.sobol import bundled_directions, load_directions, write_directions
from app.qmc.sobolev import SobolevSpaceParams, worst_case_error
from app.qmc.weights import parse_weights
from app.schemas.convergence import ConvergenceRequest
from app.schemas.net import DualRequest, NetSpec, PointsRequest
from app.schemas.search import SearchRequest
from app.schemas.wce import WCERequest
from app.services.qmc_service import ConvergenceService, NetService, SearchService, WCEService

logger = logging.getLogger("bantqmc")


def _coefficients(text: Optional[str]) -> Optional[list[int]]:
    """'1,1,0,1' -> [1, 1, 0, 1], constant term first."""
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParameterError(f"cannot parse coefficients {text!r}") from exc


def _vector(text: Optional[str]) -> Optional[list[list[int]]]:
    """'1;0,1' -> [[1], [0, 1]]."""
    if text is None:
        return None
    return [_coefficients(part) for part in text.split(";")]


def _mrange(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError as exc:
        raise ParameterError(f"cannot parse m-range {text!r}, expected a..b") from exc


def _records(args):
    return load_directions(args.dirfile) if getattr(args, "dirfile", None) else None


def _net_spec(args) -> NetSpec:
    if args.net:
        try:
            text = Path(args.net).read_text()
        except OSError as exc:
            raise NetFormatError(f"cannot read net file {args.net}: {exc.strerror}") from exc
        return NetSpec(kind="text", text=text, depth=args.depth)
    return NetSpec(
        kind=args.kind or "sobol",
        s=args.s,
        m=args.m,
        b=args.b,
        n=args.n,
        modulus=_coefficients(args.modulus),
        q=_vector(args.q),
        depth=args.depth,
    )


def _session():
    from app.core.database import SessionLocal, init_db

    init_db()
    return SessionLocal()


def cmd_gen(args) -> int:
    spec = _net_spec(args)
    if args.save_net:
        save_net(NetService.build(spec, _records(args)), args.save_net)
    response = NetService.points(
        PointsRequest(net=spec, antithetic=args.antithetic, exact=args.exact),
        _records(args),
    )
    rows = response.exact_points if args.exact else response.points
    for row in rows:
        print(" ".join(str(v) if args.exact else repr(v) for v in row))
    return 0


def cmd_integrate(args) -> int:
    net = NetService.build(_net_spec(args), _records(args))
    request = ConvergenceRequest(
        func=args.func, s=net.s, theta=args.theta, zeta=args.zeta, w=args.w,
        m_from=net.m, m_to=net.m, save=False,
    )
    f = ConvergenceService.function(request)
    if args.antithetic:
        net = antithetic(net)
    value = integrate(f, to_array(net))
    exact = exact_integral(f)
    print(f"N={net.size} value={value!r} exact={exact!r} abs_error={abs(value - exact)!r}")
    return 0


def cmd_convergence(args) -> int:
    m_from, m_to = _mrange(args.mrange)
    request = ConvergenceRequest(
        func=args.func, s=args.s, theta=args.theta, zeta=args.zeta, w=args.w,
        generator=args.generator, m_from=m_from, m_to=m_to, variant=args.variant,
        b=args.b, modulus=_coefficients(args.modulus), q=_vector(args.q), save=args.save,
    )
    report, fields = ConvergenceService.study(request, _records(args))
    report.write_csv(args.out if args.out else sys.stdout)
    for name, fit in report.fits.items():
        slope = "undefined" if fit.slope is None else f"{fit.slope:.4f}"
        steps = " ".join("-" if v is None else f"{v:.3f}" for v in fit.per_step)
        print(f"# {name}: slope {slope} over m={list(fit.window)}; per-step {steps}", file=sys.stderr)
        if fit.zero_errors:
            print(f"# {name}: zero errors excluded at m={list(fit.zero_errors)}", file=sys.stderr)
    if args.save:
        from app.services.run_store import RunStore

        with _session() as db:
            run = RunStore.record_convergence(db, fields)
            print(f"# saved convergence run {run.id}", file=sys.stderr)
    return 0


def cmd_search(args) -> int:
    request = SearchRequest(
        b=args.b, n=args.n, m=args.m, s=args.s, alpha=args.alpha, lam=args.lam,
        weights=args.weights, strategy=args.strategy, trials=args.trials, seed=args.seed,
        truncation=args.trunc, modulus=_coefficients(args.modulus), save=args.save,
    )
    fields = SearchService.search(request)
    print("modulus p: " + ",".join(map(str, fields["modulus"])))
    print("q*: " + ";".join(",".join(map(str, q)) or "0" for q in fields["generating_vector"]))
    print(f"truncated bound (K={fields['truncation']}): {fields['truncated_bound']!r}")
    print(f"tail bound: {fields['tail_bound']!r}")
    print(f"certified bound: {fields['certified_bound']!r}")
    if args.save:
        from app.services.run_store import RunStore

        with _session() as db:
            run = RunStore.record_search(db, fields)
            print(f"saved search run {run.id}")
    return 0


def cmd_wce(args) -> int:
    spec = _net_spec(args)
    print("N,wce_plain,wce_antithetic")
    if args.antithetic == "on":
        report = WCEService.compare(
            WCERequest(net=spec, alpha=args.alpha, weights=args.weights), _records(args)
        )
        print(f"{report.n_plain},{report.wce_plain!r},{report.wce_antithetic!r}")
        return 0
    net = NetService.build(spec, _records(args))
    params = SobolevSpaceParams(alpha=args.alpha, weights=parse_weights(args.weights, net.s))
    result = worst_case_error(params, to_array(net))
    print(f"{result.n_points},{result.value!r},")
    return 0


def cmd_dual(args) -> int:
    response = NetService.dual(
        DualRequest(net=_net_spec(args), resolution=args.resolution, antithetic=args.antithetic),
        _records(args),
    )
    for k in response.indices:
        print(" ".join(map(str, k)))
    return 0


def cmd_export_directions(args) -> int:
    records = bundled_directions(args.max_dim)
    write_directions(records, args.out)
    logger.info("wrote %d direction-number records to %s", len(records), args.out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, reload=settings.DEBUG)
    return 0


def _net_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--kind", choices=["sobol", "hopl"], default=None, help="generated net (default sobol)")
    source.add_argument("--net", default=None, metavar="FILE", help="net description file")
    parser.add_argument("--s", type=int, default=None)
    parser.add_argument("--m", type=int, default=None)
    parser.add_argument("--b", type=int, default=2)
    parser.add_argument("--n", type=int, default=None, help="modulus degree (hopl)")
    parser.add_argument("--modulus", default=None, help="coefficients of p, e.g. 1,1,1")
    parser.add_argument("--q", default=None, help="generating vector, e.g. 1;0,1")
    parser.add_argument("--depth", type=int, default=None)
    parser.add_argument("--dirfile", default=None, help="Joe-Kuo direction-number file")


def _function_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--func", choices=["f1", "f2", "f3"], default="f1")
    parser.add_argument("--theta", type=float, default=0.1)
    parser.add_argument("--zeta", type=float, default=1.0)
    parser.add_argument("--w", type=float, default=0.5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bantqmc", description=__doc__.splitlines()[1])
    parser.add_argument("--log-level", default=settings.LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="print the points of a net")
    _net_arguments(p)
    p.add_argument("--antithetic", action="store_true")
    p.add_argument("--exact", action="store_true", help="print coordinates as fractions")
    p.add_argument("--save-net", default=None, metavar="FILE", help="write the net description to FILE")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("integrate", help="QMC estimate of a test integral")
    _net_arguments(p)
    _function_arguments(p)
    p.add_argument("--antithetic", action="store_true")
    p.set_defaults(handler=cmd_integrate)

    p = sub.add_parser("convergence", help="error against N for a range of m")
    _function_arguments(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--mrange", required=True, help="a..b")
    p.add_argument("--variant", choices=["plain", "antithetic", "both"], default="both")
    p.add_argument("--generator", choices=["sobol", "hopl"], default="sobol")
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--modulus", default=None)
    p.add_argument("--q", default=None)
    p.add_argument("--dirfile", default=None)
    p.add_argument("--out", default=None, help="CSV file (default: stdout)")
    p.add_argument("--save", action="store_true", help="store the run in the database")
    p.set_defaults(handler=cmd_convergence)

    p = sub.add_parser("search", help="search a generating vector")
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", type=int, default=2)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--weights", default="product:1")
    p.add_argument("--strategy", choices=["exhaustive", "random"], default="exhaustive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--modulus", default=None)
    p.add_argument("--save", action="store_true")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("wce", help="exact worst-case error of a net")
    _net_arguments(p)
    p.add_argument("--alpha", type=int, default=2)
    p.add_argument("--weights", default="product:1")
    p.add_argument("--antithetic", choices=["on", "off"], default="on")
    p.set_defaults(handler=cmd_wce)

    p = sub.add_parser("dual", help="enumerate the dual net")
    _net_arguments(p)
    p.add_argument("--resolution", type=int, required=True, help="K: every k_j < b^K")
    p.add_argument("--antithetic", action="store_true")
    p.set_defaults(handler=cmd_dual)

    p = sub.add_parser("export-directions", help="write the bundled direction numbers")
    p.add_argument("--max-dim", type=int, default=1111)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_export_directions)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default=settings.HOST)
    p.add_argument("--port", type=int, default=settings.PORT)
    p.set_defaults(handler=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except (QMCError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
