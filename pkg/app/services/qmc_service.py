import logging
from fractions import Fraction
from typing import Optional, Sequence

from app.core.config import settings
from app.core.exceptions import ParameterError, check_guard
from app.qmc.digits import pi_exact
from app.qmc.hopl import ErrorBoundParams, HoplSpec, hopl_net, search_q
from app.qmc.integration import (
    ConvergenceReport,
    TestFunction,
    convergence_study,
    hopl_factory,
    sobol_factory,
)
from app.qmc.net import DigitalNet, antithetic, dual_enumerate, parse_net, points, to_array
from app.qmc.polynomial import PolyZb, smallest_irreducible
from app.qmc.sobol import DirectionNumberRecord, default_directions, sobol_net
from app.qmc.sobolev import SobolevSpaceParams, WCEComparison, wce_compare
from app.qmc.weights import parse_weights
from app.schemas.convergence import ConvergenceRequest
from app.schemas.net import DualRequest, DualResponse, NetSpec, PointsRequest, PointsResponse
from app.schemas.search import SearchRequest
from app.schemas.wce import WCERequest

logger = logging.getLogger(__name__)

Records = Optional[Sequence[DirectionNumberRecord]]


def _modulus(b: int, n: int, coeffs: Optional[Sequence[int]]) -> PolyZb:
    if coeffs is None:
        return smallest_irreducible(b, n)
    p = PolyZb(b, tuple(coeffs))
    if p.degree != n:
        raise ParameterError(f"modulus {p} does not have degree {n}")
    return p


def _generating_vector(b: int, s: int, q: Optional[Sequence[Sequence[int]]]) -> tuple:
    if q is None:
        raise ParameterError("polynomial lattices need a generating vector q")
    if len(q) != s:
        raise ParameterError(f"generating vector has {len(q)} entries for dimension {s}")
    return tuple(PolyZb(b, tuple(c)) for c in q)


class NetService:
    """Service for building nets and reading off their points and duals."""

    @staticmethod
    def build(spec: NetSpec, records: Records = None) -> DigitalNet:
        """
        Build the net described by spec. Sobol' nets use the given
        direction-number records, else the configured default table.
        """
        if spec.kind == "text":
            return parse_net(spec.text, depth=spec.depth)
        if spec.kind == "sobol":
            if spec.b != 2:
                raise ParameterError(f"Sobol' nets are binary, got b={spec.b}")
            records = records if records is not None else default_directions(spec.s)
            return sobol_net(spec.s, spec.m, records, depth=spec.depth)
        n = spec.n if spec.n is not None else spec.m
        hopl = HoplSpec(
            b=spec.b,
            m=spec.m,
            n=n,
            p=_modulus(spec.b, n, spec.modulus),
            q=_generating_vector(spec.b, spec.s, spec.q),
        )
        return hopl_net(hopl, depth=spec.depth)

    @staticmethod
    def points(request: PointsRequest, records: Records = None) -> PointsResponse:
        """
        Points of the net (or of its antithetic net) in index order.
        """
        net = NetService.build(request.net, records)
        if request.antithetic:
            net = antithetic(net)
        check_guard(net.size * net.s, settings.MAX_ENUMERATION, "point listing")
        response = PointsResponse(
            b=net.b, s=net.s, n_points=net.size, points=to_array(net).tolist()
        )
        if request.exact:
            response.exact_points = [
                [_fraction_text(pi_exact(z)) for z in point] for point in points(net)
            ]
        return response

    @staticmethod
    def dual(request: DualRequest, records: Records = None) -> DualResponse:
        net = NetService.build(request.net, records)
        if request.antithetic:
            net = antithetic(net)
        indices = dual_enumerate(net, request.resolution)
        return DualResponse(
            resolution=request.resolution,
            count=len(indices),
            indices=[list(k) for k in indices],
        )


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


class SearchService:
    """Service for the generating-vector search of antithetic polynomial lattices."""

    @staticmethod
    def search(request: SearchRequest) -> dict:
        """
        Run the search and return the fields of a SearchRun record.
        """
        p = _modulus(request.b, request.n, request.modulus)
        logger.info(
            "search request b=%d n=%d m=%d s=%d strategy=%s",
            request.b, request.n, request.m, request.s, request.strategy,
        )
        params = ErrorBoundParams(
            alpha=request.alpha,
            lam=request.lam,
            weights=parse_weights(request.weights, request.s),
            truncation=request.truncation,
        )
        result = search_q(
            p,
            request.s,
            request.m,
            params,
            strategy=request.strategy,
            trials=request.trials,
            seed=request.seed,
        )
        return {
            "b": request.b,
            "n": request.n,
            "m": request.m,
            "s": request.s,
            "alpha": request.alpha,
            "lam": request.lam,
            "weights": request.weights,
            "strategy": request.strategy,
            "trials": request.trials if request.strategy == "random" else None,
            "seed": request.seed if request.strategy == "random" else None,
            "truncation": result.truncation,
            "modulus": list(p.coeffs),
            "generating_vector": [list(q.coeffs) for q in result.q],
            "truncated_bound": result.truncated,
            "tail_bound": result.tail,
            "certified_bound": result.total,
        }


class WCEService:
    """Service for exact worst-case errors in the weighted Sobolev space."""

    @staticmethod
    def compare(request: WCERequest, records: Records = None) -> WCEComparison:
        net = NetService.build(request.net, records)
        params = SobolevSpaceParams(
            alpha=request.alpha, weights=parse_weights(request.weights, net.s)
        )
        return wce_compare(params, net)


class ConvergenceService:
    """Service for convergence studies of the test integrands."""

    @staticmethod
    def function(request: ConvergenceRequest) -> TestFunction:
        if request.func == "f1":
            return TestFunction.f1(request.s, theta=request.theta, zeta=request.zeta)
        if request.func == "f2":
            return TestFunction.f2(request.s, w=request.w)
        return TestFunction.f3(request.s, w=request.w)

    @staticmethod
    def study(request: ConvergenceRequest, records: Records = None) -> tuple[ConvergenceReport, dict]:
        """
        Run the study and return the report together with the fields of a
        ConvergenceRun record.
        """
        f = ConvergenceService.function(request)
        if request.generator == "sobol":
            if request.b != 2:
                raise ParameterError(f"Sobol' nets are binary, got b={request.b}")
            factory = sobol_factory(request.s, records)
        else:
            q = _generating_vector(request.b, request.s, request.q)
            n = len(request.modulus) - 1 if request.modulus else request.m_to
            factory = hopl_factory(_modulus(request.b, n, request.modulus), q)
        report = convergence_study(
            f, factory, list(range(request.m_from, request.m_to + 1)), variant=request.variant
        )
        params = {"theta": request.theta, "zeta": request.zeta} if request.func == "f1" else {"w": request.w}
        payload = {
            "func": request.func,
            "params": params,
            "generator": request.generator,
            "m_from": request.m_from,
            "m_to": request.m_to,
            "slopes": {name: fit.slope for name, fit in report.fits.items()},
            "rows": [
                {"variant": r.variant, "m": r.m, "N": r.n_points, "abs_error": r.abs_error}
                for r in report.rows
            ],
        }
        return report, payload
