"""Digital nets, b-adic antithetics, polynomial lattices and worst-case errors."""
from app.qmc.digits import DigitVector
from app.qmc.hopl import ErrorBoundParams, HoplSpec, bound_B, search_q
from app.qmc.integration import TestFunction, convergence_study, integrate
from app.qmc.net import DigitalNet, GeneratingMatrix, antithetic
from app.qmc.polynomial import PolyZb
from app.qmc.sobol import sobol_net
from app.qmc.sobolev import SobolevSpaceParams, worst_case_error
from app.qmc.weights import Weights

__all__ = [
    "DigitVector",
    "DigitalNet",
    "ErrorBoundParams",
    "GeneratingMatrix",
    "HoplSpec",
    "PolyZb",
    "SobolevSpaceParams",
    "TestFunction",
    "Weights",
    "antithetic",
    "bound_B",
    "convergence_study",
    "integrate",
    "search_q",
    "sobol_net",
    "worst_case_error",
]
