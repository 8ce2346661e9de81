"""Exact comparison of finite experiments and the contracting problems they govern."""

from .exactnum import RatMatrix, parse_rational, render
from .experiments import Experiment, Prior, experiment, posteriors, support_function
from .orders import (Order, OrderVerdict, blackwell_dominates, col_dominates, cone_dominates, dominates,
                     verify_verdict, zon_dominates)
from .moralhazard import (Constraints, Environment, MhSolution, UtilitySpec, construct_counterexample,
                          implementable, solve)

__version__ = "0.1.0"
