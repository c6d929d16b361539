"""Exact computations on the valuative tree of plane curve germs."""

from .attenuation import AttenuationReport, CurrentData, attenuate
from .branch import BranchCurve, implicitize
from .errors import DomainError, InvariantViolation, ParseError, ValtreeError
from .germ import Germ, parse_germ
from .intersection import intersection_multiplicity
from .model import Model, dual_graph_dot, pullback
from .rational import INF
from .tree import Ideal, TreeMeasure, ideal_measure, measure_intersection, span, tree_transform_ideal
from .valuation import (
    curve,
    divisorial,
    evaluate,
    intersect,
    meet,
    monomial,
    multiplicity_valuation,
    pushforward,
)

__version__ = "0.1.0"
