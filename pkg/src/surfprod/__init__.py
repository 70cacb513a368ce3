"""Recognize when cohomology data of a 6-manifold describes a product M x F."""

from .cohomology import GradedRing, ManifoldData, kunneth_product, validate_ring
from .corpus import mutate, standard_fixtures
from .fileformat import ParseError, dump_manifold, load_manifold
from .forms import IntegralForm, automorphism_group, classify_unimodular, isometry, parse_form_spec
from .recognizer import Recognized, RecognitionReport, Rejection, realize_isometry, recognize

__all__ = [
    "GradedRing",
    "IntegralForm",
    "ManifoldData",
    "ParseError",
    "Recognized",
    "RecognitionReport",
    "Rejection",
    "automorphism_group",
    "classify_unimodular",
    "dump_manifold",
    "isometry",
    "kunneth_product",
    "load_manifold",
    "mutate",
    "parse_form_spec",
    "realize_isometry",
    "recognize",
    "standard_fixtures",
    "validate_ring",
]
