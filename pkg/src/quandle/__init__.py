"""Quandle products of groups: normal forms, quasi-median Cayley balls and constructions."""

from .cayley import CayleyBall, enumerate_ball, hyperplanes, verify_quasi_median
from .constructions import build_cactus, build_oriented_cactus, builtin_systems
from .groups import Letter, QuandleSystem, validate_system
from .oposet import Oposet, make_oposet
from .rewrite import are_equal, parse_word, ranked_normal_form

__all__ = [
    "CayleyBall", "Letter", "Oposet", "QuandleSystem", "are_equal", "build_cactus",
    "build_oriented_cactus", "builtin_systems", "enumerate_ball", "hyperplanes",
    "make_oposet", "parse_word", "ranked_normal_form", "validate_system",
    "verify_quasi_median",
]
