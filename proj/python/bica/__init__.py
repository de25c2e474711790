"""Blind source separation via boosted spline density estimation."""

from _bica import (
    BicaError,
    amari,
    boost_density,
    gen_sources,
    likelihood_scan,
    mix,
    bench3x3_mixing,
    random_mixing,
    random_orthonormal,
    separate,
    sir,
    sym_decorrelate,
    whiten,
)

__all__ = [
    "BicaError",
    "amari",
    "boost_density",
    "gen_sources",
    "likelihood_scan",
    "mix",
    "bench3x3_mixing",
    "random_mixing",
    "random_orthonormal",
    "separate",
    "sir",
    "sym_decorrelate",
    "whiten",
]
