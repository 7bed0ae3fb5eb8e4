"""Degree bounds for ground fields of arithmetic reflection groups."""

import json

from ._core import (
    DomainError,
    InapplicableError,
    PrecisionFailure,
    degree_Fks,
    disc_Fl_is_square,
    euler_phi,
    fekete_min_n0,
    gamma,
    gamma_tilde,
    ln_disc_cyclotomic,
    ln_disc_Fks,
    ln_disc_Fl,
    quad_det4,
    rho,
)
from . import _core

__all__ = [
    "DomainError",
    "InapplicableError",
    "PrecisionFailure",
    "campaign",
    "degree_Fks",
    "disc_Fl_is_square",
    "euler_phi",
    "fekete_min_n0",
    "gamma",
    "gamma_tilde",
    "ln_disc_Fks",
    "ln_disc_Fl",
    "ln_disc_cyclotomic",
    "method_a",
    "method_b",
    "pent_extrema",
    "quad_det4",
    "quad_extrema",
    "rho",
]


def _verdict(method, l, k, s, a1, a2, b1, b2, s0, precision):
    if l is not None:
        if k is not None or s is not None:
            raise ValueError("give either l or (k, s)")
        k, s = l, 0
    elif k is None or s is None:
        raise ValueError("give either l or (k, s)")
    raw = _core.verdict_json(method, k, s, str(a1), str(a2), str(b1), str(b2), s0, precision)
    return json.loads(raw)


def method_b(*, a1, a2, b1, b2, l=None, k=None, s=None, s0=3, precision=53):
    """Method B verdict for F_l (pass l) or F_{k,s} (pass k and s) as a dict.

    Bounds may be ints, decimal strings or "p/q" strings.
    """
    return _verdict("B", l, k, s, a1, a2, b1, b2, s0, precision)


def method_a(*, a1, a2, b1, b2, l=None, k=None, s=None, s0=3, precision=53):
    """Method A verdict, same conventions as method_b."""
    return _verdict("A", l, k, s, a1, a2, b1, b2, s0, precision)


def quad_extrema(grid=50, refine=10000, seed=0xC0FFEE):
    return json.loads(_core.quad_extrema_json(grid, refine, seed))


def pent_extrema(grid=50, refine=10000, seed=0xC0FFEE):
    return json.loads(_core.pent_extrema_json(grid, refine, seed))


def campaign(name, *, workers=0, precision=53, target=None, timing=True):
    """Run gamma64, gamma15, gamma46 or all and return the report as a dict."""
    return json.loads(_core.campaign_json(name, workers, precision, target, timing))
