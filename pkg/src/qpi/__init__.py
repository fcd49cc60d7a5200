"""Verification workbench for double series for pi and their q-analogues."""

from .numerics import BigReal, Jet2, big, pi
from .qkernel import QParams
from .registry import limit_study, sweep_q, verify, verify_all

__all__ = [
    "BigReal",
    "Jet2",
    "QParams",
    "big",
    "limit_study",
    "pi",
    "sweep_q",
    "verify",
    "verify_all",
]
