"""Ordinal walks, the canonical rational space and the refinement search."""

from ._core import (
    Error,
    SearchExhausted,
    ball_members,
    check_universe,
    fiber,
    kernel,
    refine,
    render,
    rho,
    rhobar,
    sigma,
    verify,
    walk,
)

__all__ = [
    "Error",
    "SearchExhausted",
    "ball_members",
    "check_universe",
    "fiber",
    "kernel",
    "refine",
    "render",
    "rho",
    "rhobar",
    "sigma",
    "verify",
    "walk",
]
