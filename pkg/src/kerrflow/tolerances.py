"""Single knob for the numeric tolerances used across modules."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    # |quadform| <= null_tol * ||xi||^2 counts as null
    null_tol: float = 1e-8
    # route to the stereographic patch when sin(theta) drops below this
    axis_sin: float = 1e-6
    # scaled residual bound for trapped-set membership
    k_tol: float = 1e-8
    # bracketed radial solves must hit this residual
    root_residual: float = 1e-10
    # chart round trips must reproduce inputs to this relative error
    round_trip: float = 1e-10
    # orientation contraction below this scaled size is a numerical failure
    degenerate: float = 1e-12


DEFAULT_TOL = ToleranceConfig()
