"""Kerr exterior geometry: chart atlas, null cone, trapped sets, and the
null bicharacteristic flow, with randomized verification campaigns."""

from .charts import (ChartId, ChartPoint, Covector, chart_map, chart_map_cov,
                     kruskal_r_from_UV, kruskal_uv_from_r, tortoise,
                     tortoise_coeffs, axial_shift, validate_point)
from .errors import KerrflowError
from .flow import (FateReport, IntegratorOpts, PhasePoint, Trajectory,
                   classify_fate, hamilton_rhs, integrate, lemma33_campaign,
                   principal_null)
from .metric import (ergoregion_membership, killing_contraction, metric_cov,
                     metric_scalars, quadform)
from .nullcone import (NullCompletionChoice, OrientationTag, complete_null,
                       complete_null_axis, grad_t_contraction, orientation)
from .params import SpacetimeParams, derive_constants
from .tolerances import DEFAULT_TOL, ToleranceConfig
from .trapping import (GammaMembership, SearchReport, TrappedWitness,
                       gamma_membership, is_in_K, lemma65_search, omega_ratio,
                       p_polynomial, p_positivity_scan, phi_potential,
                       photon_radius_solve, prop67_verify, r_prime_solve,
                       radial_functions, sample_k_point,
                       trapped_condition_value)

__version__ = "0.1.0"
