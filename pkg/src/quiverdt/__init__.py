"""Exact quiver-representation censuses and Donaldson-Thomas-style series.

Layers, bottom up:

- :mod:`quiverdt.quiver` — quivers, dimension vectors, pairings, stability,
  Harder-Narasimhan combinatorics, Serre constraints, file formats.
- :mod:`quiverdt.exactalg` — exact coefficient arithmetic: Laurent
  polynomials in the half Tate twist u (u^2 = q), canonical rational
  functions, truncated multivariate series, plethystic Exp/Log.
- :mod:`quiverdt.census` — brute-force finite-field counting: point counts,
  stack counts, endomorphism algebras, (absolutely) indecomposable class
  counts, Kac polynomials by interpolation, semistable counts.
- :mod:`quiverdt.dtseries` — generating series: normalized stack series,
  Kac tables, HN recursion, wall-crossing checks, quiver-variety weights,
  character-stack and Hilbert-scheme series, duality, positivity reports.
- :mod:`quiverdt.acceptance` — the ten-criterion exact acceptance suite.
- :mod:`quiverdt.cli` — the ``qdt`` command-line front end.
"""

from .quiver import (
    Arrow,
    DimVector,
    FRAME_VERTEX,
    HNType,
    Quiver,
    QuiverError,
    SerreConstraint,
    StabilityCondition,
    TRIVIAL_CONSTRAINT,
    a2_quiver,
    antisym_form,
    double,
    euler_form,
    frame,
    hn_f_exponent,
    hn_tau_exponent,
    hn_types,
    is_generic,
    jordan_quiver,
    load_constraint,
    load_quiver,
    load_stability,
    loops_nilpotent_constraint,
    multi_loop_quiver,
    nilpotent_module_constraint,
    point_quiver,
    quiver_from_dict,
    quiver_to_dict,
    slope,
    triple,
)
from .exactalg import (
    ExactAlgError,
    LaurentPoly,
    RationalFunction,
    TruncSeries,
    adams,
    eval_at_q,
    pleth_exp,
    pleth_log,
    series_invert,
)
from .census import (
    CapExceeded,
    CensusError,
    CensusReport,
    Classification,
    EndAlgebra,
    MatrixRep,
    census_report,
    classify,
    count_abs_indecomposable,
    endomorphism_algebra,
    gl_order,
    kac_polynomial,
    point_count,
    semistable_point_count,
    stack_count,
)
from .dtseries import (
    DTSeriesError,
    KacTable,
    PositivityReport,
    SliceSpec,
    WallcrossReport,
    build_kac_table,
    char_stack_series,
    duality_transform,
    hilb3_series,
    hilb3_weight_polys,
    hn_semistable_series,
    kac_from_stack_series,
    nakajima_series,
    positivity_report,
    stack_series_from_kac,
    wallcross_check,
)
from .acceptance import CriterionResult, run_all

__version__ = "1.0.0"
