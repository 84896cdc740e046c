"""Completely monotone functions on finite lattices and random subsets of [n].

The package computes with void functionals of random subsets, decides when
fractional powers of completely monotone functions stay completely monotone,
maps divisibility sets, quantifies the distance from m-divisible objects to
the infinitely divisible class, and exhibits the sharpness counterexamples
(uniform singletons, the three-atom diamond, two-atom moment sequences).
"""

from .approx import (
    ApproxReport,
    lattice_square_witness,
    lower_bound_witness,
    sup_gap,
    sup_gap_argmax,
    two_point_set,
    upper_bound_witness,
)
from .cm import (
    CmVerdict,
    LatticeFunction,
    WeightFunction,
    cm_power_threshold_check,
    delta,
    extend_cm,
    is_cm,
    is_cm_bruteforce,
    mobius_weights,
    pointwise_product,
    poisson_accompany,
    power,
    reconstruct,
    sharpness_witness,
)
from .lattice import (
    BooleanLattice,
    FiniteLattice,
    boolean_lattice,
    catalog,
    chain_lattice,
    cover_degree,
    d_max,
    diamond_lattice,
    from_covers,
    is_distributive,
    materialize,
    pentagon_lattice,
    product_lattice,
    verify_distinct_joins,
)
from .moments import (
    HankelMatrix,
    MomentSequence,
    finite_diff_cm_check,
    hankel_psd_check,
    laplace_power_counterexample,
    two_atom_power_counterexample,
    two_atom_sequence,
)
from .randset import (
    PowerVerdict,
    RandomSubset,
    VoidFunctional,
    from_void,
    is_infinitely_divisible,
    is_m_divisible,
    poisson_union,
    power_exists,
    singleton_set,
    uniform_singleton,
    union_iid,
    void_distance,
    void_functional,
)
from .scan import (
    ExponentialPolynomial,
    IntervalSet,
    MultiIntervalCertificate,
    construct_multi_interval,
    power_difference_profile,
    q_poly,
    scan_S,
    schur_gradient_check,
    sign_change_bound,
    simplex_form,
    singleton_alternating_sum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
