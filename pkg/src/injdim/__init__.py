"""Deciding finite injective dimension over finite-dimensional local algebras.

Modules and bounded complexes are resolved by free modules over GF(p); Ext is
computed with canonical cocycle bases; cohomology operators (Eisenbud
operators for complete intersections, the Hopf action for abelian p-group
algebras) feed a torsion criterion that is cross-checked against a duality
oracle.
"""

from .algebra import Algebra, group_algebra, opposite, truncated_ci, from_structure_constants
from .complexes import Complex, FreeComplex, cone, cone_free, minimize, shift
from .ext import ext_group, ext_hom, ext_self_table, lift_cocycle, yoneda
from .fid import ZOO, check_fid, injective_dimension_oracle, verify_koszul_perfection, verify_theorem_sweep
from .modules import (
    Module,
    direct_sum,
    dual_module,
    free_module,
    is_projective,
    module_from_actions,
    random_module,
    syzygy_module,
    trivial_module,
    zero_module,
)
from .operators import (
    annihilation_exponent,
    eisenbud_operators,
    hopf_action,
    koszul_object,
    operator_action,
    torsion_verdict,
)
from .resolution import minimal_resolution, projective_dimension, resolve_complex

__version__ = "0.1.0"
