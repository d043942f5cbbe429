"""Coset posets of symplectic spaces and extraspecial groups, with exact homology."""

from .fplinalg import FieldSpec, Subspace, canonicalize, reduce_mod, quotient_coords, subspace_algebra
from .formulas import WedgeCount, n_isotropic, steinberg_dim, wedge_count
from .groups import (
    GroupCoset,
    GroupModel,
    SubgroupSet,
    abelian_subgroups,
    commutator_form,
    coset,
    coset_inclusion,
    extraspecial,
    heisenberg,
    make_pi,
    phi_map,
)
from .homology import (
    ChainComplex,
    Cycle,
    HomologyGroup,
    chain_complex,
    euler_characteristic,
    fundamental_cycle,
    homology,
    is_boundary,
    pi1_report,
    pushforward,
    smith_normal_form,
)
from .posets import (
    CosetPoset,
    Poset,
    PosetMap,
    SimplicialComplex,
    barycentric,
    collection_vee,
    coset_poset,
    fiber,
    has_initial,
    has_terminal,
    join,
    order_complex,
    sphere_J,
    suspension,
)
from .symgeom import AlternatingForm, SymplecticSpace, enumerate_isotropic, is_isotropic, perp, standard_space

__version__ = "0.1.0"
