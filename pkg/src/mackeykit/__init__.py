"""mackeykit: exact computer algebra for C_{p^n}-equivariant algebra.

Mackey and Green functors over cyclic p-groups, Burnside rings, box
products, induction / restriction / truncation / geometric fixed points,
and K-theoretic invariants of free modules — all in exact arithmetic
(integers and finite fields).
"""

__version__ = "0.1.0"

from .docio import (ParseError, load_document, parse_document, print_document,
                    save_document)
from .fields import GaloisField, gf_make, galois_trace
from .functors import (E1Page, E1Term, PhiLevel, brutal_truncation, e1_page,
                       free_module, geometric_fixed_points, induce_mackey,
                       phi_ring, restrict_mackey, ring_section_search,
                       tau_geq_1)
from .green import (GreenFunctor, GreenModule, GreenModuleMorphism,
                    GreenMorphism, MoritaWitness, TwistedGroupRing,
                    base_change_cp, base_change_map_cp, box_product_cp,
                    box_product_general, burnside_green, char_example_green,
                    check_green, check_green_module, constant_green,
                    direct_sum_green_modules, fixed_point_green,
                    green_module_from_invariant_span, green_module_hom_basis,
                    level_twisted_ring, module_from_green,
                    morita_matrix_units, tensor_modules, twisted_group_ring)
from .gsets import (
    BurnsideElement,
    CyclicGroup,
    FiniteGSet,
    burnside_quotient,
    burnside_ring,
    induce_gset,
    marks,
    marks_matrix,
    orbit_product,
    restrict_gset,
)
from .kzero import (CanonicalFreeClass, DimMatrix, FreenessWitness,
                    G0Splitting, ResolutionReport, classify_free,
                    constant_Z_resolution_check, decompose_module, dim_matrix,
                    freeness_decompose, g0_splitting, invert_module_iso,
                    k0_free_fixed_point, map_from_generator,
                    meadow_stabilizer, random_green_automorphism,
                    simples_count)
from .linalg import ZZ, SmithForm, smith_normal_form
from .mackey import (IsoResult, MackeyFunctor, MackeyMorphism, burnside_mackey,
                     check_axioms, constant_mackey, direct_sum,
                     fixed_point_mackey, hom_basis, is_isomorphic,
                     twisted_burnside_c5)
from .modules import FPModule, module_subquotient
from .rings import BasedRing, based_ring_check, render_presentation

__all__ = [
    "BasedRing",
    "BurnsideElement",
    "CanonicalFreeClass",
    "CyclicGroup",
    "DimMatrix",
    "E1Page",
    "E1Term",
    "FPModule",
    "FiniteGSet",
    "FreenessWitness",
    "G0Splitting",
    "GaloisField",
    "GreenFunctor",
    "GreenModule",
    "GreenModuleMorphism",
    "GreenMorphism",
    "IsoResult",
    "MackeyFunctor",
    "MackeyMorphism",
    "MoritaWitness",
    "ParseError",
    "PhiLevel",
    "ResolutionReport",
    "SmithForm",
    "TwistedGroupRing",
    "ZZ",
    "base_change_cp",
    "base_change_map_cp",
    "based_ring_check",
    "box_product_cp",
    "box_product_general",
    "brutal_truncation",
    "burnside_green",
    "burnside_mackey",
    "burnside_quotient",
    "burnside_ring",
    "char_example_green",
    "check_axioms",
    "check_green",
    "check_green_module",
    "classify_free",
    "constant_Z_resolution_check",
    "constant_green",
    "constant_mackey",
    "decompose_module",
    "dim_matrix",
    "direct_sum",
    "direct_sum_green_modules",
    "e1_page",
    "fixed_point_green",
    "fixed_point_mackey",
    "free_module",
    "freeness_decompose",
    "g0_splitting",
    "galois_trace",
    "geometric_fixed_points",
    "gf_make",
    "green_module_from_invariant_span",
    "green_module_hom_basis",
    "hom_basis",
    "induce_gset",
    "induce_mackey",
    "invert_module_iso",
    "is_isomorphic",
    "k0_free_fixed_point",
    "level_twisted_ring",
    "load_document",
    "map_from_generator",
    "marks",
    "marks_matrix",
    "meadow_stabilizer",
    "module_from_green",
    "module_subquotient",
    "morita_matrix_units",
    "orbit_product",
    "parse_document",
    "phi_ring",
    "print_document",
    "random_green_automorphism",
    "render_presentation",
    "restrict_gset",
    "restrict_mackey",
    "ring_section_search",
    "save_document",
    "simples_count",
    "smith_normal_form",
    "tau_geq_1",
    "tensor_modules",
    "twisted_burnside_c5",
    "twisted_group_ring",
]
