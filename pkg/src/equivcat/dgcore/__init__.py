"""DG categories: presentations, H⁰, twisted complexes, equivariant objects."""
from .dgcat import (DGPresentation, DGReport, H0Category, check_dg_action, check_dg_category,
                    check_dg_functor, closed_degree_zero_basis, cohomology_dims, degree_of,
                    dg_from_linear, h0, h0_action, h0_functor, is_closed_degree_zero)
from .equivariant import (EquivariantPerf, SplitUnitCertificate, QGResult, dg_equivariant_structures,
                          split_unit_equivalence_check, equivariant_cone, equivariant_shift, hom_dg_equivariant,
                          perf_h0, qg_membership)
from .examples import (ParityReport, SwapInstance, swap_structures_instance, swap_complexes_instance, graded_dimensions,
                       not_pretriangulated_report, parity_report, sample_complexes)
from .twisted import TwistedCategory, TwistedComplex, TwistedLift, pretr
