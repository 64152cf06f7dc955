"""Extended Rees algebras, deformation to the normal cone and derived blow-ups,
computed with exact semifree dg-algebra presentations over ℚ."""

__version__ = "0.1.0"

from .blowup import (BlowupAtlas, blowup_charts, chart_consistency, classical_blowup_chart,
                     compare_pi0, exceptional_divisor, strictness_check_pi0, transition_coherence)
from .cotangent import cotangent_complex, cotangent_homology, normal_cone, transitivity_triangle
from .dg import (DGError, DGMorphism, DGPresentation, DifferentialSquareError, Generator,
                 InhomogeneousError, base_extend, dg_morphism, dg_tensor, discrete, flatten, koszul,
                 semifree)
from .graded import (GradedAlgebraPresentation, GradedModule, GradingError, day_tensor,
                     graded_localize, lemma_loc_check, monoid_algebra, regrade_pushforward,
                     split_plus_zero, twist)
from .groebner import (GroebnerBasis, buchberger, eliminate, in_radical, normal_form, saturate,
                       syzygies)
from .homology import (FPModule, QuasiIsoResult, homology, homology_at, is_connective,
                       quasi_iso_in_range)
from .poly import Polynomial, RingError, RingMap, WeightedRing, make_ring, parse_polynomial
from .rees import (ReesData, ReesError, classical_rees, compare_classical, fiber_at_zero,
                   fiber_comparison, generic_fiber, module_complex, normal_cone_of, rees_ext_koszul,
                   rees_ext_sym, weight_one_generation_check, weight_zero_check)
