from .field import Field, is_prime
from .category import (DirectSum, LinearCategory, Mor, Presentation, ValidationReport,
                       discrete_category, matrix_category, validate_category)
from .envelope import AdditiveEnvelope, additive_envelope
from .functor import (ComposedFunctor, Functor, FunctorPresentation, IdentityFunctor, LambdaFunctor,
                      NatTrans, check_functor, check_naturality, compose_functors, identity_nat,
                      inverse_nat, is_nat_iso, nat_equal, permutation_functor, scale_nat, vcompose,
                      whisker_left, whisker_right)
from .search import IsoResult, SplitResult, enumerate_idempotents, find_iso, is_idempotent, split_idempotent
from .subcat import SubspaceCategory
