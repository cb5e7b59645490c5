"""Realizations of groups with commutator relations and their verifiers."""

from .realization import (BlockSpace, DeltaSpace, LinearRealization, ParamSpace, Realization,
                          RealizationError, UnitaryRealization, linear_block)
from .relations import (ResidueNonzero, anti_parallel, check_chevalley_extraction, check_product_injectivity,
                        check_steinberg_relations, commutator_terms, extract_chevalley_maps, remultiply)
from .relative import RelativeModel, check_relative_presentation
from .crossed import CrossedSquareModel, check_crossed_square
from .gluing import HomotopeLevels, check_gluing_relations
from .weak import (CoveringNotFound, Factor, check_gauss_decomposition, check_weak_action_identities,
                   covering_factorizations, gauss_decompose, generator_type_elements)
from .weak import remultiply as remultiply_factors
