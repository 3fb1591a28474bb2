from .kernels import (DecalageMatch, NoIsomorphism, PreconditionFailure, compatibility, decalage_match,
                      find_isomorphism, kernels_from_simplicial)
from .levels import DiagramLevel, Op, TableLevel, Transformation, TruncatedSimplicialCat, tabulate
from .nerve import (decalage_category, iterated_decalage, nerve, nerve_structure, wide_nerve_iso, J_naturality,
                    J_transformation)
from .spindle import (check_bar_relations, spindle, spindle_hom_iso_check, spindle_op, spine, spine_op)
from .supercoherent import (check_supercoherence, compare_levelwise, extended_nerve_ops, simplicial_decalage,
                            supercoherent_nerve)
