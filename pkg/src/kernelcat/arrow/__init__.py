from .arrow import (ArrowCategory, arrow_on_functor, arrow_rows, build_arrow_category, check_comonad_laws,
                    comonad_structure, square_rows)
from .kernels import (KernelSystem, MissingKernel, UniversalPropertyFailure, find_kernels, is_universal,
                      universal_kernels)
from .lax import (LaxAlgebraData, PseudoIso, check_adjunction, check_condition_ii, check_lax_algebra,
                  compare_kernel_systems, extract_kernels, kernel_functor, phi_naturality)
from .pointed import CoalgebraLawViolation, NotPointed, PointedCategory, make_pointed
