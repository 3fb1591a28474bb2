from .category import (CategoryError, FinCategory, ResourceLimit, ValidationReport, Violation,
                       default_cap, validate_category)
from .diagrams import (DiagramCategory, Poset, RowIndex, arrow_shape, chain, cube, enumerate_diagrams,
                       enumerate_homs, is_diagram, reindex_cols)
from .functor import (BoundaryError, Functor, FunctorError, NatTransformation, NaturalityError,
                      compose_functors, horiz_compose, identity_functor, identity_nat, vert_compose, whisker)
from .shapes import (IntervalMonoid, cube_category, functor_category, interval_monoid, ordinal,
                     poset_category, product_category, product_functor, terminal, two)
