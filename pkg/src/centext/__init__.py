"""Central extensions of finite abelian groups.

Cocycles, H², twisted products and the embedding of class-two extensions
into twisted products with divisible kernel.
"""

from .abelian import AbelianGroup, canonicalize, ext_space, hom_space, tensor_square
from .cocycle import (
    BilinearMatrix,
    CochainMap,
    Cocycle,
    bilinear_to_cocycle,
    carry_cocycle,
    coboundary,
    cohomologous,
    commutator_pairing,
    is_bilinear,
    pullback,
    pushforward,
    validate_cocycle,
)
from .cohomology import h2_bil, induced_on_classes, kernel_jstar_equals_ext, z2_b2_h2
from .embedding import divisible_target, embed, extend_f, factor_map, universal_triple, verify_universal_property
from .errors import CapacityError, CentextError, InvalidInputError, VerificationError
from .qz import QZVector
from .twisted import ExtensionGroup, build_extension, is_twisted_product_class, structure_report

__version__ = "0.1.0"
