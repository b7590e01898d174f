"""Cocycles for the standard small examples used by tests and the CLI."""

from __future__ import annotations

import numpy as np

from .abelian import AbelianGroup
from .cocycle import BilinearMatrix, Cocycle, carry_cocycle


def cyclic_carry(p: int) -> Cocycle:
    """Z/p by Z/p with the carry factor set; the extension is Z/p²."""
    return carry_cocycle(p, p)


def square_form(p: int) -> BilinearMatrix:
    """β(x, y) = xy on Z/p with values in Z/p."""
    Z = AbelianGroup((p,))
    return BilinearMatrix(Z, Z, [[[1]]])


def commutator_power_cocycle(p: int) -> Cocycle:
    """Factor set of ⟨x, y, z | x^p = y^p = 1, z^p = [x, y] central⟩.

    A = (Z/p)³, B = Z/p generated by [x, y], transversal x^a y^b z^c:

        γ((a,b,c), (a',b',c')) = -a'b + floor((c + c')/p)   (mod p).

    The first term moves y^b past x^{a'}; the second is the carry when
    z-exponents wrap, since z^p = [x, y].
    """
    A = AbelianGroup((p, p, p))
    B = AbelianGroup((p,))
    C = A.coord_array
    a, b, c = C[:, 0], C[:, 1], C[:, 2]
    t = (-(a[None, :] * b[:, None]) + (c[:, None] + c[None, :]) // p) % p
    return Cocycle(A, B, t[:, :, None])


#: Examples reachable from the command line, by name and numeric alias.
EXAMPLES = {
    "carry": "carry",
    "1.3": "carry",
    "commutator-power": "commutator-power",
    "2.22": "commutator-power",
    "carry-embedding": "carry-embedding",
    "2.23": "carry-embedding",
}
