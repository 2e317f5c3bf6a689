"""The elementary local maps a, b, c, d, e and their inverses.

Each map modifies one entry (or, for d and e, two entries) of a shaped array
and leaves everything else alone.  Writing them once against the abstract
operations {oplus, otimes, odiv, hsum} gives the birational maps in the
geometric domains and the piecewise-linear ones in the tropical domain from
the same code.  With

    A = w_{i-1,j} oplus w_{i,j-1}          (boundary convention applies)
    H = hsum(w_{i+1,j}, w_{i,j+1})

the maps act by

    a_{i,j}:  w_{i,j} -> (A otimes H) odiv w_{i,j}
    b_{i,j}:  w_{i,j} -> (A otimes w_{i,j+1}) odiv w_{i,j}
    c_{i,j}:  w_{i,j} -> w_{i,j} otimes A
    d^{k,l}_{i,j}:  w_{i,j} -> hsum(w_{i,j}, w_{k,l} otimes A)
                    w_{k,l} -> ((w_{k,l} otimes A) odiv w_{i,j}^2
                                oplus  1 odiv w_{i,j}) otimes H
    e^{k,l}_{i,j}:  swaps w_{i,j} and w_{k,l}

a and b are involutions; c, d are bijections whose inverses are derived by
solving the defining relations (subtraction-free, hence valid verbatim in the
tropical domain too) and validated by round-trip tests:

    c^{-1}:  w -> w odiv A
    d^{-1}:  w_{i,j} = w'_{i,j} oplus (H odiv w'_{k,l})
             w_{k,l} = (w'_{i,j} otimes w'_{k,l} otimes w_{i,j}) odiv (A otimes H)

The symmetric variants c_up, d_up act on upper-part arrays of self-conjugate
shapes at diagonal boxes; they are the specializations of c and d to symmetric
arrays and exist only geometrically.

The module also exposes the mutable grid scratch types used by the
correspondence compositions, so a long chain of local maps costs one array
copy, not one per step.
"""

from __future__ import annotations

from .arrays import ShapedArray, UpperArray
from .shapes import ShapeError
from .values import DomainError


# -- mutable scratch grids ---------------------------------------------------------


class Grid:
    """Mutable scratch copy of a ShapedArray for composing map kernels."""

    __slots__ = ("shape", "domain", "rows")

    def __init__(self, shape, domain, rows):
        self.shape = shape
        self.domain = domain
        self.rows = rows

    @classmethod
    def of(cls, arr: ShapedArray) -> "Grid":
        return cls(arr.shape, arr.domain, arr.to_lists())

    def to_array(self) -> ShapedArray:
        return ShapedArray._wrap(self.shape, self.rows, self.domain)

    def contains(self, i, j):
        return self.shape.contains((i, j))

    def get(self, i, j):
        return self.rows[i - 1][j - 1]

    def set(self, i, j, value):
        self.rows[i - 1][j - 1] = value

    def gwb(self, i, j):
        """Entry with the boundary convention (corner at (0,1),(1,0), zero beyond)."""
        if i >= 1 and j >= 1:
            if not self.contains(i, j):
                raise ShapeError(f"box ({i},{j}) outside shape {self.shape.parts}")
            return self.get(i, j)
        if i < 0 or j < 0:
            raise ShapeError(f"negative index ({i},{j})")
        if (i, j) in ((0, 1), (1, 0)):
            return self.domain.corner
        return self.domain.zero


class UpperGrid:
    """Mutable scratch copy of an UpperArray; same kernel interface as Grid.

    Only boxes with i <= j exist.  All local maps appearing in the restricted
    symmetric correspondence read within the upper part or the boundary, so no
    mirrored storage is needed.
    """

    __slots__ = ("shape", "domain", "rows")

    def __init__(self, upper: UpperArray):
        self.shape = upper.shape
        self.domain = upper.domain
        self.rows = [list(r) for r in upper.rows]

    def to_upper(self) -> UpperArray:
        return UpperArray(self.shape, self.rows, self.domain)

    def contains(self, i, j):
        return 1 <= i <= j and self.shape.contains((i, j))

    def get(self, i, j):
        return self.rows[i - 1][j - i]

    def set(self, i, j, value):
        self.rows[i - 1][j - i] = value

    def gwb(self, i, j):
        if i >= 1 and j >= 1:
            if not self.contains(i, j):
                raise ShapeError(f"box ({i},{j}) outside the upper part of {self.shape.parts}")
            return self.get(i, j)
        if i < 0 or j < 0:
            raise ShapeError(f"negative index ({i},{j})")
        if (i, j) in ((0, 1), (1, 0)):
            return self.domain.corner
        return self.domain.zero


def _need(grid, i, j):
    if not grid.contains(i, j):
        raise ShapeError(f"map needs box ({i},{j}), missing from shape {grid.shape.parts}")


# -- kernels (mutate a grid in place) ------------------------------------------------


def a_at(g, i, j):
    _need(g, i, j)
    _need(g, i + 1, j)
    _need(g, i, j + 1)
    dom = g.domain
    A = dom.oplus(g.gwb(i - 1, j), g.gwb(i, j - 1))
    H = dom.hsum(g.get(i + 1, j), g.get(i, j + 1))
    g.set(i, j, dom.odiv(dom.otimes(A, H), g.get(i, j)))


def b_at(g, i, j):
    _need(g, i, j)
    _need(g, i, j + 1)
    dom = g.domain
    A = dom.oplus(g.gwb(i - 1, j), g.gwb(i, j - 1))
    g.set(i, j, dom.odiv(dom.otimes(A, g.get(i, j + 1)), g.get(i, j)))


def c_at(g, i, j):
    _need(g, i, j)
    dom = g.domain
    A = dom.oplus(g.gwb(i - 1, j), g.gwb(i, j - 1))
    g.set(i, j, dom.otimes(g.get(i, j), A))


def inv_c_at(g, i, j):
    _need(g, i, j)
    dom = g.domain
    A = dom.oplus(g.gwb(i - 1, j), g.gwb(i, j - 1))
    g.set(i, j, dom.odiv(g.get(i, j), A))


def d_at(g, i, j, k, l):
    if (i, j) == (k, l):
        raise ShapeError(f"the two-point map needs distinct boxes, got ({i},{j}) twice")
    _need(g, i, j)
    _need(g, i + 1, j)
    _need(g, i, j + 1)
    _need(g, k, l)
    dom = g.domain
    A = dom.oplus(g.gwb(i - 1, j), g.gwb(i, j - 1))
    H = dom.hsum(g.get(i + 1, j), g.get(i, j + 1))
    w = g.get(i, j)
    zA = dom.otimes(g.get(k, l), A)
    g.set(i, j, dom.hsum(w, zA))
    g.set(
        k,
        l,
        dom.otimes(
            dom.oplus(dom.odiv(zA, dom.otimes(w, w)), dom.odiv(dom.one, w)),
            H,
        ),
    )


def inv_d_at(g, i, j, k, l):
    if (i, j) == (k, l):
        raise ShapeError(f"the two-point map needs distinct boxes, got ({i},{j}) twice")
    _need(g, i, j)
    _need(g, i + 1, j)
    _need(g, i, j + 1)
    _need(g, k, l)
    dom = g.domain
    A = dom.oplus(g.gwb(i - 1, j), g.gwb(i, j - 1))
    H = dom.hsum(g.get(i + 1, j), g.get(i, j + 1))
    wp = g.get(i, j)
    zp = g.get(k, l)
    w = dom.oplus(wp, dom.odiv(H, zp))
    z = dom.odiv(dom.otimes(dom.otimes(wp, zp), w), dom.otimes(A, H))
    g.set(i, j, w)
    g.set(k, l, z)


def e_at(g, i, j, k, l):
    if (i, j) == (k, l):
        raise ShapeError(f"the swap map needs distinct boxes, got ({i},{j}) twice")
    _need(g, i, j)
    _need(g, k, l)
    w = g.get(i, j)
    g.set(i, j, g.get(k, l))
    g.set(k, l, w)


def _geometric_only(g, what):
    if g.domain.is_tropical:
        raise DomainError(f"{what} is defined in the geometric domains only")


def c_up_at(g, i):
    """c at a diagonal box of a symmetric array: w_{i,i} -> 2 w_{i-1,i} w_{i,i}."""
    _geometric_only(g, "the restricted symmetric map c_up")
    _need(g, i, i)
    above = g.gwb(i - 1, i)
    g.set(i, i, 2 * above * g.get(i, i))


def d_up_at(g, i, k):
    """d between diagonal boxes (i,i), (k,k) of a symmetric array.

    Specialization of d with A = 2 w_{i-1,i} and H = w_{i,i+1} / 2 (the two
    arguments of each coincide by symmetry).
    """
    _geometric_only(g, "the restricted symmetric map d_up")
    if i == k:
        raise ShapeError(f"the two-point map needs distinct boxes, got ({i},{i}) twice")
    _need(g, i, i)
    _need(g, i, i + 1)
    _need(g, k, k)
    above = g.gwb(i - 1, i)
    w = g.get(i, i)
    z = g.get(k, k)
    zA = 2 * above * z
    g.set(i, i, g.domain.hsum(w, zA))
    g.set(k, k, (zA / (w * w) + 1 / w) * (g.get(i, i + 1) / 2))


# -- public one-shot applications ----------------------------------------------------


def apply_a(arr: ShapedArray, i: int, j: int) -> ShapedArray:
    g = Grid.of(arr)
    a_at(g, i, j)
    return g.to_array()


def apply_b(arr: ShapedArray, i: int, j: int) -> ShapedArray:
    g = Grid.of(arr)
    b_at(g, i, j)
    return g.to_array()


def apply_c(arr: ShapedArray, i: int, j: int) -> ShapedArray:
    g = Grid.of(arr)
    c_at(g, i, j)
    return g.to_array()


def apply_d(arr: ShapedArray, box_ij, box_kl) -> ShapedArray:
    g = Grid.of(arr)
    d_at(g, *box_ij, *box_kl)
    return g.to_array()


def apply_e(arr: ShapedArray, box_ij, box_kl) -> ShapedArray:
    g = Grid.of(arr)
    e_at(g, *box_ij, *box_kl)
    return g.to_array()


def inv_c(arr: ShapedArray, i: int, j: int) -> ShapedArray:
    g = Grid.of(arr)
    inv_c_at(g, i, j)
    return g.to_array()


def inv_d(arr: ShapedArray, box_ij, box_kl) -> ShapedArray:
    g = Grid.of(arr)
    inv_d_at(g, *box_ij, *box_kl)
    return g.to_array()


def apply_c_up(upper: UpperArray, i: int) -> UpperArray:
    g = UpperGrid(upper)
    c_up_at(g, i)
    return g.to_upper()


def apply_d_up(upper: UpperArray, i: int, k: int) -> UpperArray:
    g = UpperGrid(upper)
    d_up_at(g, i, k)
    return g.to_upper()
