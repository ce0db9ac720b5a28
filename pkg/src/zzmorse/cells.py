"""Cell complexes over a prime field.

A complex is a mutable Hasse diagram: cells carry a dimension, incidence
coefficients live on the (cofacet, facet) edges, and facet/cofacet adjacency
is stored mirrored.  Chains are plain dicts CellId -> nonzero coefficient in
[1, p).  All coefficients are reduced mod p at the door.
"""

from itertools import combinations

from .errors import (
    BrokenBoundary,
    EmptyDims,
    MissingFace,
    MissingFacet,
    NotMaximal,
    UnknownCell,
    ZeroInverse,
)


def field_inv(a, p):
    """Multiplicative inverse of a mod p (p prime)."""
    a %= p
    if a == 0:
        raise ZeroInverse("0 has no inverse mod %d" % p)
    return pow(a, p - 2, p)


def chain_addmul(dst, src, scalar, p):
    """dst += scalar * src, in place, dropping zero entries."""
    if scalar % p == 0:
        return dst
    for cell, coeff in src.items():
        v = (dst.get(cell, 0) + scalar * coeff) % p
        if v:
            dst[cell] = v
        else:
            dst.pop(cell, None)
    return dst


class Complex:
    """Mutable cell complex with field incidence coefficients.

    ``validate=True`` additionally checks d(d(cell)) = 0 on every insertion;
    that costs O(deg^2) per cell and is off by default.
    """

    def __init__(self, p=2, validate=False):
        if p < 2:
            raise ValueError("field characteristic must be a prime >= 2")
        self.p = p
        self.validate = validate
        self.dims = {}          # CellId -> dimension
        self.facets = {}        # CellId -> {facet CellId: coeff}
        self.cofacets = {}      # CellId -> {cofacet CellId: coeff}
        self.seq = {}           # CellId -> insertion sequence number
        self._next_id = 0
        self._next_seq = 0

    def __len__(self):
        return len(self.dims)

    def __contains__(self, cell):
        return cell in self.dims

    def cells(self):
        return self.dims.keys()

    def dim(self, cell):
        try:
            return self.dims[cell]
        except KeyError:
            raise UnknownCell(repr(cell)) from None

    def fresh_id(self):
        """Reserve and return an unused CellId."""
        cid = self._next_id
        self._next_id += 1
        return cid

    def insert_cell(self, dim, boundary, cell=None):
        """Insert a cell with the given facet chain; returns its CellId.

        Pass ``cell`` (obtained from fresh_id) to insert under a
        pre-reserved id, e.g. when the id was handed out before the cell's
        turn in an insertion sequence.
        """
        p = self.p
        bd = {}
        for facet, coeff in boundary.items():
            coeff %= p
            if coeff == 0:
                continue
            d = self.dims.get(facet)
            if d is None:
                raise MissingFacet("facet %r not in complex" % (facet,))
            if d != dim - 1:
                raise MissingFacet(
                    "facet %r has dimension %d, expected %d" % (facet, d, dim - 1)
                )
            bd[facet] = coeff
        if self.validate and bd:
            dd = {}
            for facet, coeff in bd.items():
                chain_addmul(dd, self.facets[facet], coeff, p)
            if dd:
                raise BrokenBoundary("boundary of the boundary is nonzero: %r" % dd)
        if cell is None:
            cid = self.fresh_id()
        else:
            cid = cell
            if cid in self.dims:
                raise UnknownCell("CellId %r already in use" % (cid,))
            self._next_id = max(self._next_id, cid + 1)
        self.dims[cid] = dim
        self.facets[cid] = bd
        self.cofacets[cid] = {}
        self.seq[cid] = self._next_seq
        self._next_seq += 1
        for facet, coeff in bd.items():
            self.cofacets[facet][cid] = coeff
        return cid

    def remove_cell(self, cell):
        """Remove a maximal cell."""
        if cell not in self.dims:
            raise UnknownCell(repr(cell))
        if self.cofacets[cell]:
            raise NotMaximal("cell %r still has cofacets" % (cell,))
        for facet in self.facets[cell]:
            del self.cofacets[facet][cell]
        del self.dims[cell]
        del self.facets[cell]
        del self.cofacets[cell]
        del self.seq[cell]

    def boundary(self, cell):
        if cell not in self.dims:
            raise UnknownCell(repr(cell))
        return dict(self.facets[cell])

    def coboundary(self, cell):
        if cell not in self.dims:
            raise UnknownCell(repr(cell))
        return dict(self.cofacets[cell])

    def is_maximal(self, cell):
        if cell not in self.dims:
            raise UnknownCell(repr(cell))
        return not self.cofacets[cell]

    def check_mirrors(self):
        """Assert facet/cofacet mirror consistency (test hook)."""
        for cell, bd in self.facets.items():
            for facet, coeff in bd.items():
                assert self.cofacets[facet][cell] == coeff
        for cell, cb in self.cofacets.items():
            for cofacet, coeff in cb.items():
                assert self.facets[cofacet][cell] == coeff

    def check_dd_zero(self):
        """Assert d(d(cell)) = 0 for every cell (test hook)."""
        for cell, bd in self.facets.items():
            dd = {}
            for facet, coeff in bd.items():
                chain_addmul(dd, self.facets[facet], coeff, self.p)
            assert not dd, "dd != 0 at cell %r" % (cell,)


def simplex_boundary(simplex, index, p):
    """Facet chain of a simplex given a tuple -> CellId map.

    Signs follow the orientation of sorted vertex lists: omitting the j-th
    vertex contributes (-1)^j.
    """
    bd = {}
    for j in range(len(simplex)):
        face = simplex[:j] + simplex[j + 1:]
        coeff = (1 if j % 2 == 0 else -1) % p
        if coeff:
            bd[index[face]] = coeff
    return bd


def build_simplicial(simplices, p=2, validate=False):
    """Complex from a face-closed list of strictly sorted vertex tuples.

    The tuple -> CellId map is left on the result as ``simplex_ids``.
    """
    cx = Complex(p, validate=validate)
    index = {}
    for simplex in sorted(set(tuple(s) for s in simplices), key=lambda s: (len(s), s)):
        if list(simplex) != sorted(set(simplex)):
            raise MissingFace("vertex list %r is not strictly sorted" % (simplex,))
        if len(simplex) > 1:
            for j in range(len(simplex)):
                face = simplex[:j] + simplex[j + 1:]
                if face not in index:
                    raise MissingFace("face %r of %r is missing" % (face, simplex))
        bd = simplex_boundary(simplex, index, p) if len(simplex) > 1 else {}
        index[simplex] = cx.insert_cell(len(simplex) - 1, bd)
    cx.simplex_ids = index
    return cx


def iter_cubes(dims):
    """Elementary cubes of the full grid, in (dim, coords) order.

    A cube is a tuple of doubled coordinates: even entry 2k is the vertex
    coordinate k, odd entry 2k+1 is the unit interval [k, k+1].  The cube's
    dimension is the number of odd entries.
    """
    nx, ny, nz = dims
    ranges = [range(2 * nx - 1), range(2 * ny - 1), range(2 * nz - 1)]
    cubes = [
        (x, y, z)
        for x in ranges[0]
        for y in ranges[1]
        for z in ranges[2]
    ]
    cubes.sort(key=lambda c: (sum(v % 2 for v in c), c))
    return cubes


def cube_dim(cube):
    return sum(v % 2 for v in cube)


def cube_facets(cube, p):
    """Facet list [(facet cube, coeff)] with the standard alternating signs."""
    out = []
    odd_seen = 0
    for axis, v in enumerate(cube):
        if v % 2 == 0:
            continue
        sign = 1 if odd_seen % 2 == 0 else -1
        upper = cube[:axis] + (v + 1,) + cube[axis + 1:]
        lower = cube[:axis] + (v - 1,) + cube[axis + 1:]
        out.append((upper, sign % p))
        out.append((lower, (-sign) % p))
        odd_seen += 1
    return [(c, coeff) for c, coeff in out if coeff]


def cube_vertices(cube):
    """Vertex coordinate tuples (undoubled) spanned by a cube."""
    spans = []
    for v in cube:
        if v % 2 == 0:
            spans.append((v // 2,))
        else:
            spans.append((v // 2, v // 2 + 1))
    return [(x, y, z) for x in spans[0] for y in spans[1] for z in spans[2]]


def build_cubical(dims, p=2, validate=False):
    """Full cubical grid complex with nx*ny*nz vertices.

    The cube -> CellId map is left on the result as ``cube_ids``.
    """
    if len(dims) != 3:
        raise EmptyDims("dims must be a 3-tuple")
    if any(n < 1 for n in dims):
        raise EmptyDims("grid extents must be >= 1, got %r" % (dims,))
    cx = Complex(p, validate=validate)
    index = {}
    for cube in iter_cubes(dims):
        bd = {index[c]: coeff for c, coeff in cube_facets(cube, p)}
        index[cube] = cx.insert_cell(cube_dim(cube), bd)
    cx.cube_ids = index
    return cx


def full_triangle(p=2):
    """The filled triangle on vertices 1,2,3 (test fixture)."""
    return build_simplicial(
        [(v,) for v in (1, 2, 3)]
        + [e for e in combinations((1, 2, 3), 2)]
        + [(1, 2, 3)],
        p=p,
    )
