"""Runtime audits used by validate mode and the acceptance suite.

Two independent cross-checks live here.  ``check_matrix`` audits the
structural conditions the column kernel promises to maintain: triangular
leading terms, cycle columns with vanishing boundary, boundary columns that
are exactly the boundaries of their partners, and a consistent pairing.
``ShadowMatrix`` is an unreduced twin kernel fed every raw cell, so its
per-dimension cycle counts are the Betti numbers of the full complex and can
be compared with the Morse-reduced matrix after each atomic operation.
"""

from ._backend import core
from .errors import BrokenInvariant
from .morse import morse_boundary
from .oracle import betti_numbers
from .stream import (InsertCritical, InsertPair, RemoveCritical, RemovePair,
                     RemoveUnpaired)


# -- structural audit of the homology matrix ---------------------------------------

def apply_boundary(chain, boundary_fn, p):
    """Boundary of a chain under a cell -> facet-chain operator."""
    out = {}
    for cell, coeff in chain.items():
        for facet, inc in boundary_fn(cell).items():
            v = (out.get(facet, 0) + coeff * inc) % p
            if v:
                out[facet] = v
            else:
                del out[facet]
    return out


def check_matrix(matrix, boundary_fn):
    """Audit the homology matrix; raises BrokenInvariant on any violation.

    ``boundary_fn`` maps a row cell to its boundary chain in the complex the
    matrix is tracking (for the engine, the Morse boundary of a critical
    cell).  Checks row order, triangularity, the cycle/boundary conditions,
    the pairing, and the occurrence-index and cycle-count bookkeeping.
    """
    p = matrix.p
    rowkey = matrix.rowkey
    if set(matrix.cols) != set(rowkey):
        raise BrokenInvariant("columns and rows list different cells")

    for cell in rowkey:
        for facet in boundary_fn(cell):
            if facet not in rowkey:
                raise BrokenInvariant("boundary of %r leaves the rows" % (cell,))
            if rowkey[facet] >= rowkey[cell]:
                raise BrokenInvariant(
                    "row order is not a filtration: %r above %r" % (facet, cell))

    counts = {}
    for slot, col in matrix.cols.items():
        if not col.chain:
            raise BrokenInvariant("empty column at %r" % (slot,))
        dim = matrix.rowdim[slot]
        for cell, coeff in col.chain.items():
            if cell not in rowkey:
                raise BrokenInvariant("column %r touches a dead row" % (slot,))
            if matrix.rowdim[cell] != dim:
                raise BrokenInvariant("column %r mixes dimensions" % (slot,))
            if coeff % p == 0:
                raise BrokenInvariant("stored zero coefficient in %r" % (slot,))
            if slot not in matrix.occ[cell]:
                raise BrokenInvariant("occurrence index misses %r" % (slot,))
        if max(col.chain, key=rowkey.get) != slot:
            raise BrokenInvariant("column at %r does not lead there" % (slot,))

        bd = apply_boundary(col.chain, boundary_fn, p)
        if col.label == "F":
            if bd:
                raise BrokenInvariant("cycle column %r has a boundary" % (slot,))
            if col.birth is None:
                raise BrokenInvariant("cycle column %r carries no birth" % (slot,))
            counts[dim] = counts.get(dim, 0) + 1
        elif col.label == "G":
            partner = matrix.cols.get(col.partner)
            if partner is None or partner.label != "H" or partner.partner != slot:
                raise BrokenInvariant("boundary column %r is unpartnered" % (slot,))
        elif col.label == "H":
            partner = matrix.cols.get(col.partner)
            if partner is None or partner.label != "G" or partner.partner != slot:
                raise BrokenInvariant("chain column %r is unpartnered" % (slot,))
            if bd != partner.chain:
                raise BrokenInvariant(
                    "chain column %r does not bound its partner" % (slot,))
        else:
            raise BrokenInvariant("unknown label %r at %r" % (col.label, slot))

    for cell, slots in matrix.occ.items():
        for slot in slots:
            if cell not in matrix.cols[slot].chain:
                raise BrokenInvariant("stale occurrence entry at %r" % (cell,))

    if counts != matrix.f_counts:
        raise BrokenInvariant("cycle-count bookkeeping is off: %r vs %r"
                              % (counts, matrix.f_counts))


def check_invariants(state, matrix, op=None):
    """Observer form of check_matrix against the current Morse boundary."""
    cx, matching = state.complex, state.matching
    check_matrix(matrix, lambda cell: morse_boundary(cx, matching, cell))


# -- dense Betti cross-check --------------------------------------------------------

def check_betti(state, matrix, op=None):
    """Observer asserting Betti(full) = Betti(Morse) = matrix cycle counts.

    Dense-rank computation on both complexes; only for small runs.
    """
    cx, matching = state.complex, state.matching
    p = cx.p
    full = {c: (cx.dims[c], cx.facets[c]) for c in cx.dims}
    reduced = {nu: (cx.dims[nu], morse_boundary(cx, matching, nu))
               for nu in matching.critical}
    betti = betti_numbers(full, p)
    if betti_numbers(reduced, p) != betti:
        raise BrokenInvariant("Morse complex changed the Betti numbers")
    if {d: b for d, b in enumerate(betti) if b} != matrix.f_counts:
        raise BrokenInvariant("matrix cycle counts disagree with Betti numbers")


# -- unreduced shadow kernel ---------------------------------------------------------

class ShadowMatrix:
    """Twin kernel that skips Morse reduction: one row per raw cell.

    ``mirror`` replays an atomic operation with the raw cells involved;
    ``compare`` then asserts its per-dimension cycle counts match the
    reduced matrix's.  Births are dummies since only counts are read.
    """

    def __init__(self, p):
        self.matrix = core.HomologyMatrix(p)
        self._clock = 0

    def _insert(self, cx, cell):
        self._clock += 1
        try:
            self.matrix.forward_insert(cell, cx.dims[cell],
                                       dict(cx.facets[cell]),
                                       (True, self._clock, 0), cx.seq[cell])
        except core.KernelError as exc:
            raise BrokenInvariant("shadow insert of %r: %s" % (cell, exc)) from None

    def _remove(self, cell):
        self._clock += 1
        try:
            self.matrix.backward_remove(cell, (False, self._clock, 0))
        except core.KernelError as exc:
            raise BrokenInvariant("shadow removal of %r: %s" % (cell, exc)) from None

    def mirror(self, state, op):
        cx = state.complex
        if isinstance(op, InsertCritical):
            self._insert(cx, op.cell)
        elif isinstance(op, InsertPair):
            self._insert(cx, op.tau)
            self._insert(cx, op.sigma)
        elif isinstance(op, RemoveCritical):
            self._remove(op.cell)
        elif isinstance(op, RemovePair):
            self._remove(op.sigma)
            self._remove(op.tau)
        elif isinstance(op, RemoveUnpaired):
            self._remove(op.sigma)
        else:
            raise BrokenInvariant("shadow cannot mirror %r" % (op,))

    def compare(self, reduced):
        if self.matrix.f_counts != reduced.f_counts:
            raise BrokenInvariant(
                "cycle counts diverge: full %r, reduced %r"
                % (self.matrix.f_counts, reduced.f_counts))
