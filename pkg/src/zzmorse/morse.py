"""Morse matchings and the reduced boundary/coboundary they induce.

A matching splits cells into critical cells A, queue cells Q, and king cells
K, with a bijection pairing each queue cell to a king cell one dimension up.
Matchings are built by coreduction and queried through gradient-path
traversal: the reduced incidence of two critical cells is the signed sum over
alternating paths between them, which a memoized sweep of the Hasse diagram
computes without materializing paths.
"""

import heapq

from .cells import field_inv
from .errors import CyclicMatching, NotCritical, UnknownCell


class Matching:
    """Partial pairing of cells with the leftover marked critical."""

    def __init__(self):
        self.critical = set()
        self.queue_cells = set()
        self.king_cells = set()
        self.pair_up = {}    # queue cell -> its king
        self.pair_down = {}  # king cell -> its queue cell

    def __contains__(self, cell):
        return (cell in self.critical or cell in self.queue_cells
                or cell in self.king_cells)

    def __len__(self):
        return len(self.critical) + len(self.queue_cells) + len(self.king_cells)

    def add_critical(self, cell):
        self.critical.add(cell)

    def add_pair(self, tau, sigma):
        self.queue_cells.add(tau)
        self.king_cells.add(sigma)
        self.pair_up[tau] = sigma
        self.pair_down[sigma] = tau

    def absorb(self, other):
        self.critical |= other.critical
        self.queue_cells |= other.queue_cells
        self.king_cells |= other.king_cells
        self.pair_up.update(other.pair_up)
        self.pair_down.update(other.pair_down)

    def unpair(self, tau):
        """Turn the pair (tau, king) into two critical cells."""
        sigma = self.pair_up.pop(tau)
        del self.pair_down[sigma]
        self.queue_cells.discard(tau)
        self.king_cells.discard(sigma)
        self.critical.add(tau)
        self.critical.add(sigma)
        return sigma

    def drop_critical(self, cell):
        if cell not in self.critical:
            raise NotCritical(repr(cell))
        self.critical.discard(cell)

    def drop_pair(self, tau):
        sigma = self.pair_up.pop(tau)
        del self.pair_down[sigma]
        self.queue_cells.discard(tau)
        self.king_cells.discard(sigma)
        return sigma

    def copy(self):
        out = Matching()
        out.absorb(self)
        return out


# ---------------------------------------------------------------------------
# coreduction
# ---------------------------------------------------------------------------

def coreduce(cx, sigma_set, frozen=None, overlay=None):
    """Build a matching on ``sigma_set`` by coreduction.

    Repeatedly pairs a cell with its single remaining unmatched facet; when
    stuck, the lowest (dim, id) unmatched cell becomes critical.  Cells
    outside ``sigma_set`` are treated as already matched (``frozen``), and
    pairs never cross that boundary.  ``overlay`` may supply ``(dim,
    boundary)`` records for cells not yet present in ``cx``, so a pending
    insertion block can be matched before it is applied.
    """
    overlay = overlay or {}
    sigma_set = set(sigma_set)
    if frozen is not None and getattr(cx, "validate", False):
        for cell in cx.dims:
            if cell not in sigma_set and cell not in frozen:
                raise UnknownCell("cell %r neither pending nor frozen" % (cell,))

    def facets(cell):
        if cell in overlay:
            return overlay[cell][1]
        return cx.facets[cell]

    def dim_of(cell):
        if cell in overlay:
            return overlay[cell][0]
        return cx.dims[cell]
    inner_cofacets = {}
    for cell in sigma_set:
        for facet in facets(cell):
            inner_cofacets.setdefault(facet, []).append(cell)

    avail = set(sigma_set)
    count = {cell: sum(1 for f in facets(cell) if f in avail)
             for cell in sigma_set}
    pairable = [(dim_of(c), c) for c in sigma_set if count[c] == 1]
    heapq.heapify(pairable)
    fallback = [(dim_of(c), c) for c in sigma_set]
    heapq.heapify(fallback)

    out = Matching()

    def retire(cell):
        # cell left avail: its cofacets inside sigma_set lose one free facet
        for cof in inner_cofacets.get(cell, ()):
            if cof in avail:
                count[cof] -= 1
                if count[cof] == 1:
                    heapq.heappush(pairable, (dim_of(cof), cof))

    while avail:
        while pairable:
            _, sigma = heapq.heappop(pairable)
            if sigma not in avail or count[sigma] != 1:
                continue
            tau = next(f for f in facets(sigma) if f in avail)
            avail.discard(tau)
            avail.discard(sigma)
            out.add_pair(tau, sigma)
            retire(tau)
            retire(sigma)
        while fallback:
            _, cell = heapq.heappop(fallback)
            if cell in avail:
                avail.discard(cell)
                out.add_critical(cell)
                retire(cell)
                break
    return out


def is_acyclic_matching(cx, matching):
    """True iff the matching's oriented Hasse diagram has no directed cycle.

    Any cycle must alternate queue and king cells, so it suffices to search
    the digraph on queue cells with an edge tau -> tau' when tau' is another
    facet of tau's king.
    """
    for tau in matching.queue_cells:
        if tau not in cx.dims or matching.pair_up[tau] not in cx.dims:
            raise UnknownCell("matching references a missing cell")

    WHITE, GRAY, DONE = 0, 1, 2
    color = {}

    def neighbours(tau):
        for facet in cx.facets[matching.pair_up[tau]]:
            if facet != tau and facet in matching.queue_cells:
                yield facet

    for root in matching.queue_cells:
        if color.get(root, WHITE) != WHITE:
            continue
        stack = [(root, iter(neighbours(root)))]
        color[root] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                state = color.get(nxt, WHITE)
                if state == GRAY:
                    return False
                if state == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(neighbours(nxt))))
                    advanced = True
                    break
            if not advanced:
                color[node] = DONE
                stack.pop()
    return True


# ---------------------------------------------------------------------------
# gradient-path traversal
# ---------------------------------------------------------------------------

def _flow(links, weight_of, pairs, matching, dead, seeds, p):
    """Accumulated path coefficients from a seed chain down (or up) to criticals.

    ``links(cell)`` lists the next cells reachable through a cell's pairing
    mate; ``dead`` is the side of a pair where paths stop.  Raises
    CyclicMatching if the traversal revisits an in-progress cell.
    """
    memo = {}
    expanded = set()
    stack = [c for c in seeds]
    while stack:
        cell = stack[-1]
        if cell in memo:
            stack.pop()
            continue
        if cell in matching.critical:
            memo[cell] = {cell: 1}
            stack.pop()
            continue
        if cell in dead:
            memo[cell] = {}
            stack.pop()
            continue
        if cell not in pairs:
            raise UnknownCell("cell %r is not covered by the matching" % (cell,))
        mate = pairs[cell]
        deps = [n for n in links(mate) if n != cell and n not in memo]
        if cell not in expanded:
            expanded.add(cell)
            if deps:
                for d in deps:
                    if d in expanded:
                        raise CyclicMatching("gradient path loops at %r" % (d,))
                stack.extend(deps)
                continue
        elif deps:
            raise CyclicMatching("gradient path loops at %r" % (cell,))
        scale = (-field_inv(weight_of(mate, cell), p)) % p
        acc = {}
        for nxt in links(mate):
            if nxt == cell:
                continue
            step = (scale * weight_of(mate, nxt)) % p
            for crit, coeff in memo[nxt].items():
                val = (acc.get(crit, 0) + step * coeff) % p
                if val:
                    acc[crit] = val
                else:
                    acc.pop(crit, None)
        memo[cell] = acc
        stack.pop()

    total = {}
    for cell, coeff in seeds.items():
        for crit, val in memo[cell].items():
            new = (total.get(crit, 0) + coeff * val) % p
            if new:
                total[crit] = new
            else:
                total.pop(crit, None)
    return total


def morse_boundary(cx, matching, nu):
    """Chain of critical facet-level cells reachable from the critical cell nu."""
    if nu not in matching.critical:
        raise NotCritical(repr(nu))
    return _flow(
        links=lambda cell: cx.facets[cell],
        weight_of=lambda upper, lower: cx.facets[upper][lower],
        pairs=matching.pair_up,
        matching=matching,
        dead=matching.king_cells,
        seeds=dict(cx.facets[nu]),
        p=cx.p,
    )


def morse_coboundary(cx, matching, tau):
    """Chain of critical cofacet-level cells with nonzero reduced incidence onto tau."""
    if tau not in matching.critical:
        raise NotCritical(repr(tau))
    return _flow(
        links=lambda cell: cx.cofacets[cell],
        weight_of=lambda lower, upper: cx.cofacets[lower][upper],
        pairs=matching.pair_down,
        matching=matching,
        dead=matching.queue_cells,
        seeds=dict(cx.cofacets[tau]),
        p=cx.p,
    )
