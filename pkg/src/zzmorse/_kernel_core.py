"""Column algebra for streaming zigzag persistence.

The matrix maintains one column per live critical cell, keyed by the column's
leading cell under a virtual row order: rows are ordered as if cells were
inserted in reverse order of their future removal, so whatever is being
removed right now can always be moved to the top of the order first.  Row
positions are sparse integer keys; moving a row is a key update plus a
cascade of column operations that keeps every other column clear of it.

Columns carry one of three labels.  F columns are cycles and own a birth tag;
G columns are boundaries; each H column has ``boundary(H) = G`` for its
partnered G column.  Births/deaths of intervals fall out of label changes.

This module is written in plain Python and is compiled by Cython's
pure-Python mode when available (see setup.py); it must not import anything
outside the standard library.
"""

import heapq

try:
    import cython

    COMPILED = cython.compiled
except ImportError:  # pragma: no cover - cython is normally installed
    COMPILED = False

GAP = 1 << 20


def _inv(a, p):
    return pow(a % p, p - 2, p)


def birth_key(birth):
    """Total order on birth tags: forward beats backward, then arrival order.

    The minimum under this order is the class that cannot survive a removal
    it is entangled with; the maximum is the one a forward insertion kills.
    """
    forward, pos, _block = birth
    return (1, pos) if forward else (0, -pos)


class Column:
    __slots__ = ("chain", "label", "birth", "partner")

    def __init__(self, chain, label, birth=None, partner=None):
        self.chain = chain
        self.label = label
        self.birth = birth
        self.partner = partner


class KernelError(Exception):
    """Internal invariant violation; not part of the public error taxonomy."""


class HomologyMatrix:
    def __init__(self, p):
        self.p = p
        self.cols = {}    # slot cell -> Column whose chain leads at that cell
        self.rowkey = {}  # cell -> virtual position
        self.rowseq = {}  # cell -> complex insertion sequence number
        self.rowdim = {}  # cell -> dimension
        self.occ = {}     # cell -> set of slots whose chain contains it
        self.f_counts = {}  # dimension -> number of F columns
        self._top = 0

    # -- bookkeeping ---------------------------------------------------------

    def __len__(self):
        return len(self.cols)

    def _alloc_top(self):
        self._top += GAP
        return self._top

    def _count(self, dim, delta):
        self.f_counts[dim] = self.f_counts.get(dim, 0) + delta
        if not self.f_counts[dim]:
            del self.f_counts[dim]

    def _occ_add(self, slot, chain):
        for cell in chain:
            self.occ[cell].add(slot)

    def _occ_drop(self, slot, chain):
        for cell in chain:
            self.occ[cell].discard(slot)

    def _addmul(self, slot, src, scalar):
        """cols[slot].chain += scalar * src, maintaining the occurrence index."""
        p = self.p
        scalar %= p
        if not scalar:
            return
        chain = self.cols[slot].chain
        occ = self.occ
        for cell, coeff in src.items():
            v = (chain.get(cell, 0) + scalar * coeff) % p
            if v:
                if cell not in chain:
                    occ[cell].add(slot)
                chain[cell] = v
            elif cell in chain:
                del chain[cell]
                occ[cell].discard(slot)

    def _set_column(self, slot, column):
        old = self.cols.get(slot)
        if old is not None:
            self._occ_drop(slot, old.chain)
        self.cols[slot] = column
        self._occ_add(slot, column.chain)

    def _combination(self, coeffs):
        """Linear combination of whole columns: sum of a_i * cols[i].chain."""
        p = self.p
        out = {}
        for slot, a in coeffs.items():
            for cell, coeff in self.cols[slot].chain.items():
                v = (out.get(cell, 0) + a * coeff) % p
                if v:
                    out[cell] = v
                else:
                    del out[cell]
        return out

    def _new_row(self, cell, dim, key, seq):
        self.rowkey[cell] = key
        self.rowseq[cell] = seq
        self.rowdim[cell] = dim
        self.occ[cell] = set()

    def _drop_row(self, cell):
        del self.rowkey[cell]
        del self.rowseq[cell]
        del self.rowdim[cell]
        del self.occ[cell]

    def _rekey(self):
        for i, cell in enumerate(sorted(self.rowkey, key=self.rowkey.get)):
            self.rowkey[cell] = (i + 1) * GAP
        self._top = (len(self.rowkey) + 1) * GAP

    def _splice_keys(self, tau_seq, sigma_seq):
        """Two fresh row positions matching the pair's insertion order.

        Live rows stay ordered by cell insertion sequence, so the pair slots
        in between its elders and its juniors; one global re-key is allowed
        when the integer window is too tight for two new keys.
        """
        for attempt in (0, 1):
            lo = 0
            hi = self._top + GAP
            for c, s in self.rowseq.items():
                k = self.rowkey[c]
                if s < tau_seq:
                    if k > lo:
                        lo = k
                elif s > sigma_seq:
                    if k < hi:
                        hi = k
                else:
                    raise KernelError("a live row sits between the pair's "
                                      "insertion positions")
            if hi - lo >= 4:
                step = (hi - lo) // 3
                return lo + step, lo + 2 * step
            if attempt:
                break
            self._rekey()
        raise KernelError("no room to splice new rows after re-keying")

    # -- reduction -----------------------------------------------------------

    def _reduce(self, boundary):
        """Express a chain as a combination of columns; returns {slot: coeff}."""
        p = self.p
        rowkey = self.rowkey
        work = {}
        heap = []
        for cell, coeff in boundary.items():
            coeff %= p
            if coeff:
                if cell not in rowkey:
                    raise KernelError("boundary cell %r has no row" % (cell,))
                work[cell] = coeff
                heapq.heappush(heap, (-rowkey[cell], cell))
        used = {}
        while heap:
            _, lead = heapq.heappop(heap)
            coeff = work.get(lead)
            if not coeff:
                continue
            col = self.cols[lead].chain
            a = (coeff * _inv(col[lead], p)) % p
            used[lead] = a
            for cell, c in col.items():
                v = (work.get(cell, 0) - a * c) % p
                if v:
                    if cell not in work:
                        heapq.heappush(heap, (-rowkey[cell], cell))
                    work[cell] = v
                else:
                    work.pop(cell, None)
        if work:
            raise KernelError("reduction left a remainder")
        return used

    # -- the three kernel operations ------------------------------------------

    def forward_insert(self, cell, dim, boundary, birth, seq):
        """Add a critical cell; returns (dim, birth) of a dying class, or None.

        ``birth`` tags the class a plain insertion creates; ``seq`` is the
        cell's insertion sequence number in the complex.
        """
        if cell in self.rowkey:
            raise KernelError("cell %r already has a row" % (cell,))
        used = self._reduce(boundary)
        gs = {}
        fs = {}
        for slot, a in used.items():
            label = self.cols[slot].label
            if label == "G":
                gs[slot] = a
            elif label == "F":
                fs[slot] = a
            else:
                raise KernelError("boundary is not a cycle in the reduced complex")

        p = self.p
        self._new_row(cell, dim, self._alloc_top(), seq)
        partners = {self.cols[g].partner: a for g, a in gs.items()}
        chain = self._combination(partners)
        for c in chain:
            chain[c] = -chain[c] % p
        chain[cell] = 1

        if not fs:
            self._set_column(cell, Column(chain, "F", birth=birth))
            self._count(dim, 1)
            return None

        # The class with the largest birth dies.  The surviving classes keep
        # the partial sums of the interacting cycle columns in birth order,
        # so that each survivor's representative entangles exactly the
        # earlier-born classes; re-echeloning against the new boundary
        # column settles which row each survivor occupies.
        rowkey = self.rowkey
        lead = max(fs, key=rowkey.get)
        order = sorted(fs, key=lambda f: birth_key(self.cols[f].birth))
        event = (self.rowdim[lead], self.cols[order[-1]].birth)
        g_chain = self._combination(fs)
        p = self.p
        placed = {}
        prefix = {}
        for f in order[:-1]:
            birth = self.cols[f].birth
            coeff = fs[f]
            for c, v in self.cols[f].chain.items():
                w = (prefix.get(c, 0) + coeff * v) % p
                if w:
                    prefix[c] = w
                else:
                    prefix.pop(c, None)
            part = dict(prefix)
            while True:
                top = max(part, key=rowkey.get)
                if top == lead:
                    against = g_chain
                elif top in placed:
                    against = placed[top][0]
                else:
                    break
                scale = -part[top] * _inv(against[top], p)
                for c, v in against.items():
                    w = (part.get(c, 0) + scale * v) % p
                    if w:
                        part[c] = w
                    else:
                        part.pop(c, None)
            placed[top] = (part, birth)
        for slot, (part, birth) in placed.items():
            self._set_column(slot, Column(part, "F", birth=birth))
        self._set_column(lead, Column(g_chain, "G", partner=cell))
        self._set_column(cell, Column(chain, "H", partner=lead))
        self._count(self.rowdim[lead], -1)
        return event

    def backward_remove(self, cell, birth):
        """Remove a cell's row; returns (dim, birth) of a dying class, or None.

        ``birth`` tags the class reborn when the removal splits a pair.
        """
        if cell not in self.rowkey:
            raise KernelError("cell %r has no row" % (cell,))
        p = self.p
        rowkey = self.rowkey
        blockers = sorted((b for b in self.occ[cell] if b != cell),
                          key=rowkey.get)
        for beta in blockers:
            alpha_col = self.cols[cell]
            beta_col = self.cols[beta]
            y = alpha_col.chain[cell]
            x = beta_col.chain.get(cell, 0)
            if not x:
                raise KernelError("stale occurrence of %r in %r" % (cell, beta))
            la, lb = alpha_col.label, beta_col.label
            if lb == "G":
                raise KernelError("a boundary column contains a removable cell")
            if la == "F":
                if lb == "F" and birth_key(beta_col.birth) < birth_key(alpha_col.birth):
                    # The blocker's class dies sooner, so its column rides
                    # up with the removed cell; the decoupled mix stays at
                    # the blocker's row carrying the larger birth.
                    moved = Column(dict(beta_col.chain), "F",
                                   birth=beta_col.birth)
                    self._addmul(beta, alpha_col.chain, -x * _inv(y, p))
                    beta_col.birth = alpha_col.birth
                    self._set_column(cell, moved)
                else:
                    self._addmul(beta, alpha_col.chain, -x * _inv(y, p))
            elif lb == "F":
                moved = dict(alpha_col.chain)
                self._set_column(cell, Column(dict(beta_col.chain), "F",
                                              birth=beta_col.birth))
                swapped = Column(moved, "H", partner=alpha_col.partner)
                self._set_column(beta, swapped)
                self._addmul(beta, self.cols[cell].chain, -y * _inv(x, p))
                self.cols[swapped.partner].partner = beta
            else:
                g_a = alpha_col.partner
                g_b = beta_col.partner
                if rowkey[g_a] < rowkey[g_b]:
                    lam = -x * _inv(y, p)
                    self._addmul(beta, alpha_col.chain, lam)
                    self._addmul(g_b, self.cols[g_a].chain, lam)
                else:
                    mu = -y * _inv(x, p)
                    moved = dict(alpha_col.chain)
                    self._set_column(cell, Column(dict(beta_col.chain), "H",
                                                  partner=g_b))
                    self.cols[g_b].partner = cell
                    swapped = Column(moved, "H", partner=g_a)
                    self._set_column(beta, swapped)
                    self._addmul(beta, self.cols[cell].chain, mu)
                    self._addmul(g_a, self.cols[g_b].chain, mu)
                    self.cols[g_a].partner = beta

        if self.occ[cell] != {cell}:
            raise KernelError("cell %r still occurs in other columns" % (cell,))
        rowkey[cell] = self._alloc_top()

        col = self.cols[cell]
        dim = self.rowdim[cell]
        event = None
        if col.label == "F":
            event = (dim, col.birth)
            self._count(dim, -1)
        elif col.label == "H":
            partner = self.cols[col.partner]
            partner.label = "F"
            partner.birth = birth
            partner.partner = None
            self._count(self.rowdim[col.partner], 1)
        else:
            raise KernelError("a boundary column leads at a maximal cell")
        self._occ_drop(cell, col.chain)
        del self.cols[cell]
        self._drop_row(cell)
        return event

    def unpair_update(self, tau, sigma, sigma_boundary, tau_cofacets,
                      incidence, tau_dim, tau_seq, sigma_seq):
        """Splice the freshly unpaired cells tau, sigma into the matrix.

        ``sigma_boundary`` is sigma's reduced boundary after unpairing,
        ``tau_cofacets`` the reduced coboundary of tau; existing cycle and
        pairing columns are corrected so all invariants survive.  The new
        rows take the pair's original insertion position (``tau_seq``,
        ``sigma_seq``).  Returns the number of corrected columns.
        """
        p = self.p
        below = [c for c in sigma_boundary if c != tau]
        above = [c for c in tau_cofacets if c != sigma]
        for c in below + above:
            if c not in self.rowkey:
                raise KernelError("chain cell %r has no row" % (c,))
        key_tau, key_sigma = self._splice_keys(tau_seq, sigma_seq)
        for c in below:
            if self.rowkey[c] >= key_tau:
                raise KernelError("boundary cell %r sits above the spliced "
                                  "pair" % (c,))
        for c in above:
            if self.rowkey[c] <= key_sigma:
                raise KernelError("cofacet %r sits below the spliced pair"
                                  % (c,))
        self._new_row(tau, tau_dim, key_tau, tau_seq)
        self._new_row(sigma, tau_dim + 1, key_sigma, sigma_seq)

        scale = -_inv(incidence, p) % p
        touched = 0
        seen = set()
        for nu, w in tau_cofacets.items():
            if nu == sigma:
                continue
            for slot in self.occ[nu]:
                if slot in seen:
                    continue
                seen.add(slot)
                col = self.cols[slot]
                if col.label == "G":
                    continue
                s = 0
                for cell, coeff in tau_cofacets.items():
                    if cell != sigma:
                        s += coeff * col.chain.get(cell, 0)
                s %= p
                if not s:
                    continue
                self._addmul(slot, {sigma: 1}, scale * s)
                touched += 1

        g_chain = {c: v % p for c, v in sigma_boundary.items() if v % p}
        self._set_column(tau, Column(g_chain, "G", partner=sigma))
        self._set_column(sigma, Column({sigma: 1}, "H", partner=tau))
        return touched
