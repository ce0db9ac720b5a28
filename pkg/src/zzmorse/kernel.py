"""Streaming zigzag persistence over a complex that never fully materialises.

``run_stream`` consumes forward/backward blocks, keeps the evolving complex
reduced through a discrete Morse matching, and feeds only the critical-cell
traffic to the column kernel in ``_kernel_core``.  The output is the interval
decomposition in block indices plus operation/size metrics.
"""

from collections import namedtuple

from ._backend import core
from .cells import Complex
from .errors import (InconsistentBoundary, InvalidOp, MissingFacet,
                     UnknownCell, UnknownRow, ZeroPairIncidence)
from .morse import Matching, coreduce
from .stream import (InsertPair, KernelInsert, KernelRemove, KernelUnpair,
                     MorseState, RemovePair, apply_atomic, atomize_backward,
                     atomize_forward)
from .validate import ShadowMatrix

Interval = namedtuple("Interval", "dim birth death")
Metrics = namedtuple("Metrics", "raw_ops reduced_ops max_cells max_critical")


def backend():
    """Which kernel implementation is loaded: 'compiled' or 'pure'.

    Setting ZZMORSE_PURE=1 in the environment forces the interpreted
    kernel even when the compiled extension is built.
    """
    return "compiled" if core.COMPILED else "pure"


def insert_into_matrix(matrix, update, birth, seq):
    """Feed one critical insertion to the column kernel; returns an event."""
    try:
        return matrix.forward_insert(update.cell, update.dim,
                                     update.boundary, birth, seq)
    except core.KernelError as exc:
        raise InconsistentBoundary(str(exc)) from None


def remove_from_matrix(matrix, cell, birth):
    """Feed one critical removal to the column kernel; returns an event."""
    if cell not in matrix.rowkey:
        raise UnknownRow("cell %r has no row in the matrix" % (cell,))
    return matrix.backward_remove(cell, birth)


def unpair_in_matrix(matrix, update, tau_dim):
    """Feed a pair split to the column kernel."""
    if update.pair_incidence % matrix.p == 0:
        raise ZeroPairIncidence(
            "pair (%r, %r) has zero incidence" % (update.tau, update.sigma))
    matrix.unpair_update(update.tau, update.sigma, update.sigma_boundary,
                         update.tau_cofacets, update.pair_incidence,
                         tau_dim, update.tau_seq, update.sigma_seq)


def _translate_forward(cells, cx, ext2int):
    """Map one insertion block to internal ids; returns insertion records."""
    fresh = {}
    for fc in cells:
        if fc.cell in ext2int or fc.cell in fresh:
            raise InvalidOp("cell id %r is already alive" % (fc.cell,))
        fresh[fc.cell] = cx.fresh_id()
    p = cx.p
    records = {}
    for fc in cells:
        bd = {}
        for facet, coeff in fc.boundary.items():
            target = fresh.get(facet)
            if target is None:
                target = ext2int.get(facet)
            if target is None:
                raise MissingFacet("facet %r is not alive" % (facet,))
            coeff %= p
            if coeff:
                bd[target] = coeff
        records[fresh[fc.cell]] = (fc.dim, bd)
    ext2int.update(fresh)
    return records


def _translate_backward(cells, ext2int):
    out = set()
    for ext in cells:
        if ext not in ext2int:
            raise UnknownCell("cell id %r is not alive" % (ext,))
        cell = ext2int[ext]
        if cell in out:
            raise InvalidOp("cell id %r removed twice in one block" % (ext,))
        out.add(cell)
    return out


def run_stream(blocks, p=2, morse=True, validate=False, observer=None):
    """Run a zigzag stream; returns (intervals, metrics).

    ``blocks`` is an iterable of BlockOp; the stream must start and end at
    the empty complex.  Intervals are (dim, birth, death) with inclusive
    block indices counted from 1: the class is alive in the complexes seen
    after those blocks.  ``morse=False`` skips the matching step and runs
    every cell through the kernel.  ``observer(state, matrix, op)`` is called
    after every atomic operation.

    ``validate=True`` turns on consistency checks, including an unreduced
    shadow kernel whose cycle counts are compared with the reduced matrix
    after every atomic operation (skipped when ``morse=False``, where the
    two would coincide by construction).
    """
    state = MorseState(Complex(p=p, validate=validate), Matching())
    cx = state.complex
    matrix = core.HomologyMatrix(p)
    shadow = ShadowMatrix(p) if validate and morse else None
    ext2int = {}
    events = []
    raw_ops = reduced_ops = max_cells = max_critical = 0
    atomic_pos = 0
    block_index = 0

    for block in blocks:
        block_index += 1
        state.block = block_index

        if block.direction == "F":
            records = _translate_forward(block.cells, cx, ext2int)
            if morse:
                matching = coreduce(cx, records, overlay=records)
            else:
                matching = Matching()
                for cell in records:
                    matching.add_critical(cell)
            ops = atomize_forward(records, matching)
            state.stage(records)
            for op in ops:
                update = apply_atomic(state, op)
                raw_ops += 2 if isinstance(op, InsertPair) else 1
                if update is not None:
                    reduced_ops += 1
                    atomic_pos += 1
                    event = insert_into_matrix(
                        matrix, update, (True, atomic_pos, block_index),
                        cx.seq[update.cell])
                    if event is not None:
                        events.append((event[0], event[1], block_index))
                if shadow is not None:
                    shadow.mirror(state, op)
                    shadow.compare(matrix)
                if observer is not None:
                    observer(state, matrix, op)

        elif block.direction == "B":
            sigma_set = _translate_backward(block.cells, ext2int)
            removed = {ext for ext, cell in ext2int.items() if cell in sigma_set}
            ops = atomize_backward(sigma_set, state)
            for op in ops:
                update = apply_atomic(state, op)
                raw_ops += 2 if isinstance(op, RemovePair) else 1
                if isinstance(update, KernelUnpair):
                    reduced_ops += 3
                    atomic_pos += 1
                    unpair_in_matrix(matrix, update, cx.dims[update.tau])
                    atomic_pos += 1
                    event = remove_from_matrix(
                        matrix, update.sigma,
                        (False, atomic_pos, block_index))
                    if event is not None:
                        events.append((event[0], event[1], block_index))
                elif isinstance(update, KernelRemove):
                    reduced_ops += 1
                    atomic_pos += 1
                    event = remove_from_matrix(
                        matrix, update.cell,
                        (False, atomic_pos, block_index))
                    if event is not None:
                        events.append((event[0], event[1], block_index))
                if shadow is not None:
                    shadow.mirror(state, op)
                    shadow.compare(matrix)
                if observer is not None:
                    observer(state, matrix, op)
            for ext in removed:
                del ext2int[ext]

        else:
            raise InvalidOp("unknown block direction %r" % (block.direction,))

        if validate:
            if state.pending:
                raise InvalidOp("staged cells were never inserted")
            if len(matrix) != len(state.matching.critical):
                raise InvalidOp("matrix rows diverge from the critical cells")
        max_cells = max(max_cells, len(cx))
        max_critical = max(max_critical, len(state.matching.critical))

    if len(cx):
        raise InvalidOp("stream must end at the empty complex")

    intervals = []
    for dim, birth, death_block in events:
        if birth[2] <= death_block - 1:
            intervals.append(Interval(dim, birth[2], death_block - 1))
    intervals.sort()
    return intervals, Metrics(raw_ops, reduced_ops, max_cells, max_critical)
