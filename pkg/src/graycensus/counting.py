"""Exact cycle and matching counts by a frontier sweep over the cube's edges.

The counter processes edges one at a time in a fixed order, maintaining a
table of partial-subgraph states keyed only on the frontier: the vertices
that still have unprocessed incident edges.  Each frontier vertex carries a
mate code:

    0          unused so far (degree 0)
    k+1        endpoint of a partial path whose other endpoint sits at
               frontier position k
    SATURATED  degree 2 (for matchings: degree 1, i.e. matched)

Processing an edge branches every state two ways (skip it / take it) and
merges states that become identical, which is what keeps the table far
smaller than the number of subgraphs it summarizes.  A vertex leaving the
frontier must be saturated or the state dies.  For cycle counting, an edge
whose endpoints are already each other's mates would close a cycle; that
closure is banked into the running total exactly when every vertex has
entered the sweep and no other path fragment is open, which counts each
undirected Hamiltonian cycle exactly once.

Between levels the table lives as packed uint64 key words (a few codes per
word, ordered so numeric key order equals bytewise row order) with one
multiplicity per row; byte rows materialize only at API boundaries.
Per-edge expansion runs in compiled kernels and duplicates merge via a
radix sort over the keys, so the table is always sorted and runs are
deterministic regardless of thread count.  The default edge order enters
vertices greedily to keep the frontier narrow, which shrinks the state
table by orders of magnitude against the binary vertex order.
Multiplicities are int64 while the table total is provably small enough,
then switch to exact Python ints.  Runs that outgrow the configured memory
budget abort with a checkpoint; runs without a budget bound their own
footprint by advancing each generation in sorted chunks, spilling oversized
output as sorted runs on disk, and k-way merging the runs into one globally
deduped table per level (merging only combines duplicate rows, so totals
are unaffected).  Levels that retire no vertex skip half the work: the
sorted input is itself the skip-branch output and passes through as a
virtual run.  Checkpoints are versioned binary files and resume
bit-identically at level boundaries.
"""

from __future__ import annotations

import hashlib
import os
import struct
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .cube import CubeGraph, Edge

BigCount = int  # Python ints are arbitrary precision already

SATURATED = 0xFF

TASK_HAMILTONIAN = "hamiltonian"
TASK_MATCHINGS = "matchings"
_TASKS = (TASK_HAMILTONIAN, TASK_MATCHINGS)

CHECKPOINT_MAGIC = b"GCKP"
CHECKPOINT_VERSION = 1

# multiplicities switch from int64 to Python ints once the table total
# passes this; totals at most double per level, so int64 sums stay exact
_INT64_TOTAL_LIMIT = 1 << 60

_SPLIT_ROWS_ENV = "GRAYCENSUS_SPLIT_ROWS"
_SPILL_DIR_ENV = "GRAYCENSUS_SPILL_DIR"


class CheckpointError(RuntimeError):
    pass


class CheckpointMismatch(CheckpointError):
    """Checkpoint belongs to a different run configuration."""


class CheckpointCorrupt(CheckpointError):
    """Checkpoint file is truncated or fails its content digest."""


class MemoryBudgetExceeded(RuntimeError):
    def __init__(self, message: str, checkpoint_path: Path | None = None):
        super().__init__(message)
        self.checkpoint_path = checkpoint_path


class _LevelPlan(NamedTuple):
    pu: int
    pv: int
    pad: bytes                  # zero codes appended for vertices entering here
    retire: tuple[int, ...]     # positions that must be saturated after this edge
    keep: tuple[int, ...]       # surviving positions, in frontier order
    code_remap: bytes           # old mate code -> new mate code after retirement
    frontier_size: int          # positions while the edge is processed
    closure_allowed: bool       # every vertex has entered by this level


@dataclass(frozen=True)
class EdgeOrder:
    """A total order on Q_n's edges driving the sweep, plus derived plans."""

    n: int
    edges: tuple[Edge, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        cube = CubeGraph(self.n)
        got = tuple(e if e[0] < e[1] else (e[1], e[0]) for e in self.edges)
        if len(got) != cube.num_edges or set(got) != set(cube.edges()):
            raise ValueError(f"edge order is not a permutation of Q_{self.n}'s edge set")
        object.__setattr__(self, "edges", got)

    def serialize(self) -> bytes:
        body = ";".join(f"{u}-{v}" for u, v in self.edges)
        return f"{self.n}:{body}".encode()

    def digest(self) -> bytes:
        return hashlib.sha256(self.serialize()).digest()

    def plans(self) -> tuple[_LevelPlan, ...]:
        key = (self.n, self.edges)
        cached = _PLAN_CACHE.get(key)
        if cached is None:
            cached = _build_plans(self.n, self.edges)
            _PLAN_CACHE[key] = cached
        return cached

    @property
    def max_frontier(self) -> int:
        return max(plan.frontier_size for plan in self.plans())

    def frontier_sizes(self) -> tuple[int, ...]:
        return tuple(plan.frontier_size for plan in self.plans())


_PLAN_CACHE: dict[tuple[int, tuple[Edge, ...]], tuple[_LevelPlan, ...]] = {}


def natural_edge_order(n: int) -> EdgeOrder:
    """Default order: vertices in binary order, each emitting its edges to
    lower-numbered neighbors by increasing direction label."""
    cube = CubeGraph(n)
    return EdgeOrder(n, tuple(cube.edges()), name="natural")


def frontier_minimizing_order(n: int) -> EdgeOrder:
    """Default order: vertices enter greedily so the open frontier stays
    narrow, then each emits its edges to already-placed neighbors in
    placement order.  Narrow frontiers mean short mate arrays and
    exponentially smaller state tables than the binary vertex order."""
    size = 1 << n
    placed = [False] * size
    unplaced_deg = [n] * size
    sequence: list[int] = []
    for step in range(size):
        best = best_key = None
        for v in range(size):
            if placed[v]:
                continue
            neighbors = [v ^ (1 << b) for b in range(n)]
            inside = sum(1 for u in neighbors if placed[u])
            if step and not inside:
                continue  # keep the processed region connected
            closes = sum(1 for u in neighbors
                         if placed[u] and unplaced_deg[u] == 1)
            opens = 1 if inside < n else 0
            key = (-closes + opens, -inside, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        placed[best] = True
        sequence.append(best)
        for b in range(n):
            unplaced_deg[best ^ (1 << b)] -= 1
    rank = {v: i for i, v in enumerate(sequence)}
    edges = []
    for v in sequence:
        adjacent = sorted((u for u in (v ^ (1 << b) for b in range(n))
                           if rank[u] < rank[v]), key=rank.get)
        edges.extend((v, u) for u in adjacent)
    return EdgeOrder(n, tuple(edges), name="frontier")


def default_edge_order(n: int) -> EdgeOrder:
    """The order counting uses when none is given.  The greedy narrow
    frontier collapses the state tables for n <= 5; for n = 6 the binary
    vertex order keeps the early levels small, which is what matters for
    partial sweeps, checkpoints, and resumes at that size."""
    return frontier_minimizing_order(n) if n <= 5 else natural_edge_order(n)


def direction_major_order(n: int) -> EdgeOrder:
    """Alternate order grouping edges by direction; wide frontier, only
    sensible for small n.  Used to confirm order independence."""
    cube = CubeGraph(n)
    edges = []
    for b in range(n):
        for u in range(cube.num_vertices):
            if not u >> b & 1:
                edges.append((u, u | 1 << b))
    return EdgeOrder(n, tuple(edges), name="direction-major")


def _build_plans(n: int, edges: tuple[Edge, ...]) -> tuple[_LevelPlan, ...]:
    size = 1 << n
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, (u, v) in enumerate(edges):
        for w in (u, v):
            first.setdefault(w, i)
            last[w] = i

    plans = []
    frontier: list[int] = []
    pos: dict[int, int] = {}
    seen = 0
    for i, (u, v) in enumerate(edges):
        enters = [w for w in (u, v) if first[w] == i]
        for w in enters:
            pos[w] = len(frontier)
            frontier.append(w)
        seen += len(enters)
        f = len(frontier)
        pu, pv = pos[u], pos[v]
        retire = tuple(sorted(pos[w] for w in (u, v) if last[w] == i))
        if retire:
            retired = set(retire)
            keep = tuple(j for j in range(f) if j not in retired)
            remap = bytearray(256)
            remap[SATURATED] = SATURATED
            for newj, oldj in enumerate(keep):
                remap[oldj + 1] = newj + 1
            frontier = [frontier[j] for j in keep]
            pos = {w: j for j, w in enumerate(frontier)}
        else:
            keep = ()
            remap = bytearray(0)
        plans.append(_LevelPlan(
            pu=pu,
            pv=pv,
            pad=b"\x00" * len(enters),
            retire=retire,
            keep=keep,
            code_remap=bytes(remap),
            frontier_size=f,
            closure_allowed=seen == size,
        ))
    if frontier:
        raise AssertionError("frontier not empty after the last edge")
    return tuple(plans)


class _NumPlan(NamedTuple):
    pu: int
    pv: int
    npad: int
    width: int                  # frontier width while the edge is processed
    out_width: int              # width after retirement projection
    retire: np.ndarray          # int64 positions that must be saturated
    keep: np.ndarray            # int64 surviving positions (identity if none retire)
    remap: np.ndarray           # uint8 LUT old code -> new code
    closure_allowed: bool
    key_bits: int               # bits per packed code in the sort key
    key_per_word: int           # codes per 64-bit key word
    key_words: int
    in_width: int               # incoming width (before this level's padding)
    in_bits: int                # incoming key geometry = previous level's out
    in_per: int
    in_words: int


def _key_geometry(w: int) -> tuple[int, int, int]:
    """(bits per code, codes per word, words) packing w codes of 0..w+1."""
    bits = max(1, int(w + 1).bit_length())
    per = 64 // bits
    return bits, per, max(1, (w + per - 1) // per)


def _num_plans(order: EdgeOrder) -> tuple[_NumPlan, ...]:
    key = (order.n, order.edges)
    cached = _NUM_PLAN_CACHE.get(key)
    if cached is not None:
        return cached
    out = []
    identity = np.arange(256, dtype=np.uint8)
    for plan in order.plans():
        w = plan.frontier_size
        if plan.retire:
            keep = np.array(plan.keep, dtype=np.int64)
            remap = np.frombuffer(plan.code_remap, dtype=np.uint8).copy()
        else:
            keep = np.arange(w, dtype=np.int64)
            remap = identity
        wout = len(keep)
        bits, per, words = _key_geometry(wout)
        w_in = w - len(plan.pad)
        in_bits, in_per, in_words = _key_geometry(w_in)
        out.append(_NumPlan(
            pu=plan.pu,
            pv=plan.pv,
            npad=len(plan.pad),
            width=w,
            out_width=wout,
            retire=np.array(plan.retire, dtype=np.int64),
            keep=keep,
            remap=remap,
            closure_allowed=plan.closure_allowed,
            key_bits=bits,
            key_per_word=per,
            key_words=words,
            in_width=w_in,
            in_bits=in_bits,
            in_per=in_per,
            in_words=in_words,
        ))
    result = tuple(out)
    _NUM_PLAN_CACHE[key] = result
    return result


_NUM_PLAN_CACHE: dict[tuple[int, tuple[Edge, ...]], tuple[_NumPlan, ...]] = {}


# -- compiled kernels --------------------------------------------------------
#
# The hot pipeline never materializes byte rows: states travel as packed
# key words (SATURATED recoded to width+1 so numeric key order equals byte
# order) and the kernels decode a parent into a scratch row, branch it, and
# re-pack the children.  Levels where no vertex retires get a fast path:
# every skip child equals its parent, so the sorted input passes through
# untouched (repacked only when new vertices pad the frontier) and only the
# take children need generating and sorting.

_KERNELS: dict[str, object] = {}


def _kernels():
    if not _KERNELS:
        _KERNELS.update(_build_kernels())
    return _KERNELS


def _build_kernels():
    from numba import njit

    @njit(inline="always")
    def decode_row(in_keys, r, scratch, w_in, per, bits, mask, sat):
        # unpack one parent into scratch[0:w_in]; callers pre-zero the pad
        j = 0
        wd = 0
        while j < w_in:
            j1 = j + per
            if j1 > w_in:
                j1 = w_in
            v = in_keys[r, wd]
            span = j1 - j
            for t in range(span):
                sym = (v >> np.uint64(bits * (span - 1 - t))) & mask
                if sym == sat:
                    scratch[j + t] = 0xFF
                else:
                    scratch[j + t] = np.uint8(sym)
            j = j1
            wd += 1

    @njit(inline="always")
    def emit(src, keep, remap, bits, per, satcode, out_keys, m):
        wout = keep.size
        acc = np.uint64(0)
        kw = 0
        filled = 0
        for j in range(wout):
            code = remap[src[keep[j]]]
            rec = satcode if code == 0xFF else np.uint64(code)
            acc = (acc << bits) | rec
            filled += 1
            if filled == per or j == wout - 1:
                out_keys[m, kw] = acc
                acc = np.uint64(0)
                kw += 1
                filled = 0

    @njit(nogil=True, cache=True)
    def expand_cycles(in_keys, counts, in_bits, in_per, w_in, width, pu, pv,
                      retire, keep, remap, closure_allowed, bits_, per_,
                      out_keys, out_counts):
        n_in = in_keys.shape[0]
        in_mask = np.uint64((1 << in_bits) - 1)
        in_sat = np.uint64(w_in + 1)
        bits = np.uint64(bits_)
        per = per_
        satcode = np.uint64(keep.size + 1)
        parent = np.zeros(width, np.uint8)
        child = np.empty(width, np.uint8)
        m = 0
        closed = np.int64(0)
        for r in range(n_in):
            decode_row(in_keys, r, parent, w_in, in_per, in_bits, in_mask, in_sat)
            c = counts[r]
            ok = True
            for t in range(retire.size):
                if parent[retire[t]] != 0xFF:
                    ok = False
                    break
            if ok:
                emit(parent, keep, remap, bits, per, satcode, out_keys, m)
                out_counts[m] = c
                m += 1
            cu = parent[pu]
            cv = parent[pv]
            if cu == 0xFF or cv == 0xFF:
                continue
            if cu == pv + 1:
                if closure_allowed:
                    allsat = True
                    for j in range(width):
                        if j != pu and j != pv and parent[j] != 0xFF:
                            allsat = False
                            break
                    if allsat:
                        closed += c
                continue
            for j in range(width):
                child[j] = parent[j]
            a = pu if cu == 0 else cu - 1
            b = pv if cv == 0 else cv - 1
            child[pu] = 0xFF
            child[pv] = 0xFF
            child[a] = b + 1
            child[b] = a + 1
            ok = True
            for t in range(retire.size):
                if child[retire[t]] != 0xFF:
                    ok = False
                    break
            if ok:
                emit(child, keep, remap, bits, per, satcode, out_keys, m)
                out_counts[m] = c
                m += 1
        return m, closed

    @njit(nogil=True, cache=True)
    def expand_matchings(in_keys, counts, in_bits, in_per, w_in, width, pu, pv,
                         retire, keep, remap, bits_, per_, out_keys, out_counts):
        n_in = in_keys.shape[0]
        in_mask = np.uint64((1 << in_bits) - 1)
        in_sat = np.uint64(w_in + 1)
        bits = np.uint64(bits_)
        per = per_
        satcode = np.uint64(keep.size + 1)
        parent = np.zeros(width, np.uint8)
        child = np.empty(width, np.uint8)
        m = 0
        for r in range(n_in):
            decode_row(in_keys, r, parent, w_in, in_per, in_bits, in_mask, in_sat)
            c = counts[r]
            ok = True
            for t in range(retire.size):
                if parent[retire[t]] != 0xFF:
                    ok = False
                    break
            if ok:
                emit(parent, keep, remap, bits, per, satcode, out_keys, m)
                out_counts[m] = c
                m += 1
            if parent[pu] != 0 or parent[pv] != 0:
                continue
            for j in range(width):
                child[j] = parent[j]
            child[pu] = 0xFF
            child[pv] = 0xFF
            ok = True
            for t in range(retire.size):
                if child[retire[t]] != 0xFF:
                    ok = False
                    break
            if ok:
                emit(child, keep, remap, bits, per, satcode, out_keys, m)
                out_counts[m] = c
                m += 1
        return m, np.int64(0)

    @njit(nogil=True, cache=True)
    def take_cycles(in_keys, counts, in_bits, in_per, w_in, width, pu, pv,
                    keep, remap, closure_allowed, bits_, per_,
                    out_keys, out_counts):
        # no-retire levels: the skip child is the parent, handled outside
        n_in = in_keys.shape[0]
        in_mask = np.uint64((1 << in_bits) - 1)
        in_sat = np.uint64(w_in + 1)
        bits = np.uint64(bits_)
        per = per_
        satcode = np.uint64(keep.size + 1)
        parent = np.zeros(width, np.uint8)
        child = np.empty(width, np.uint8)
        m = 0
        closed = np.int64(0)
        for r in range(n_in):
            decode_row(in_keys, r, parent, w_in, in_per, in_bits, in_mask, in_sat)
            cu = parent[pu]
            cv = parent[pv]
            if cu == 0xFF or cv == 0xFF:
                continue
            c = counts[r]
            if cu == pv + 1:
                if closure_allowed:
                    allsat = True
                    for j in range(width):
                        if j != pu and j != pv and parent[j] != 0xFF:
                            allsat = False
                            break
                    if allsat:
                        closed += c
                continue
            for j in range(width):
                child[j] = parent[j]
            a = pu if cu == 0 else cu - 1
            b = pv if cv == 0 else cv - 1
            child[pu] = 0xFF
            child[pv] = 0xFF
            child[a] = b + 1
            child[b] = a + 1
            emit(child, keep, remap, bits, per, satcode, out_keys, m)
            out_counts[m] = c
            m += 1
        return m, closed

    @njit(nogil=True, cache=True)
    def take_matchings(in_keys, counts, in_bits, in_per, w_in, width, pu, pv,
                       keep, remap, bits_, per_, out_keys, out_counts):
        n_in = in_keys.shape[0]
        in_mask = np.uint64((1 << in_bits) - 1)
        in_sat = np.uint64(w_in + 1)
        bits = np.uint64(bits_)
        per = per_
        satcode = np.uint64(keep.size + 1)
        parent = np.zeros(width, np.uint8)
        m = 0
        for r in range(n_in):
            decode_row(in_keys, r, parent, w_in, in_per, in_bits, in_mask, in_sat)
            if parent[pu] != 0 or parent[pv] != 0:
                continue
            parent[pu] = 0xFF
            parent[pv] = 0xFF
            emit(parent, keep, remap, bits, per, satcode, out_keys, m)
            out_counts[m] = counts[r]
            parent[pu] = 0
            parent[pv] = 0
            m += 1
        return m, np.int64(0)

    @njit(nogil=True, cache=True)
    def repack_keys(in_keys, in_bits, in_per, w_in, width, keep, remap,
                    bits_, per_, out_keys):
        # re-express keys after the frontier grows: same row bytes plus
        # trailing zero codes, so input order and uniqueness carry over
        n_in = in_keys.shape[0]
        in_mask = np.uint64((1 << in_bits) - 1)
        in_sat = np.uint64(w_in + 1)
        bits = np.uint64(bits_)
        per = per_
        satcode = np.uint64(keep.size + 1)
        parent = np.zeros(width, np.uint8)
        for r in range(n_in):
            decode_row(in_keys, r, parent, w_in, in_per, in_bits, in_mask, in_sat)
            emit(parent, keep, remap, bits, per, satcode, out_keys, r)

    @njit(nogil=True, cache=True)
    def unpack_rows(keys, bits, per, w, out_rows):
        mask = np.uint64((1 << bits) - 1)
        sat = np.uint64(w + 1)
        for r in range(keys.shape[0]):
            decode_row(keys, r, out_rows[r], w, per, bits, mask, sat)

    @njit(nogil=True, cache=True)
    def radix_argsort(keys):
        m, k = keys.shape
        order = np.arange(m, dtype=np.int64)
        tmp_order = np.empty(m, np.int64)
        val = np.empty(m, np.uint64)
        tmp_val = np.empty(m, np.uint64)
        hist = np.empty(65536, np.int64)
        for word in range(k - 1, -1, -1):
            mx = np.uint64(0)
            for i in range(m):
                v = keys[order[i], word]
                val[i] = v
                if v > mx:
                    mx = v
            shift = 0
            while shift < 64 and mx >> np.uint64(shift):
                hist[:] = 0
                for i in range(m):
                    hist[(val[i] >> np.uint64(shift)) & np.uint64(0xFFFF)] += 1
                s = np.int64(0)
                for d in range(65536):
                    c = hist[d]
                    hist[d] = s
                    s += c
                for i in range(m):
                    d = (val[i] >> np.uint64(shift)) & np.uint64(0xFFFF)
                    dst = hist[d]
                    hist[d] = dst + 1
                    tmp_val[dst] = val[i]
                    tmp_order[dst] = order[i]
                val, tmp_val = tmp_val, val
                order, tmp_order = tmp_order, order
                shift += 16
        return order

    @njit(nogil=True, cache=True)
    def gather_dedupe(keys, counts, order, out_keys, out_counts):
        # one pass over sort order: write unique keys, sum duplicate counts
        kw = keys.shape[1]
        u = np.int64(-1)
        for i in range(order.size):
            src = order[i]
            if u >= 0:
                same = True
                for wd in range(kw):
                    if out_keys[u, wd] != keys[src, wd]:
                        same = False
                        break
                if same:
                    out_counts[u] += counts[src]
                    continue
            u += 1
            for wd in range(kw):
                out_keys[u, wd] = keys[src, wd]
            out_counts[u] = counts[src]
        return u + 1

    @njit(inline="always")
    def head_less(keys, a, b):
        for wd in range(keys.shape[1]):
            if keys[a, wd] < keys[b, wd]:
                return True
            if keys[a, wd] > keys[b, wd]:
                return False
        return False

    @njit(nogil=True, cache=True)
    def kway_merge(keys, counts, offsets, out_keys, out_counts):
        # linear merge of concatenated sorted runs with duplicate summing;
        # one pass instead of a radix sort over the whole bucket
        kw = keys.shape[1]
        nruns = offsets.size - 1
        heap = np.empty(nruns, np.int64)
        cur = np.empty(nruns, np.int64)
        n = 0
        for run in range(nruns):
            cur[run] = offsets[run]
            if offsets[run] < offsets[run + 1]:
                i = n
                heap[n] = run
                n += 1
                while i > 0:
                    parent = (i - 1) // 2
                    if head_less(keys, cur[heap[i]], cur[heap[parent]]):
                        heap[i], heap[parent] = heap[parent], heap[i]
                        i = parent
                    else:
                        break
        u = np.int64(-1)
        while n > 0:
            run = heap[0]
            src = cur[run]
            if u >= 0:
                same = True
                for wd in range(kw):
                    if out_keys[u, wd] != keys[src, wd]:
                        same = False
                        break
            else:
                same = False
            if same:
                out_counts[u] += counts[src]
            else:
                u += 1
                for wd in range(kw):
                    out_keys[u, wd] = keys[src, wd]
                out_counts[u] = counts[src]
            cur[run] = src + 1
            if cur[run] >= offsets[run + 1]:
                n -= 1
                heap[0] = heap[n]
            i = 0
            while True:
                left = 2 * i + 1
                if left >= n:
                    break
                c = left
                right = left + 1
                if right < n and head_less(keys, cur[heap[right]], cur[heap[left]]):
                    c = right
                if head_less(keys, cur[heap[c]], cur[heap[i]]):
                    heap[i], heap[c] = heap[c], heap[i]
                    i = c
                else:
                    break
        return u + 1

    return {"expand_cycles": expand_cycles,
            "expand_matchings": expand_matchings,
            "take_cycles": take_cycles,
            "take_matchings": take_matchings,
            "repack_keys": repack_keys,
            "unpack_rows": unpack_rows,
            "radix_argsort": radix_argsort,
            "gather_dedupe": gather_dedupe,
            "kway_merge": kway_merge}


def _argsort_keys(keys: np.ndarray) -> np.ndarray:
    try:
        return _kernels()["radix_argsort"](keys)
    except ImportError:
        return np.lexsort(tuple(keys[:, k] for k in range(keys.shape[1] - 1, -1, -1)))


def _pack_width(rows: np.ndarray, w: int, bits: int, per: int, words: int
                ) -> np.ndarray:
    """Packed key words for rows of width w; numeric order equals byte order."""
    keys = np.zeros((len(rows), words), np.uint64)
    shift = np.uint64(bits)
    for j in range(w):
        col = rows[:, j].astype(np.uint64)
        col[rows[:, j] == SATURATED] = w + 1
        keys[:, j // per] = (keys[:, j // per] << shift) | col
    return keys


def _unpack_keys(keys: np.ndarray, w: int, bits: int, per: int) -> np.ndarray:
    """Rows back out of packed key words (decode of _pack_width)."""
    rows = np.zeros((len(keys), w), np.uint8)
    if len(keys) == 0 or w == 0:
        return rows
    keys = np.ascontiguousarray(keys)
    try:
        _kernels()["unpack_rows"](keys, bits, per, w, rows)
        return rows
    except ImportError:
        pass
    mask = np.uint64((1 << bits) - 1)
    for j in range(w):
        wd = j // per
        j1 = min(wd * per + per, w) - 1
        sym = (keys[:, wd] >> np.uint64(bits * (j1 - j))) & mask
        rows[:, j] = np.where(sym == w + 1, SATURATED, sym).astype(np.uint8)
    return rows


def _expand_python(states: np.ndarray, counts: np.ndarray, plan: _NumPlan,
                   matchings: bool) -> tuple[np.ndarray, np.ndarray, int]:
    """Mask-based expansion used once multiplicities outgrow int64."""
    pu, pv = plan.pu, plan.pv
    w = plan.width
    cu = states[:, pu]
    cv = states[:, pv]
    closed = 0
    if matchings:
        take = (cu == 0) & (cv == 0)
    else:
        openm = (cu != SATURATED) & (cv != SATURATED)
        closing = openm & (cu == pv + 1)
        take = openm & ~closing
        if plan.closure_allowed and closing.any():
            rows = states[closing]
            finals = (rows == SATURATED).sum(axis=1) == w - 2
            if finals.any():
                closed = int(sum(counts[closing][finals].tolist()))
    taken = states[take]
    taken_counts = counts[take]
    taken[:, pu] = SATURATED
    taken[:, pv] = SATURATED
    if not matchings and len(taken):
        tcu = cu[take].astype(np.intp)
        tcv = cv[take].astype(np.intp)
        a = np.where(tcu == 0, pu, tcu - 1)
        b = np.where(tcv == 0, pv, tcv - 1)
        r = np.arange(len(taken))
        taken[r, a] = (b + 1).astype(np.uint8)
        taken[r, b] = (a + 1).astype(np.uint8)

    def project(arr, cnt):
        if plan.retire.size:
            ok = (arr[:, plan.retire] == SATURATED).all(axis=1)
            arr = arr[ok]
            cnt = cnt[ok]
            arr = plan.remap[arr[:, plan.keep]]
        return arr, cnt

    skip_rows, skip_counts = project(states, counts)
    take_rows, take_counts = project(taken, taken_counts)
    rows = np.ascontiguousarray(np.concatenate([skip_rows, take_rows]))
    cnts = np.concatenate([skip_counts, take_counts])
    return rows, cnts, closed


def _exact_sum(counts: np.ndarray) -> int:
    """Exact total of an int64 or object multiplicity array."""
    if counts.dtype == object:
        return int(sum(counts.tolist(), 0))
    total = 0
    step = 1 << 24  # bounds the temporaries when counts is memory mapped
    for lo in range(0, len(counts), step):
        part = np.asarray(counts[lo:lo + step])
        for shift in (0, 16, 32, 48):
            total += int(((part >> shift) & 0xFFFF).sum(dtype=np.int64)) << shift
    return total


def _dedupe_keys(keys: np.ndarray, counts: np.ndarray
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Sort keys and merge duplicates, summing their multiplicities."""
    m = len(keys)
    if m == 0:
        return keys, counts
    order = _argsort_keys(keys)
    if counts.dtype != object:
        try:
            uk = np.empty_like(keys)
            uc = np.empty_like(counts)
            mu = _kernels()["gather_dedupe"](keys, counts, order, uk, uc)
            return np.array(uk[:mu]), np.array(uc[:mu])
        except ImportError:
            pass
    sorted_keys = keys[order]
    boundary = np.empty(m, bool)
    boundary[0] = True
    boundary[1:] = (sorted_keys[1:] != sorted_keys[:-1]).any(axis=1)
    starts = np.flatnonzero(boundary)
    merged = np.add.reduceat(counts[order], starts)
    return np.ascontiguousarray(sorted_keys[starts]), merged


def _expand_keys(in_keys: np.ndarray, counts: np.ndarray, plan: _NumPlan,
                 matchings: bool, threads: int, take_only: bool
                 ) -> tuple[np.ndarray, np.ndarray, int]:
    """Run the compiled expansion over packed keys; returns a sorted,
    deduped run of (keys, counts) plus banked closures."""
    kerns = _kernels()
    if matchings:
        kern = kerns["take_matchings" if take_only else "expand_matchings"]
    else:
        kern = kerns["take_cycles" if take_only else "expand_cycles"]
    factor = 1 if take_only else 2
    n_in = len(in_keys)

    def run_chunk(lo: int, hi: int):
        size = factor * (hi - lo)
        out_keys = np.zeros((size, plan.key_words), np.uint64)
        out_counts = np.empty(size, np.int64)
        base = (np.ascontiguousarray(in_keys[lo:hi]), counts[lo:hi],
                plan.in_bits, plan.in_per, plan.in_width, plan.width,
                plan.pu, plan.pv)
        tail = () if take_only else (plan.retire,)
        closure = () if matchings else (plan.closure_allowed,)
        m, closed = kern(*base, *tail, plan.keep, plan.remap, *closure,
                         plan.key_bits, plan.key_per_word,
                         out_keys, out_counts)
        return out_keys[:m], out_counts[:m], int(closed)

    if threads > 1 and n_in > 65536:
        chunk = (n_in + threads - 1) // threads
        bounds = [(i, min(i + chunk, n_in)) for i in range(0, n_in, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pieces = list(pool.map(lambda b: run_chunk(*b), bounds))
        keys = np.concatenate([p[0] for p in pieces])
        cnts = np.concatenate([p[1] for p in pieces])
        closed = sum(p[2] for p in pieces)
        del pieces
    else:
        keys, cnts, closed = run_chunk(0, n_in)
    keys, cnts = _dedupe_keys(keys, cnts)
    return keys, cnts, closed


def _repack_chunk(in_keys: np.ndarray, plan: _NumPlan) -> np.ndarray:
    out = np.zeros((len(in_keys), plan.key_words), np.uint64)
    _kernels()["repack_keys"](
        np.ascontiguousarray(in_keys), plan.in_bits, plan.in_per,
        plan.in_width, plan.width, plan.keep, plan.remap,
        plan.key_bits, plan.key_per_word, out)
    return out


def _advance_once(states: np.ndarray, counts: np.ndarray, plan: _NumPlan,
                  matchings: bool, threads: int
                  ) -> tuple[np.ndarray, np.ndarray, int]:
    """Push a table of byte rows through one edge; returns (keys, counts,
    closed), merged and sorted by row bytes."""
    if states.shape[1] != plan.in_width:
        raise AssertionError("state width does not match the level plan")
    if counts.dtype == object:
        padded = states
        if plan.npad:
            padded = np.concatenate(
                [states, np.zeros((len(states), plan.npad), np.uint8)], axis=1)
        rows, cnts, closed = _expand_python(padded, counts, plan, matchings)
        keys = _pack_width(rows, plan.out_width, plan.key_bits,
                           plan.key_per_word, plan.key_words)
        keys, cnts = _dedupe_keys(keys, cnts)
        return keys, cnts, closed
    in_keys = _pack_width(states, plan.in_width, plan.in_bits,
                          plan.in_per, plan.in_words)
    return _expand_keys(in_keys, counts, plan, matchings, threads,
                        take_only=False)


def _available_memory() -> int:
    try:
        return os.sysconf("SC_AVPHYS_PAGES") * os.sysconf("SC_PAGE_SIZE")
    except (ValueError, OSError, AttributeError):
        return 8 << 30


@dataclass
class _Part:
    """One sorted, internally deduped run of a generation's state table.

    Rows live as packed key words plus multiplicities; arrays are RAM
    ndarrays or read-only memmaps over spilled files, and `paths` lists
    files to unlink once the part is consumed."""

    n: int
    keys: np.ndarray
    counts: np.ndarray
    paths: tuple[Path, ...] = ()

    def cleanup(self) -> None:
        self.keys = np.zeros((0, 1), np.uint64)
        self.counts = np.zeros(0, np.int64)
        for path in self.paths:
            try:
                path.unlink()
            except OSError:
                pass
        self.paths = ()


def _empty_part(plan: _NumPlan) -> _Part:
    return _Part(n=0, keys=np.zeros((0, plan.key_words), np.uint64),
                 counts=np.zeros(0, np.int64))


def _concat_counts(counts: list[np.ndarray]) -> np.ndarray:
    if len(counts) == 1:
        return counts[0]
    if any(c.dtype == object for c in counts):
        return np.concatenate([np.asarray(c, dtype=object) for c in counts])
    out = np.concatenate(counts)
    if _exact_sum(out) > _INT64_TOTAL_LIMIT:
        out = out.astype(object)
    return out


def _spill_part(part: _Part, spill_dir: Path, tag: str) -> _Part:
    """Write one run to disk and hand back a memmap-backed part."""
    if part.n == 0 or part.paths or part.counts.dtype == object:
        # already on disk, or exact Python ints (always resident)
        return part
    n, kwords = part.keys.shape
    paths = (spill_dir / f"{tag}.keys", spill_dir / f"{tag}.counts")
    np.ascontiguousarray(part.keys).tofile(paths[0])
    np.ascontiguousarray(part.counts).tofile(paths[1])
    return _Part(
        n=n,
        keys=np.memmap(paths[0], dtype=np.uint64, mode="r", shape=(n, kwords)),
        counts=np.memmap(paths[1], dtype=np.int64, mode="r", shape=(n,)),
        paths=paths)


def _promote_part(part: _Part) -> _Part:
    """Bring a part fully into RAM with exact Python-int counts."""
    out = _Part(n=part.n, keys=np.array(part.keys),
                counts=np.array(part.counts).astype(object))
    part.cleanup()
    return out


def _bucket_splitters(parts: list[_Part], nbuckets: int) -> np.ndarray:
    """Ascending leading-key-word boundaries aiming at even bucket sizes."""
    if nbuckets <= 1:
        return np.zeros(0, np.uint64)
    samples = []
    for p in parts:
        step = max(1, p.n // 64)
        samples.append(np.asarray(p.keys[::step, 0]))
    values = np.unique(np.concatenate(samples))
    if len(values) <= 1:
        return np.zeros(0, np.uint64)
    take = min(nbuckets - 1, len(values) - 1)
    idx = np.linspace(0, len(values) - 1, take + 2, dtype=np.int64)[1:-1]
    return np.unique(values[idx])


class _RunWriter:
    """Accumulates merged buckets into the next generation's single run."""

    def __init__(self, spill_dir: Path, tag: str, key_words: int, use_disk: bool):
        self.key_words = key_words
        self.use_disk = use_disk
        self.n = 0
        self.keys_acc: list[np.ndarray] = []
        self.counts_acc: list[np.ndarray] = []
        if use_disk:
            self.paths = (spill_dir / f"{tag}.keys",
                          spill_dir / f"{tag}.counts")
            self.files = tuple(open(p, "wb") for p in self.paths)

    def append(self, keys: np.ndarray, counts: np.ndarray) -> None:
        self.n += len(keys)
        if self.use_disk:
            np.ascontiguousarray(keys).tofile(self.files[0])
            np.ascontiguousarray(counts).tofile(self.files[1])
        else:
            self.keys_acc.append(keys)
            self.counts_acc.append(counts)

    def finish(self) -> _Part:
        if not self.use_disk:
            if not self.keys_acc:
                return _Part(n=0,
                             keys=np.zeros((0, self.key_words), np.uint64),
                             counts=np.zeros(0, np.int64))
            keys = (self.keys_acc[0] if len(self.keys_acc) == 1
                    else np.concatenate(self.keys_acc))
            return _Part(n=self.n, keys=keys,
                         counts=_concat_counts(self.counts_acc))
        for handle in self.files:
            handle.close()
        if self.n == 0:
            for path in self.paths:
                path.unlink()
            return _Part(n=0, keys=np.zeros((0, self.key_words), np.uint64),
                         counts=np.zeros(0, np.int64))
        return _Part(
            n=self.n,
            keys=np.memmap(self.paths[0], dtype=np.uint64, mode="r",
                           shape=(self.n, self.key_words)),
            counts=np.memmap(self.paths[1], dtype=np.int64, mode="r",
                             shape=(self.n,)),
            paths=self.paths)


def _merge_bucket(kk: list[np.ndarray], cc: list[np.ndarray]
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Combine sorted key runs covering one key range, summing duplicates."""
    keys = np.ascontiguousarray(np.concatenate(kk))
    counts = _concat_counts([np.asarray(c) for c in cc])
    if counts.dtype != object:
        try:
            kerns = _kernels()
        except ImportError:
            kerns = None
        if kerns is not None:
            offsets = np.zeros(len(kk) + 1, np.int64)
            np.cumsum([len(k) for k in kk], out=offsets[1:])
            uk = np.empty_like(keys)
            uc = np.empty_like(counts)
            mu = kerns["kway_merge"](keys, counts, offsets, uk, uc)
            return uk[:mu], uc[:mu]
    return _dedupe_keys(keys, counts)


def _merge_parts(parts: list[_Part], plan: _NumPlan, spill_dir: Path,
                 ram_budget: int, bucket_rows: int, tag: str) -> _Part:
    """Merge sorted runs into one globally deduped generation.

    Buckets by the leading (most significant) key word, so bucket order is
    global key order; each bucket merges independently and the output
    streams to disk when it would not fit the memory budget."""
    parts = [p for p in parts if p.n]
    if not parts:
        return _empty_part(plan)
    if len(parts) == 1:
        p = parts[0]
        return _Part(n=p.n, keys=p.keys, counts=p.counts, paths=p.paths)

    total = sum(p.n for p in parts)
    object_mode = any(p.counts.dtype == object for p in parts)
    splitters = _bucket_splitters(parts, -(-total // max(bucket_rows, 1)))
    cuts = [np.searchsorted(p.keys[:, 0], splitters, side="left")
            for p in parts]
    use_disk = (not object_mode
                and total * (8 * plan.key_words + 8) > ram_budget)
    writer = _RunWriter(spill_dir, tag, plan.key_words, use_disk)
    for b in range(len(splitters) + 1):
        kk: list[np.ndarray] = []
        cc: list[np.ndarray] = []
        for p, cut in zip(parts, cuts):
            lo = 0 if b == 0 else int(cut[b - 1])
            hi = p.n if b == len(splitters) else int(cut[b])
            if hi > lo:
                kk.append(np.asarray(p.keys[lo:hi]))
                cc.append(np.asarray(p.counts[lo:hi]))
        if not kk:
            continue
        if len(kk) == 1:
            writer.append(kk[0], cc[0])
        else:
            keys, counts = _merge_bucket(kk, cc)
            writer.append(keys, counts)
    out = writer.finish()
    for p in parts:
        p.cleanup()
    return out


class CountRun:
    """A resumable counting sweep; one instance per (n, task, order).

    ``advance_level`` is the raw single-edge step.  ``run`` drives the sweep
    to completion and, when no memory budget is set, bounds peak memory by
    advancing each generation in sorted chunks, spilling oversized output to
    disk as sorted runs, and re-merging the runs into one globally deduped
    table per level.
    """

    def __init__(self, n: int, task: str, *, order: EdgeOrder | None = None,
                 threads: int = 1, memory_limit: int | None = None,
                 checkpoint_dir: Path | str | None = None):
        if task not in _TASKS:
            raise ValueError(f"unknown task {task!r}")
        min_n = 2 if task == TASK_HAMILTONIAN else 1
        if n < min_n:
            raise ValueError(f"{task} counting needs n >= {min_n}, got {n}")
        self.n = n
        self.task = task
        self.order = order if order is not None else default_edge_order(n)
        if self.order.n != n:
            raise ValueError("edge order dimension mismatch")
        self.threads = max(1, threads)
        self.memory_limit = memory_limit
        self.checkpoint_dir = Path(checkpoint_dir) if checkpoint_dir else None
        self.level = 0
        self.states = np.zeros((1, 0), np.uint8)
        self.counts = np.ones(1, np.int64)
        self.total = 0
        self._match_total: int | None = None
        self._plans = _num_plans(self.order)

    # -- run state ---------------------------------------------------------

    @property
    def matchings(self) -> bool:
        return self.task == TASK_MATCHINGS

    @property
    def total_levels(self) -> int:
        return len(self._plans)

    @property
    def finished(self) -> bool:
        return self.level >= self.total_levels

    @property
    def state_count(self) -> int:
        return len(self.states)

    @property
    def result(self) -> int:
        if not self.finished:
            raise RuntimeError("run has not finished")
        if self.matchings:
            if self._match_total is None:
                self._match_total = _exact_sum(self.counts)
            return self._match_total
        return self.total

    def items(self) -> Iterator[tuple[bytes, int]]:
        for row, count in zip(self.states, self.counts):
            yield row.tobytes(), int(count)

    def as_dict(self) -> dict[bytes, int]:
        return dict(self.items())

    def config_digest(self) -> bytes:
        return hashlib.sha256(self.order.serialize() + b"|" + self.task.encode()).digest()

    def estimated_table_bytes(self) -> int:
        # resident table plus the sort keys alive during a merge; one level
        # step transiently needs a few times this
        return len(self.states) * (self.states.shape[1] + 24)

    def table_digest(self) -> str:
        """Hash of the full run state; equal digests mean identical runs.

        Multiplicities are hashed by value, so a table stored as int64 and
        the same table stored as Python ints digest identically.
        """
        h = hashlib.sha256()
        width = self.states.shape[1]
        h.update(struct.pack("<IIIQ", self.n, self.level, width, len(self.states)))
        h.update(_int_bytes(self.total))
        h.update(np.ascontiguousarray(self.states).tobytes())
        if self.counts.dtype == object and any(c >= 1 << 63 for c in self.counts.tolist()):
            h.update(",".join(str(c) for c in self.counts.tolist()).encode())
        else:
            h.update(self.counts.astype(">i8").tobytes())
        return h.hexdigest()

    # -- sweeping ----------------------------------------------------------

    def advance_level(self) -> None:
        """Process one edge; may raise MemoryBudgetExceeded (checkpointing first)."""
        if self.finished:
            raise RuntimeError("run already finished")
        plan = self._plans[self.level]
        keys, self.counts, closed = _advance_once(
            self.states, self.counts, plan, self.matchings, self.threads)
        self.states = _unpack_keys(keys, plan.out_width, plan.key_bits,
                                   plan.key_per_word)
        self.total += closed
        self.level += 1
        if (self.counts.dtype != object
                and _exact_sum(self.counts) > _INT64_TOTAL_LIMIT):
            self.counts = self.counts.astype(object)
        if self.memory_limit is not None and self.estimated_table_bytes() > self.memory_limit:
            path = None
            if self.checkpoint_dir is not None:
                path = self.save_checkpoint()
            raise MemoryBudgetExceeded(
                f"state table (~{self.estimated_table_bytes()} bytes, "
                f"{len(self.states)} states) exceeds the {self.memory_limit} byte budget "
                f"at level {self.level}/{self.total_levels}",
                checkpoint_path=path)

    def advance_to(self, level: int) -> None:
        while self.level < level and not self.finished:
            self.advance_level()

    def _chunk_row_limit(self, plan: _NumPlan) -> int:
        override = os.environ.get(_SPLIT_ROWS_ENV)
        if override is not None:
            value = int(override)
            return value if value > 0 else 1 << 62
        # transient working set per input row while one chunk advances: the
        # resident input slice, candidate keys and multiplicities, and the
        # sort and dedupe buffers; measured against memory available right
        # now so the budget adapts as resident parts accumulate
        per_row = 8 * plan.in_words + 3 * (8 * plan.key_words + 8) + 48
        return max(1 << 20, int(_available_memory() * 0.35) // per_row)

    @staticmethod
    def _resident_row_budget(plan: _NumPlan, fraction: float) -> int:
        # resident bytes per deduped run row: key words plus multiplicity
        per_row = 8 * plan.key_words + 8
        return max(1 << 20, int(_available_memory() * fraction) // per_row)

    def run(self) -> int:
        """Finish the sweep.  With a memory budget set, advance level by
        level and let the budget abort with a checkpoint.  Without one, the
        sweep bounds its own working set: each generation advances in sorted
        chunks, oversized output collections spill to disk as sorted runs,
        and a range-partitioned merge rebuilds one globally deduped table
        per level, so slicing never changes a result.  Levels that retire
        no vertex reuse the sorted input as the skip-side run outright."""
        if self.memory_limit is not None:
            while not self.finished:
                self.advance_level()
            return self.result
        if self.finished:
            return self.result

        trace = bool(os.environ.get("GRAYCENSUS_TRACE"))
        spill_root = tempfile.TemporaryDirectory(
            prefix="graycensus-spill-", dir=os.environ.get(_SPILL_DIR_ENV))
        spill_dir = Path(spill_root.name)
        first = self._plans[self.level]
        if self.states.shape[1] != first.in_width:
            raise AssertionError("state width does not match the level plan")
        gen = _Part(n=len(self.states),
                    keys=_pack_width(self.states, first.in_width,
                                     first.in_bits, first.in_per,
                                     first.in_words),
                    counts=self.counts)
        self.states = np.zeros((0, first.in_width), np.uint8)
        self.counts = np.zeros(0, np.int64)
        seq = 0
        try:
            while self.level < self.total_levels:
                t0 = time.monotonic()
                plan = self._plans[self.level]
                limit = self._chunk_row_limit(plan)
                flush_rows = self._resident_row_budget(plan, 0.25)
                objects = gen.counts.dtype == object
                fast = plan.retire.size == 0 and not objects
                parts: list[_Part] = []
                if fast and plan.npad == 0:
                    # skip children equal their parents and the key
                    # geometry is unchanged: the whole input generation is
                    # the skip-side run, with zero work
                    parts.append(_Part(n=gen.n, keys=gen.keys,
                                       counts=gen.counts))
                ram_rows = 0
                for lo in range(0, gen.n, limit):
                    ck = gen.keys[lo:lo + limit]
                    cc = gen.counts[lo:lo + limit]
                    if gen.paths:
                        # pull the chunk off disk; the kernels want plain
                        # resident arrays
                        ck = np.array(ck)
                        cc = np.array(cc)
                    else:
                        ck = np.ascontiguousarray(ck)
                    if objects:
                        rows = _unpack_keys(ck, plan.in_width, plan.in_bits,
                                            plan.in_per)
                        keys, counts, closed = _advance_once(
                            rows, cc, plan, self.matchings, self.threads)
                    elif fast:
                        if plan.npad:
                            skip = _repack_chunk(ck, plan)
                            parts.append(_Part(n=len(skip), keys=skip,
                                               counts=cc))
                            ram_rows += len(skip)
                        keys, counts, closed = _expand_keys(
                            ck, cc, plan, self.matchings, self.threads,
                            take_only=True)
                    else:
                        keys, counts, closed = _expand_keys(
                            ck, cc, plan, self.matchings, self.threads,
                            take_only=False)
                    self.total += closed
                    if len(keys):
                        parts.append(_Part(n=len(keys), keys=keys,
                                           counts=counts))
                        ram_rows += len(keys)
                    if ram_rows > flush_rows:
                        for idx, p in enumerate(parts):
                            if p.keys is gen.keys:
                                continue  # pass-through run stays shared
                            parts[idx] = _spill_part(
                                p, spill_dir, f"L{self.level:03d}s{seq}")
                            seq += 1
                        ram_rows = 0
                # int64 stays exact only while the generation total is
                # provably clear of overflow; promote everything once the
                # whole generation crosses the threshold
                if parts and all(p.counts.dtype != object for p in parts):
                    if sum(_exact_sum(p.counts) for p in parts) > _INT64_TOTAL_LIMIT:
                        parts = [_promote_part(p) for p in parts]
                merged = _merge_parts(
                    parts, plan, spill_dir,
                    ram_budget=int(_available_memory() * 0.4),
                    bucket_rows=self._resident_row_budget(plan, 0.12),
                    tag=f"L{self.level:03d}m")
                gen.cleanup()
                gen = merged
                self.level += 1
                if trace:
                    where = "disk" if gen.paths else "ram"
                    print(f"level {self.level}/{self.total_levels}: "
                          f"{gen.n} rows ({where}), width {plan.out_width}, "
                          f"chunk {limit}, {time.monotonic() - t0:.1f}s",
                          file=sys.stderr, flush=True)
            last = self._plans[-1]
            self.states = _unpack_keys(np.array(gen.keys), last.out_width,
                                       last.key_bits, last.key_per_word)
            self.counts = np.array(gen.counts)
            gen.cleanup()
        finally:
            spill_root.cleanup()
        return self.result

    # -- checkpointing -----------------------------------------------------

    def default_checkpoint_path(self) -> Path:
        base = self.checkpoint_dir if self.checkpoint_dir is not None else Path.cwd()
        return base / f"graycensus-{self.task}-n{self.n}-level{self.level:04d}.gckp"

    def save_checkpoint(self, path: Path | str | None = None) -> Path:
        target = Path(path) if path is not None else self.default_checkpoint_path()
        target.parent.mkdir(parents=True, exist_ok=True)
        digest = hashlib.sha256()
        with open(target, "wb") as fh:
            for chunk in self._checkpoint_chunks():
                digest.update(chunk)
                fh.write(chunk)
            fh.write(digest.digest())
        return target

    def _checkpoint_chunks(self) -> Iterator[bytes]:
        yield b"".join([CHECKPOINT_MAGIC,
                        struct.pack("<II", CHECKPOINT_VERSION, self.n),
                        self.config_digest(),
                        struct.pack("<IQ", self.level, len(self.states)),
                        _blob(_int_bytes(self.total))])
        parts: list[bytes] = []
        for idx in range(len(self.states)):
            parts.append(_blob(self.states[idx].tobytes()))
            parts.append(_blob(_int_bytes(int(self.counts[idx]))))
            if len(parts) >= 2_000_000:
                yield b"".join(parts)
                parts = []
        if parts:
            yield b"".join(parts)

    @classmethod
    def resume(cls, path: Path | str, *, order: EdgeOrder | None = None,
               threads: int = 1, memory_limit: int | None = None,
               checkpoint_dir: Path | str | None = None,
               expect_n: int | None = None, expect_task: str | None = None) -> "CountRun":
        raw = Path(path).read_bytes()
        if len(raw) < 4 + 8 + 32 + 12 + 32:
            raise CheckpointCorrupt(f"{path}: truncated checkpoint")
        body, digest = raw[:-32], raw[-32:]
        if hashlib.sha256(body).digest() != digest:
            raise CheckpointCorrupt(f"{path}: content digest mismatch")
        view = memoryview(body)
        if view[:4] != CHECKPOINT_MAGIC:
            raise CheckpointCorrupt(f"{path}: bad magic")
        version, n = struct.unpack_from("<II", view, 4)
        if version != CHECKPOINT_VERSION:
            raise CheckpointMismatch(f"{path}: format version {version}, expected {CHECKPOINT_VERSION}")
        if expect_n is not None and n != expect_n:
            raise CheckpointMismatch(f"{path}: checkpoint is for n={n}, expected n={expect_n}")
        config_hash = bytes(view[12:44])
        level, count = struct.unpack_from("<IQ", view, 44)
        offset = 56
        total, offset = _read_blob_int(view, offset, path)

        # identify the task (and, when none is given, the edge order) by
        # matching the stored config hash against the known configurations
        candidates = [expect_task] if expect_task else list(_TASKS)
        if order is not None:
            orders = [order]
        else:
            orders = [default_edge_order(n), natural_edge_order(n),
                      frontier_minimizing_order(n), direction_major_order(n)]
        run = None
        for task in candidates:
            for trial_order in orders:
                try:
                    trial = cls(n, task, order=trial_order, threads=threads,
                                memory_limit=memory_limit,
                                checkpoint_dir=checkpoint_dir)
                except ValueError:
                    continue
                if trial.config_digest() == config_hash:
                    run = trial
                    break
            if run is not None:
                break
        if run is None:
            raise CheckpointMismatch(
                f"{path}: edge-order/task hash does not match this configuration")

        width = -1
        row_chunks = []
        values = []
        for _ in range(count):
            state, offset = _read_blob(view, offset, path)
            value, offset = _read_blob_int(view, offset, path)
            if width < 0:
                width = len(state)
            elif len(state) != width:
                raise CheckpointCorrupt(f"{path}: inconsistent state widths")
            row_chunks.append(state)
            values.append(value)
        if offset != len(body):
            raise CheckpointCorrupt(f"{path}: trailing bytes after state records")
        if width < 0:
            width = 0
        run.level = level
        run.states = np.frombuffer(b"".join(row_chunks), np.uint8).reshape(count, width).copy()
        if values and max(values) >= 1 << 63:
            run.counts = np.array(values, dtype=object)
        else:
            run.counts = np.array(values, dtype=np.int64)
            if _exact_sum(run.counts) > _INT64_TOTAL_LIMIT:
                run.counts = run.counts.astype(object)
        run.total = total
        return run


def _int_bytes(value: int) -> bytes:
    if value < 0:
        raise ValueError("counts are non-negative")
    return value.to_bytes((value.bit_length() + 7) // 8, "big") if value else b""


def _blob(data: bytes) -> bytes:
    return struct.pack("<I", len(data)) + data


def _read_blob(view: memoryview, offset: int, path) -> tuple[bytes, int]:
    if offset + 4 > len(view):
        raise CheckpointCorrupt(f"{path}: truncated record")
    (length,) = struct.unpack_from("<I", view, offset)
    offset += 4
    if offset + length > len(view):
        raise CheckpointCorrupt(f"{path}: truncated record")
    return bytes(view[offset:offset + length]), offset + length


def _read_blob_int(view: memoryview, offset: int, path) -> tuple[int, int]:
    data, offset = _read_blob(view, offset, path)
    return int.from_bytes(data, "big"), offset


# -- public counting surface ------------------------------------------------


def count_hamiltonian_cycles(n: int, *, threads: int = 1, memory_limit: int | None = None,
                             checkpoint_dir: Path | str | None = None,
                             order: EdgeOrder | None = None) -> int:
    """The number of undirected Hamiltonian cycles of Q_n, exactly."""
    run = CountRun(n, TASK_HAMILTONIAN, order=order, threads=threads,
                   memory_limit=memory_limit, checkpoint_dir=checkpoint_dir)
    return run.run()


def count_perfect_matchings(n: int, *, threads: int = 1, memory_limit: int | None = None,
                            checkpoint_dir: Path | str | None = None,
                            order: EdgeOrder | None = None) -> int:
    """The number of perfect matchings of Q_n, exactly."""
    run = CountRun(n, TASK_MATCHINGS, order=order, threads=threads,
                   memory_limit=memory_limit, checkpoint_dir=checkpoint_dir)
    return run.run()


def directed_count(h: int) -> int:
    """Directed cycles from undirected ones: each cycle has two orientations."""
    if h < 0:
        raise ValueError("cycle count cannot be negative")
    return 2 * h


def equivalence_count(h: int, n: int) -> int:
    """Classes of cycles under bit relabeling: h / (n!/2), which must divide."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    half = factorial(n) // 2
    if h % half:
        raise ArithmeticError(
            f"{h} is not a multiple of {n}!/2 = {half}; the cycle count must be wrong")
    return h // half


def save_checkpoint(run: CountRun, path: Path | str | None = None) -> Path:
    return run.save_checkpoint(path)


def resume_from_checkpoint(path: Path | str, **options) -> CountRun:
    return CountRun.resume(path, **options)
