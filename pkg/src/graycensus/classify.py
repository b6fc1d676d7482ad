"""Symmetry classification of cyclic Gray codes on the n-cube.

A Hamiltonian cycle, anchored at vertex 0 and read in one direction, is a
delta sequence of 2^n direction labels.  Two cycles are equivalent when some
cube automorphism (coordinate permutation composed with coordinate flips)
maps one edge set onto the other.  In delta space the whole symmetry group
acts simply: flips translate the walk (a rotation of the sequence), start
vertex changes are rotations, traversal reversal reverses the sequence, and
coordinate permutations relabel the symbols.  The lexicographic minimum of a
fixed sequence over all symbol relabelings is its first-occurrence
relabeling (first new symbol becomes 1, next new symbol 2, ...), so the
canonical form of a cycle is the minimum of the first-occurrence relabeling
over all rotations of both traversal directions.

Enumeration visits exactly the prefix-canonical sequences (first occurrences
of direction labels in increasing order), one per relabeling class, so the
visit count is 2 * H_n / n!.  An orbit is counted at its canonical
representative; the orbit size follows from the number m of distinct
relabeled rotations/reversals: each of the m residual variants is realized
by n! / 1 relabelings and the 2 * 2^n traversals double-cover the edge
sets, giving m * n! / 2 distinct cycles per orbit.  The n <= 4 path is pure
Python; n = 5 (15.1 million visits) runs in a compiled depth-first kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional

from .cube import (
    CycleEdgeSet,
    DeltaSequence,
    SignedPermutation,
    automorphism_group_order,
    validate_delta,
)

MAX_ENUMERATION_DIMENSION = 5
MAX_BRUTE_FORCE_DIMENSION = 4

# Which equivalence reproduces the published orbit counts: cycles are
# undirected edge sets, the group is the full automorphism group of the
# cube, and traversal direction / start vertex carry no information.
ORBIT_CONVENTION = (
    "undirected cycles under the full cube automorphism group "
    "(coordinate permutations and flips); traversal direction and "
    "start vertex are not distinguished"
)

WeightSpectrum = tuple[int, ...]
CanonicalCycle = DeltaSequence


def _check_enum_dimension(n: int) -> None:
    if not 2 <= n <= MAX_ENUMERATION_DIMENSION:
        raise ValueError(
            f"dimension {n} refused: classification supports 2 <= n <= "
            f"{MAX_ENUMERATION_DIMENSION}"
        )


def weight_spectrum(d: DeltaSequence) -> WeightSpectrum:
    """Sorted per-direction edge counts of a valid cycle."""
    if not validate_delta(d):
        raise ValueError(f"invalid delta sequence for Q_{d.n}: {d.to_string()}")
    return tuple(sorted(d.direction_counts()))


def _first_occurrence_relabel(seq: tuple[int, ...], n: int) -> tuple[int, ...]:
    # Lex-least image over all symbol relabelings: first new symbol -> 1, ...
    relabel = [0] * (n + 1)
    nxt = 1
    out = []
    for d in seq:
        r = relabel[d]
        if r == 0:
            relabel[d] = r = nxt
            nxt += 1
        out.append(r)
    return tuple(out)


def _variants(seq: tuple[int, ...], n: int) -> Iterator[tuple[int, ...]]:
    # All 2 * len(seq) residual images: rotations of both traversal
    # directions, each re-minimized over relabelings.
    size = len(seq)
    fwd = seq + seq
    rev = seq[::-1] + seq[::-1]
    for k in range(size):
        yield _first_occurrence_relabel(fwd[k : k + size], n)
    for k in range(size):
        yield _first_occurrence_relabel(rev[k : k + size], n)


def canonical_form(c: CycleEdgeSet | DeltaSequence) -> CanonicalCycle:
    """Lexicographically least delta sequence over the full symmetry set.

    The minimum ranges over every automorphism image, both traversal
    directions, and all start vertices.  Flips translate the anchored walk,
    so rotations of the two traversals already realize every image up to
    relabeling, and the relabeling minimum is the first-occurrence form.
    """
    if isinstance(c, DeltaSequence):
        if not validate_delta(c):
            raise ValueError(f"invalid delta sequence for Q_{c.n}: {c.to_string()}")
        n, seq = c.n, c.deltas
    else:
        from .cube import edge_set_to_deltas

        d = min(edge_set_to_deltas(c), key=lambda x: x.deltas)
        n, seq = d.n, d.deltas
    best = min(_variants(seq, n))
    return DeltaSequence(n, best)


def enumerate_canonical_prefix_cycles(
    n: int, visitor: Optional[Callable[[DeltaSequence], None]] = None
) -> int:
    """Visit every cycle delta whose direction labels first appear in
    increasing order, exactly once; return the visit count (2 * H_n / n!).

    With a visitor, runs in pure Python (slow for n = 5: 15.1 million
    visits); without one, n = 5 uses the compiled counting kernel.
    """
    _check_enum_dimension(n)
    if visitor is None and n == MAX_ENUMERATION_DIMENSION:
        visits, _orbits, _reps, _sizes = _classify_compiled(n, classify=False)
        return visits
    return _enumerate_python(n, visitor)


def _enumerate_python(n: int, visitor) -> int:
    size = 1 << n
    count = 0
    delta: list[int] = []

    def rec(v: int, maxdir: int, depth: int, visited: int) -> None:
        nonlocal count
        if depth == size - 1:
            # Close back to 0: the head must be a neighbor of 0.  The
            # closing label is never a first occurrence (every direction
            # flips an even number of times on a closed walk).
            if v and v & (v - 1) == 0:
                delta.append(v.bit_length())
                count += 1
                if visitor is not None:
                    visitor(DeltaSequence(n, tuple(delta)))
                delta.pop()
            return
        limit = maxdir + 1 if maxdir < n else n
        for d in range(1, limit + 1):
            w = v ^ (1 << (d - 1))
            if visited >> w & 1 or w == 0:
                continue
            delta.append(d)
            rec(w, maxdir if d <= maxdir else d, depth + 1, visited | 1 << w)
            delta.pop()

    rec(0, 0, 0, 1)
    return count


@dataclass(frozen=True)
class OrbitRecord:
    """One automorphism orbit: canonical representative, size, spectrum."""

    canonical: DeltaSequence
    size: int
    spectrum: WeightSpectrum


@dataclass(frozen=True)
class OrbitSummary:
    """All cycle orbits of Q_n under the automorphism group."""

    n: int
    orbits: tuple[OrbitRecord, ...]
    convention: str = ORBIT_CONVENTION

    @property
    def count(self) -> int:
        return len(self.orbits)

    @property
    def total_cycles(self) -> int:
        return sum(o.size for o in self.orbits)

    def weight_class_counts(self) -> dict[WeightSpectrum, int]:
        """Cycles per realized weight spectrum; values sum to H_n."""
        out: dict[WeightSpectrum, int] = {}
        for o in self.orbits:
            out[o.spectrum] = out.get(o.spectrum, 0) + o.size
        return out

    @property
    def weight_count(self) -> int:
        return len(self.weight_class_counts())

    def lines(self) -> list[str]:
        """One line per orbit, sorted lexicographically."""
        return [
            f"{o.canonical.to_string()} {o.size} "
            + "+".join(str(k) for k in o.spectrum)
            for o in self.orbits
        ]

    def summary(self) -> dict:
        return {
            "n": self.n,
            "aut_count": self.count,
            "weight_count": self.weight_count,
            "total_cycles": self.total_cycles,
        }


def _orbit_records(
    n: int, reps: list[tuple[int, ...]], variant_counts: list[int]
) -> tuple[OrbitRecord, ...]:
    half_group = math.factorial(n) // 2 if n > 1 else 1
    records = []
    for seq, m in zip(reps, variant_counts):
        d = DeltaSequence(n, seq)
        counts = [0] * n
        for x in seq:
            counts[x - 1] += 1
        records.append(
            OrbitRecord(
                canonical=d, size=m * half_group, spectrum=tuple(sorted(counts))
            )
        )
    records.sort(key=lambda r: r.canonical.deltas)
    return tuple(records)


def _classify_python(n: int) -> OrbitSummary:
    reps: list[tuple[int, ...]] = []
    sizes: list[int] = []

    def visit(d: DeltaSequence) -> None:
        vs = set(_variants(d.deltas, n))
        if d.deltas == min(vs):
            reps.append(d.deltas)
            sizes.append(len(vs))

    _enumerate_python(n, visit)
    return OrbitSummary(n=n, orbits=_orbit_records(n, reps, sizes))


@lru_cache(maxsize=None)
def classify_automorphism(n: int) -> OrbitSummary:
    """All cycle orbits under the 2^n * n! automorphism group.

    An orbit is counted at the prefix-canonical delta that equals its own
    canonical form; its size is (distinct residual variants) * n! / 2.
    n = 5 is a long-running call (minutes, compiled, cached); n = 6 is
    refused.
    """
    _check_enum_dimension(n)
    if n < MAX_ENUMERATION_DIMENSION:
        return _classify_python(n)
    visits, norbits, reps, msizes = _classify_compiled(n, classify=True)
    seqs = [tuple(int(x) for x in reps[i]) for i in range(norbits)]
    counts = [int(msizes[i]) for i in range(norbits)]
    return OrbitSummary(n=n, orbits=_orbit_records(n, seqs, counts))


def classify_weights(n: int) -> dict[WeightSpectrum, int]:
    """Realized weight spectra with the number of cycles in each class."""
    return classify_automorphism(n).weight_class_counts()


# ---------------------------------------------------------------------------
# Compiled depth-first enumeration for the large dimension.

_KERNEL = None


def _build_classify_kernel():
    global _KERNEL
    if _KERNEL is not None:
        return _KERNEL
    import numba
    import numpy as np

    @numba.njit(cache=True, nogil=True)
    def kernel(n, do_classify, reps, msizes):  # pragma: no cover - compiled
        size = 1 << n
        visited = np.zeros(size, np.uint8)
        visited[0] = 1
        # free[u] = unvisited-neighbor count plus one standing credit for
        # adjacency to vertex 0 (the closing edge); an upper bound on the
        # connections still open to u, so pruning on it is safe.
        free = np.full(size, n, np.int64)
        free[0] = 0
        deficient = 0  # unvisited vertices with free <= 1
        path = np.zeros(size, np.int64)
        delta = np.zeros(size, np.int64)
        nextdir = np.zeros(size, np.int64)
        maxd = np.zeros(size, np.int64)
        relab = np.zeros(n + 1, np.int64)
        var_hi = np.zeros(2 * size, np.int64)
        var_lo = np.zeros(2 * size, np.int64)
        cap = msizes.shape[0]
        visits = 0
        orbits = 0
        depth = 0
        while True:
            if depth == size - 1:
                v = path[depth]
                if v != 0 and v & (v - 1) == 0:
                    db = 0
                    x = v
                    while x:
                        x >>= 1
                        db += 1
                    delta[size - 1] = db
                    visits += 1
                    if do_classify:
                        # Canonical iff no rotation of either traversal,
                        # re-minimized over relabelings, is lex-smaller.
                        canonical = True
                        for rev in range(2):
                            if not canonical:
                                break
                            for k in range(size):
                                for i in range(n + 1):
                                    relab[i] = 0
                                nxt = 1
                                cmp = 0
                                for j in range(size):
                                    if rev == 0:
                                        idx = k + j
                                        if idx >= size:
                                            idx -= size
                                    else:
                                        idx = k - j
                                        if idx < 0:
                                            idx += size
                                    c = delta[idx]
                                    r = relab[c]
                                    if r == 0:
                                        relab[c] = nxt
                                        r = nxt
                                        nxt += 1
                                    dj = delta[j]
                                    if r < dj:
                                        cmp = -1
                                        break
                                    if r > dj:
                                        cmp = 1
                                        break
                                if cmp < 0:
                                    canonical = False
                                    break
                        if canonical:
                            # Distinct residual variants, packed 3 bits a
                            # symbol into two words (2^n <= 32 symbols).
                            nv = 0
                            for rev in range(2):
                                for k in range(size):
                                    for i in range(n + 1):
                                        relab[i] = 0
                                    nxt = 1
                                    hi = 0
                                    lo = 0
                                    for j in range(size):
                                        if rev == 0:
                                            idx = k + j
                                            if idx >= size:
                                                idx -= size
                                        else:
                                            idx = k - j
                                            if idx < 0:
                                                idx += size
                                        c = delta[idx]
                                        r = relab[c]
                                        if r == 0:
                                            relab[c] = nxt
                                            r = nxt
                                            nxt += 1
                                        if j < 21:
                                            hi = (hi << 3) | r
                                        else:
                                            lo = (lo << 3) | r
                                    var_hi[nv] = hi
                                    var_lo[nv] = lo
                                    nv += 1
                            m = 0
                            for i in range(nv):
                                fresh = True
                                for j in range(i):
                                    if (
                                        var_hi[j] == var_hi[i]
                                        and var_lo[j] == var_lo[i]
                                    ):
                                        fresh = False
                                        break
                                if fresh:
                                    m += 1
                            if orbits >= cap:
                                return -1, -1
                            for j in range(size):
                                reps[orbits, j] = delta[j]
                            msizes[orbits] = m
                            orbits += 1
                # Backtrack from the leaf.
                depth -= 1
                w = path[depth + 1]
                for b in range(n):
                    x = w ^ (1 << b)
                    if visited[x] == 0:
                        if free[x] == 1:
                            deficient -= 1
                        free[x] += 1
                visited[w] = 0
                if free[w] <= 1:
                    deficient += 1
                continue
            advanced = False
            lim = maxd[depth] + 1
            if lim > n:
                lim = n
            while nextdir[depth] < lim:
                d = nextdir[depth] + 1
                nextdir[depth] += 1
                w = path[depth] ^ (1 << (d - 1))
                if visited[w] == 1 or w == 0:
                    continue
                visited[w] = 1
                if free[w] <= 1:
                    deficient -= 1
                for b in range(n):
                    x = w ^ (1 << b)
                    if visited[x] == 0:
                        free[x] -= 1
                        if free[x] == 1:
                            deficient += 1
                ok = True
                if deficient > 0:
                    # A deficient vertex survives only if the new head can
                    # still reach it; anything else is a dead branch.
                    cnt = 0
                    for b in range(n):
                        x = w ^ (1 << b)
                        if visited[x] == 0 and free[x] <= 1:
                            cnt += 1
                    if deficient > cnt:
                        ok = False
                if not ok:
                    for b in range(n):
                        x = w ^ (1 << b)
                        if visited[x] == 0:
                            if free[x] == 1:
                                deficient -= 1
                            free[x] += 1
                    visited[w] = 0
                    if free[w] <= 1:
                        deficient += 1
                    continue
                delta[depth] = d
                depth += 1
                path[depth] = w
                nextdir[depth] = 0
                maxd[depth] = maxd[depth - 1] if d <= maxd[depth - 1] else d
                advanced = True
                break
            if advanced:
                continue
            if depth == 0:
                break
            depth -= 1
            w = path[depth + 1]
            for b in range(n):
                x = w ^ (1 << b)
                if visited[x] == 0:
                    if free[x] == 1:
                        deficient -= 1
                    free[x] += 1
            visited[w] = 0
            if free[w] <= 1:
                deficient += 1
        return visits, orbits

    _KERNEL = kernel
    return kernel


def _classify_compiled(n: int, classify: bool):
    import numpy as np

    kernel = _build_classify_kernel()
    cap = 400_000 if classify else 1
    reps = np.zeros((cap, 1 << n), np.int64)
    msizes = np.zeros(cap, np.int64)
    visits, orbits = kernel(n, classify, reps, msizes)
    if visits < 0:
        raise RuntimeError("orbit buffer overflow; raise the capacity")
    return visits, orbits, reps, msizes


# ---------------------------------------------------------------------------
# Burnside cross-check: fixed cycles of a single automorphism.


@lru_cache(maxsize=None)
def _edge_index(n: int) -> dict[tuple[int, int], int]:
    idx = {}
    for u in range(1 << n):
        for b in range(n):
            if not u >> b & 1:
                idx[(u, u | 1 << b)] = len(idx)
    return idx


@lru_cache(maxsize=None)
def _all_cycle_masks(n: int) -> tuple[int, ...]:
    # Every undirected Hamiltonian cycle of Q_n as a bitmask over edge
    # indices, enumerated once (first step below last step breaks the
    # traversal-direction tie).
    size = 1 << n
    idx = _edge_index(n)
    masks: list[int] = []

    def rec(v: int, depth: int, visited: int, mask: int, first: int) -> None:
        if depth == size - 1:
            if v and v & (v - 1) == 0 and first < v:
                masks.append(mask | 1 << idx[(0, v)])
            return
        for b in range(n):
            w = v ^ (1 << b)
            if visited >> w & 1 or w == 0:
                continue
            e = (v, w) if v < w else (w, v)
            rec(w, depth + 1, visited | 1 << w, mask | 1 << idx[e], first)

    for b in range(n):
        first = 1 << b
        rec(first, 1, 1 | 1 << first, 1 << idx[(0, first)], first)
    return tuple(masks)


def count_fixed_cycles(g: SignedPermutation, n: int) -> int:
    """Hamiltonian cycles whose edge set the automorphism maps to itself.

    Brute force over all cycles, so the dimension is capped; the Burnside
    average of this count over the whole group equals the orbit count.
    """
    if not 2 <= n <= MAX_BRUTE_FORCE_DIMENSION:
        raise ValueError(
            f"dimension {n} refused: fixed-cycle counting supports "
            f"2 <= n <= {MAX_BRUTE_FORCE_DIMENSION}"
        )
    if g.n != n:
        raise ValueError("automorphism dimension mismatch")
    idx = _edge_index(n)
    perm = [0] * len(idx)
    for e, i in idx.items():
        perm[i] = idx[g.apply_to_edge(e)]
    fixed = 0
    for mask in _all_cycle_masks(n):
        mapped = 0
        t = mask
        while t:
            i = (t & -t).bit_length() - 1
            mapped |= 1 << perm[i]
            t &= t - 1
        if mapped == mask:
            fixed += 1
    return fixed


def burnside_orbit_count(n: int) -> int:
    """Average fixed-cycle count over the group; equals the orbit count."""
    from .cube import all_automorphisms

    total = sum(count_fixed_cycles(g, n) for g in all_automorphisms(n))
    order = automorphism_group_order(n)
    if total % order:
        raise ArithmeticError("fixed-point total not divisible by group order")
    return total // order
