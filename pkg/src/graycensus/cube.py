"""The n-cube, its symmetries, and cyclic Gray code representations.

Vertices of Q_n are the integers 0..2^n-1 read as bitmasks: bit i-1 of a
vertex is coordinate i, so u and v are adjacent iff u XOR v is a power of
two.  The flipped bit gives each edge a direction label in 1..n.

A cyclic Gray code is recorded as its delta sequence: the 2^n direction
labels flipped along the cycle, starting (by convention) at vertex 0.
The same cycle is also handled as a bare edge set, which is the natural
form for symmetry arguments.

Aut(Q_n) is the hyperoctahedral group of order 2^n * n!: a permutation
of the n coordinates composed with complementation of some subset of
them, acting on a vertex as "permute bits, then XOR a flip mask".
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Iterable, Iterator, NamedTuple

MAX_DIMENSION = 16

Edge = tuple[int, int]


def _check_dimension(n: int) -> None:
    if not 1 <= n <= MAX_DIMENSION:
        raise ValueError(f"dimension must be in 1..{MAX_DIMENSION}, got {n}")


@dataclass(frozen=True)
class CubeGraph:
    """Q_n with implicit edges: u ~ v iff u XOR v is a power of two."""

    n: int

    def __post_init__(self) -> None:
        _check_dimension(self.n)

    @property
    def num_vertices(self) -> int:
        return 1 << self.n

    @property
    def num_edges(self) -> int:
        return self.n << (self.n - 1)

    def vertices(self) -> range:
        return range(self.num_vertices)

    def neighbors(self, v: int) -> list[int]:
        self._check_vertex(v)
        return [v ^ (1 << b) for b in range(self.n)]

    def is_edge(self, u: int, v: int) -> bool:
        x = u ^ v
        return x != 0 and x & (x - 1) == 0 and 0 <= u < self.num_vertices and 0 <= v < self.num_vertices

    def direction(self, u: int, v: int) -> int:
        """1-indexed label of the bit flipped along edge u-v."""
        if not self.is_edge(u, v):
            raise ValueError(f"{u} and {v} are not adjacent in Q_{self.n}")
        return (u ^ v).bit_length()

    def edges(self) -> Iterator[Edge]:
        """All edges as (u, v) with u < v, grouped by the higher endpoint."""
        for v in range(1, self.num_vertices):
            for b in range(self.n):
                if v >> b & 1:
                    yield (v ^ (1 << b), v)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.num_vertices:
            raise ValueError(f"vertex {v} out of range for Q_{self.n}")


def build_cube(n: int) -> CubeGraph:
    return CubeGraph(n)


@dataclass(frozen=True)
class SignedPermutation:
    """An automorphism of Q_n: coordinate permutation plus flip mask.

    ``perm[i-1]`` is the image of coordinate i (1-indexed); ``flips`` has
    bit i-1 set iff coordinate i is complemented after permuting.  The
    action on a vertex is: move bit i-1 to position perm[i-1]-1 for all
    i, then XOR with flips.
    """

    n: int
    perm: tuple[int, ...]
    flips: int

    def __post_init__(self) -> None:
        _check_dimension(self.n)
        if sorted(self.perm) != list(range(1, self.n + 1)):
            raise ValueError(f"perm must be a permutation of 1..{self.n}, got {self.perm}")
        if not 0 <= self.flips < 1 << self.n:
            raise ValueError(f"flip mask {self.flips} out of range for n={self.n}")

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(n, tuple(range(1, n + 1)), 0)

    def apply_to_vertex(self, v: int) -> int:
        if not 0 <= v < 1 << self.n:
            raise ValueError(f"vertex {v} out of range for Q_{self.n}")
        out = 0
        for i in range(self.n):
            if v >> i & 1:
                out |= 1 << (self.perm[i] - 1)
        return out ^ self.flips

    def apply_to_direction(self, d: int) -> int:
        if not 1 <= d <= self.n:
            raise ValueError(f"direction {d} out of range for n={self.n}")
        return self.perm[d - 1]

    def apply_to_edge(self, edge: Edge) -> Edge:
        a = self.apply_to_vertex(edge[0])
        b = self.apply_to_vertex(edge[1])
        return (a, b) if a < b else (b, a)

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """self after other: (self.compose(other))(v) == self(other(v))."""
        if self.n != other.n:
            raise ValueError("cannot compose automorphisms of different dimensions")
        perm = tuple(self.perm[other.perm[i] - 1] for i in range(self.n))
        moved = 0
        for i in range(self.n):
            if other.flips >> i & 1:
                moved |= 1 << (self.perm[i] - 1)
        return SignedPermutation(self.n, perm, moved ^ self.flips)

    def inverse(self) -> "SignedPermutation":
        inv = [0] * self.n
        for i in range(self.n):
            inv[self.perm[i] - 1] = i + 1
        moved = 0
        for i in range(self.n):
            if self.flips >> i & 1:
                moved |= 1 << (inv[i] - 1)
        return SignedPermutation(self.n, tuple(inv), moved)

    def vertex_map(self) -> tuple[int, ...]:
        """Images of all 2^n vertices, for distinctness checks."""
        return tuple(self.apply_to_vertex(v) for v in range(1 << self.n))


def apply_automorphism(g: SignedPermutation, v: int) -> int:
    return g.apply_to_vertex(v)


def all_automorphisms(n: int) -> Iterator[SignedPermutation]:
    """The full hyperoctahedral group, all 2^n * n! elements."""
    _check_dimension(n)
    for perm in permutations(range(1, n + 1)):
        for flips in range(1 << n):
            yield SignedPermutation(n, perm, flips)


def automorphism_group_order(n: int) -> int:
    return (1 << n) * factorial(n)


def random_automorphism(n: int, rng: random.Random) -> SignedPermutation:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return SignedPermutation(n, tuple(perm), rng.randrange(1 << n))


@dataclass(frozen=True)
class DeltaSequence:
    """A cyclic Gray code as the sequence of flipped directions from vertex 0."""

    n: int
    deltas: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_dimension(self.n)
        object.__setattr__(self, "deltas", tuple(self.deltas))

    def __len__(self) -> int:
        return len(self.deltas)

    def walk(self) -> list[int]:
        """The visited vertices, starting at 0; closes back to 0 iff valid."""
        v = 0
        out = [0]
        for d in self.deltas:
            v ^= 1 << (d - 1)
            out.append(v)
        return out

    def direction_counts(self) -> tuple[int, ...]:
        """How many steps flip each direction 1..n, unsorted."""
        counts = [0] * self.n
        for d in self.deltas:
            counts[d - 1] += 1
        return tuple(counts)

    def to_string(self) -> str:
        return ",".join(str(d) for d in self.deltas)

    @classmethod
    def from_string(cls, n: int, text: str) -> "DeltaSequence":
        try:
            deltas = tuple(int(part) for part in text.strip().split(","))
        except ValueError as exc:
            raise ValueError(f"malformed delta sequence {text!r}") from exc
        return cls(n, deltas)


def validate_delta(d: DeltaSequence) -> bool:
    """True iff the walk is a closed Hamiltonian walk on Q_n."""
    size = 1 << d.n
    if len(d.deltas) != size:
        return False
    if any(not 1 <= x <= d.n for x in d.deltas):
        return False
    v = 0
    visited = 1
    for x in d.deltas[:-1]:
        v ^= 1 << (x - 1)
        if visited >> v & 1:
            return False
        visited |= 1 << v
    v ^= 1 << (d.deltas[-1] - 1)
    return v == 0 and visited == (1 << size) - 1


@dataclass(frozen=True)
class CycleEdgeSet:
    """A Hamiltonian cycle stripped down to its set of 2^n cube edges."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        _check_dimension(self.n)
        object.__setattr__(self, "edges", frozenset(self.edges))

    def is_valid(self) -> bool:
        """Degree exactly 2 everywhere and a single spanning cycle."""
        cube = CubeGraph(self.n)
        if len(self.edges) != cube.num_vertices:
            return False
        adj: dict[int, list[int]] = {}
        for u, v in self.edges:
            if not cube.is_edge(u, v):
                return False
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        if len(adj) != cube.num_vertices or any(len(ns) != 2 for ns in adj.values()):
            return False
        # walk from the smallest vertex; a single cycle returns after 2^n steps
        start = 0
        prev, cur, steps = None, start, 0
        while True:
            a, b = adj[cur]
            prev, cur = cur, b if a == prev else a
            steps += 1
            if cur == start:
                break
        return steps == cube.num_vertices

    def to_string(self) -> str:
        return ",".join(f"{u}-{v}" for u, v in sorted(self.edges))

    @classmethod
    def from_string(cls, n: int, text: str) -> "CycleEdgeSet":
        edges = []
        for part in text.strip().split(","):
            try:
                u, v = part.split("-")
                edges.append((int(u), int(v)))
            except ValueError as exc:
                raise ValueError(f"malformed edge {part!r}") from exc
        return cls(n, frozenset(edges))

    def apply(self, g: SignedPermutation) -> "CycleEdgeSet":
        if g.n != self.n:
            raise ValueError("dimension mismatch")
        return CycleEdgeSet(self.n, frozenset(g.apply_to_edge(e) for e in self.edges))


def delta_to_edge_set(d: DeltaSequence) -> CycleEdgeSet:
    if not validate_delta(d):
        raise ValueError(f"invalid delta sequence for Q_{d.n}: {d.to_string()}")
    edges = []
    v = 0
    for x in d.deltas:
        w = v ^ 1 << (x - 1)
        edges.append((v, w) if v < w else (w, v))
        v = w
    return CycleEdgeSet(d.n, frozenset(edges))


def edge_set_to_deltas(c: CycleEdgeSet) -> set[DeltaSequence]:
    """The two traversals of the cycle anchored at vertex 0."""
    adj: dict[int, list[int]] = {}
    for u, v in c.edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if 0 not in adj or len(adj.get(0, ())) != 2:
        raise ValueError("vertex 0 is not on the cycle; corrupt edge set")
    out = set()
    for first in adj[0]:
        deltas = [first.bit_length()]
        prev, cur = 0, first
        for _ in range(len(c.edges) - 1):
            a, b = adj[cur]
            nxt = b if a == prev else a
            deltas.append((cur ^ nxt).bit_length())
            prev, cur = cur, nxt
        if cur != 0:
            raise ValueError("edge set does not close into a single cycle at vertex 0")
        d = DeltaSequence(c.n, tuple(deltas))
        if not validate_delta(d):
            raise ValueError("edge set is not a Hamiltonian cycle")
        out.add(d)
    return out


class PartitionCheck(NamedTuple):
    ok: bool
    reason: str | None

    def __bool__(self) -> bool:
        return self.ok


def verify_cycle_partition(n: int, parts: Iterable[CycleEdgeSet]) -> PartitionCheck:
    """Check that parts split Q_n's edges into Hamiltonian cycles.

    Only even n admits such a partition (each vertex has degree n, and
    every cycle uses exactly 2 edges at it), so odd n is rejected
    outright rather than reported as a reason code.
    """
    if n % 2 != 0:
        raise ValueError(f"cycle partitions require an even dimension, got {n}")
    parts = list(parts)
    cube = CubeGraph(n)
    for part in parts:
        if part.n != n or not part.is_valid():
            return PartitionCheck(False, "not-a-cycle")
    seen: set[Edge] = set()
    for part in parts:
        if seen & part.edges:
            return PartitionCheck(False, "overlap")
        seen |= part.edges
    if len(seen) != cube.num_edges:
        return PartitionCheck(False, "incomplete-cover")
    return PartitionCheck(True, None)


def hamilton_orientations_per_partition(half_dim: int) -> int:
    """Orientation choices carried by one n-cycle partition of Q_2n."""
    if half_dim < 1:
        raise ValueError(f"need half_dim >= 1, got {half_dim}")
    return 1 << (half_dim - 1)
