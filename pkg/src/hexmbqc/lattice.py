"""Hexagonal trap array and its decomposition into rhombic cluster layers.

The trap is a honeycomb network: ions sit on the vertices, transport
channels run along the edges, and every vertex is a Y-junction joining at
most three channels at 120 degrees.  The vertex set splits into two
triangular families (A and B); scaling the elementary cell of each family
by ``n`` partitions the array into ``2 n**2`` layers.  Each layer is a
rhombic Bravais lattice (equal-length primitive vectors at 60 degrees)
whose in-layer neighbors are ``2 n`` channel segments apart, i.e. at
shuttling distance ``2 n d`` for nearest-neighbor spacing ``d``.

Distances between entangling partners are quoted in the channel metric
(path length along trap channels) throughout: that is the distance an ion
shuttles, and it is the length that fixes transport time.  Euclidean
in-layer spacing is ``sqrt(3) * n * d``.

Triangular coordinates: vertex ``(f, i, j)`` sits at ``i*T1 + j*T2 + f*delta``
with ``|T1| = |T2| = sqrt(3) d`` at 60 degrees and ``delta = (T1 + T2) / 3``
(``|delta| = d``).  Family-A vertex ``(0, i, j)`` neighbors B vertices
``(1, i, j)``, ``(1, i-1, j)`` and ``(1, i, j-1)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

__all__ = [
    "HexArray",
    "LayerAssignment",
    "build_hex_array",
    "decompose_sublattices",
    "layer_neighbors",
    "intra_layer_edges",
    "interlayer_edges",
    "cluster_edges",
    "channel_distance",
    "assignment_report",
]


@dataclass(frozen=True)
class HexArray:
    """Finite block of hexagonal cells.

    ``sites`` are integer ids 0..N-1 in a deterministic order.  ``keys``
    maps each id to its ``(family, i, j)`` triangular coordinate and
    ``position`` to Cartesian coordinates in meters.  ``adjacency`` lists
    the trap-channel neighbors (honeycomb edges) of each site.
    """

    rows: int
    cols: int
    d: float
    sites: tuple[int, ...]
    keys: tuple[tuple[int, int, int], ...]
    position: dict[int, tuple[float, float]]
    adjacency: dict[int, tuple[int, ...]] = field(repr=False)
    index: dict[tuple[int, int, int], int] = field(repr=False)

    def site_count(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class LayerAssignment:
    """Partition of a HexArray into 2 n**2 rhombic layers.

    ``layer_of`` maps site id -> layer in 1..layer_count, ``coord_of``
    maps site id -> integer in-layer (a, b) coordinate along the layer's
    two primitive directions.
    """

    array: HexArray
    n: int
    layer_count: int
    layer_of: dict[int, int]
    coord_of: dict[int, tuple[int, int]]
    # layer -> (family, (p, q)) coset labels, index 0 unused
    layer_labels: tuple[tuple[int, tuple[int, int]] | None, ...] = field(repr=False)


def build_hex_array(rows: int, cols: int, d: float) -> HexArray:
    """Build a rows x cols block of hexagonal cells with edge length d.

    Site count follows the closed form 2*(rows*cols + rows + cols).
    Raises ValueError for non-positive rows, cols or d.
    """
    if rows <= 0 or cols <= 0:
        raise ValueError(f"rows and cols must be positive, got {rows} x {cols}")
    if not (d > 0.0) or not math.isfinite(d):
        raise ValueError(f"spacing d must be positive and finite, got {d}")

    # Vertices of hexagon (i, j): A(i,j), B(i,j), A(i+1,j), B(i+1,j-1),
    # A(i+1,j-1), B(i,j-1).  Collect over the block and deduplicate.
    keyset: set[tuple[int, int, int]] = set()
    for i in range(cols):
        for j in range(rows):
            keyset.update(
                [
                    (0, i, j),
                    (1, i, j),
                    (0, i + 1, j),
                    (1, i + 1, j - 1),
                    (0, i + 1, j - 1),
                    (1, i, j - 1),
                ]
            )
    keys = tuple(sorted(keyset))
    index = {k: s for s, k in enumerate(keys)}

    s3 = math.sqrt(3.0)
    t1 = (s3 * d, 0.0)
    t2 = (s3 * d * 0.5, 1.5 * d)  # sqrt(3) d at 60 deg: (sqrt(3)/2, 3/2) d
    delta = ((t1[0] + t2[0]) / 3.0, (t1[1] + t2[1]) / 3.0)

    position: dict[int, tuple[float, float]] = {}
    for s, (f, i, j) in enumerate(keys):
        x = i * t1[0] + j * t2[0] + f * delta[0]
        y = i * t1[1] + j * t2[1] + f * delta[1]
        position[s] = (x, y)

    adjacency: dict[int, tuple[int, ...]] = {}
    for s, (f, i, j) in enumerate(keys):
        if f == 0:
            cand = [(1, i, j), (1, i - 1, j), (1, i, j - 1)]
        else:
            cand = [(0, i, j), (0, i + 1, j), (0, i, j + 1)]
        adjacency[s] = tuple(index[k] for k in cand if k in index)

    return HexArray(
        rows=rows,
        cols=cols,
        d=d,
        sites=tuple(range(len(keys))),
        keys=keys,
        position=position,
        adjacency=adjacency,
        index=index,
    )


def _serpentine(n: int) -> list[tuple[int, int]]:
    """Boustrophedon order of the n x n coset grid; consecutive entries
    differ by one step in p or q."""
    order = []
    for p in range(n):
        qs = range(n) if p % 2 == 0 else range(n - 1, -1, -1)
        order.extend((p, q) for q in qs)
    return order


def decompose_sublattices(array: HexArray, n: int) -> LayerAssignment:
    """Assign every site to one of 2 n**2 rhombic layers.

    Layers interleave the two vertex families along a serpentine
    traversal of the n x n coset grid, so consecutive layers stay
    physically adjacent.  Raises ValueError if n < 1 or the array does
    not contain one full elementary cell of the scaled decomposition.
    """
    if n < 1:
        raise ValueError(f"cell scale n must be >= 1, got {n}")

    # The array must contain at least one full elementary cell: an n x n
    # block of (i, j) offsets present for both families.
    imin = min(k[1] for k in array.keys)
    imax = max(k[1] for k in array.keys)
    jmin = min(k[2] for k in array.keys)
    jmax = max(k[2] for k in array.keys)
    found = False
    for i0 in range(imin, imax - n + 2):
        for j0 in range(jmin, jmax - n + 2):
            if all(
                (f, i0 + p, j0 + q) in array.index
                for f in (0, 1)
                for p in range(n)
                for q in range(n)
            ):
                found = True
                break
        if found:
            break
    if not found:
        raise ValueError(
            f"array of {array.site_count()} sites holds no full elementary "
            f"cell for n={n}; increase rows/cols"
        )

    cosets = _serpentine(n)
    layer_index: dict[tuple[int, int, int], int] = {}
    labels: list[tuple[int, tuple[int, int]] | None] = [None]
    for k, (p, q) in enumerate(cosets):
        for f in (0, 1):
            layer_index[(f, p, q)] = 2 * k + 1 + f
            labels.append((f, (p, q)))

    layer_of: dict[int, int] = {}
    coord_of: dict[int, tuple[int, int]] = {}
    for s, (f, i, j) in enumerate(array.keys):
        p, q = i % n, j % n
        layer_of[s] = layer_index[(f, p, q)]
        coord_of[s] = (i // n, j // n)

    return LayerAssignment(
        array=array,
        n=n,
        layer_count=2 * n * n,
        layer_of=layer_of,
        coord_of=coord_of,
        layer_labels=tuple(labels),
    )


def layer_neighbors(assign: LayerAssignment, site: int) -> set[int]:
    """Same-layer neighbors of a site: the up-to-four sites one primitive
    step away along the layer's rhombic directions (2 n d by channel)."""
    array = assign.array
    if site not in array.position:
        raise ValueError(f"unknown site id {site}")
    f, i, j = array.keys[site]
    n = assign.n
    out = set()
    for di, dj in ((n, 0), (-n, 0), (0, n), (0, -n)):
        other = array.index.get((f, i + di, j + dj))
        if other is not None:
            out.add(other)
    return out


def intra_layer_edges(assign: LayerAssignment) -> set[tuple[int, int]]:
    """All in-layer cluster edges, as sorted site-id pairs."""
    edges: set[tuple[int, int]] = set()
    array = assign.array
    n = assign.n
    for s, (f, i, j) in enumerate(array.keys):
        for di, dj in ((n, 0), (0, n)):
            other = array.index.get((f, i + di, j + dj))
            if other is not None:
                edges.add((s, other) if s < other else (other, s))
    return edges


def _layer_shift(assign: LayerAssignment, layer: int) -> tuple[int, int, int]:
    """Family flip and (di, dj) step taking layer ``layer`` onto
    layer ``layer + 1`` (cyclically)."""
    nxt = layer % assign.layer_count + 1
    f0, (p0, q0) = assign.layer_labels[layer]
    f1, (p1, q1) = assign.layer_labels[nxt]
    n = assign.n

    def wrap(delta: int) -> int:
        # nearest representative of delta mod n
        delta %= n
        return delta - n if delta > n // 2 else delta

    return f1, wrap(p1 - p0), wrap(q1 - q0)


def interlayer_edges(assign: LayerAssignment, periodic: bool) -> set[tuple[int, int]]:
    """One edge per (site, corresponding site in the next layer).

    The correspondence is the nearest coset translate, so each site gains
    at most one upward and one downward edge.  With ``periodic`` the last
    layer links back to the first; for n=1 that wrap duplicates the
    forward edges and collapses away.
    """
    array = assign.array
    edges: set[tuple[int, int]] = set()
    last = assign.layer_count if periodic else assign.layer_count - 1
    shift = {ell: _layer_shift(assign, ell) for ell in range(1, last + 1)}
    for s, (f, i, j) in enumerate(array.keys):
        ell = assign.layer_of[s]
        if ell > last:
            continue
        f1, di, dj = shift[ell]
        other = array.index.get((f1, i + di, j + dj))
        if other is not None:
            edges.add((s, other) if s < other else (other, s))
    return edges


def cluster_edges(assign: LayerAssignment, periodic: bool = False) -> set[tuple[int, int]]:
    """Full 3D cluster edge set: in-layer plus interlayer."""
    return intra_layer_edges(assign) | interlayer_edges(assign, periodic)


def channel_distance(array: HexArray, a: int, b: int) -> float:
    """Shuttling distance between two sites: hops along trap channels times d."""
    if a == b:
        return 0.0
    seen = {a: 0}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        for nb in array.adjacency[cur]:
            if nb not in seen:
                seen[nb] = seen[cur] + 1
                if nb == b:
                    return seen[nb] * array.d
                queue.append(nb)
    raise ValueError(f"sites {a} and {b} are not connected")


def assignment_report(assign: LayerAssignment) -> dict:
    """JSON-compatible report: array metadata plus per-site records."""
    array = assign.array
    sites = []
    for s in array.sites:
        f, i, j = array.keys[s]
        x, y = array.position[s]
        sites.append(
            {
                "id": s,
                "x": x,
                "y": y,
                "family": f,
                "tri_i": i,
                "tri_j": j,
                "layer": assign.layer_of[s],
                "coord": list(assign.coord_of[s]),
            }
        )
    return {
        "schema_version": 1,
        "rows": array.rows,
        "cols": array.cols,
        "d": array.d,
        "n": assign.n,
        "layer_count": assign.layer_count,
        "site_count": array.site_count(),
        "sites": sites,
    }
