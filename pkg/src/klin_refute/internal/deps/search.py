"""Dependency search along closed walks of a Kikuchi graph.

An edge ``U → V`` of the even Kikuchi graph carries ``(v, β)`` with ``U - V = βv``, so the
labels of a closed walk sum to zero: ``Σ β_i·v_i = 0``. Collapsing repeated vectors turns the
walk into a dependency unless every collapsed coefficient vanishes. Odd arity uses the pair-vector
graph, where one edge contributes ``β(s_j·v_j - s_j'·v_j')`` and the shared prefix cancels.

The search runs a radius-limited BFS from every touched vertex and closes a walk at each
non-tree edge; a closed walk of length L through the start is a sum of such fundamental walks of
length at most L, so every non-trivially closed walk within the budget is detected.
"""

import collections
import concurrent.futures
import logging
from collections.abc import Callable
from enum import Enum

import numpy as np

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import KLinInstance
from klin_refute.internal.kikuchi import KikuchiMatrix, build_even_field, build_odd
from klin_refute.internal.models import Caps, DomainMismatchError, ValidationError

from .decompose import vector_decompose
from .dependency import Dependency, find_dependency_exhaustive, verify_dependency

log = logging.getLogger(__name__)

Coeffs = dict[int, int]


class SearchMode(str, Enum):
    """Defines how dependencies are searched for."""

    exhaustive = "exhaustive"
    kikuchi = "kikuchi"


def _axpy(acc: Coeffs, other: Coeffs, spec: GroupSpec, negate: bool = False) -> Coeffs:
    out = dict(acc)
    for pos, c in other.items():
        c = int(spec.neg_table[c]) if negate else c
        out[pos] = int(spec.add_table[out.get(pos, 0), c])
    return out


def _graph(
    inst: KLinInstance,
    ell: int,
    caps: Caps,
) -> tuple[KikuchiMatrix, Callable[[int], Coeffs]] | None:
    """The Kikuchi graph to walk and the per-edge label contribution."""
    spec = inst.spec
    if inst.k % 2 == 0:
        A = build_even_field(inst, ell, cap=caps.vertices)
        return A, lambda e: {int(A.eq_a[e]): int(A.betas[e])}

    parts = [d for d in vector_decompose(inst, ell) if d.t > 0]
    part = max(parts, key=lambda d: (d.size, d.t), default=None)
    if part is None or part.size == 0:
        return None
    scalars = {m.position: m.scalar for b in part.buckets for m in b.members}
    A = build_odd(part.odd_buckets(inst), spec, inst.n, inst.k, ell, part.t, cap=caps.vertices)
    log.debug("odd dependency graph", extra={"t": part.t, "members": part.size, "edges": A.nnz})

    def contribution(e: int) -> Coeffs:
        a, b, beta = int(A.eq_a[e]), int(A.eq_b[e]), int(A.betas[e])
        first = int(spec.mul_table[beta, scalars[a]])
        second = int(spec.neg_table[spec.mul_table[beta, scalars[b]]])
        return _axpy({a: first}, {b: second}, spec)

    return A, contribution


def _adjacency(A: KikuchiMatrix, seed: int) -> dict[int, np.ndarray]:
    """Outgoing edge ids per vertex, in an order drawn from ``seed``."""
    order = np.random.default_rng(seed).permutation(A.nnz)
    order = order[np.argsort(A.rows[order], kind="stable")]
    starts = np.searchsorted(A.rows[order], A.active())
    bounds = np.append(starts, A.nnz)
    return {
        int(v): order[bounds[i] : bounds[i + 1]] for i, v in enumerate(A.active().tolist())
    }


def _walk_from(
    start: int,
    A: KikuchiMatrix,
    adjacency: dict[int, np.ndarray],
    contribution: Callable[[int], Coeffs],
    spec: GroupSpec,
    budget: int,
) -> Coeffs | None:
    """First non-trivially closed fundamental walk through ``start``.

    Walks are at most ``budget`` edges long.
    """
    radius = budget // 2
    depth = {start: 0}
    label_sum: dict[int, Coeffs] = {start: {}}
    tree_edge: dict[int, int] = {}
    queue = collections.deque([start])
    while queue:
        u = queue.popleft()
        for e in adjacency.get(u, ()):
            e = int(e)
            v = int(A.cols[e])
            if v not in depth:
                if depth[u] < radius:
                    depth[v] = depth[u] + 1
                    label_sum[v] = _axpy(label_sum[u], contribution(e), spec)
                    tree_edge[v] = e
                    queue.append(v)
                continue
            if tree_edge.get(v) == e or depth[u] + depth[v] + 1 > budget:
                continue
            closed = _axpy(_axpy(label_sum[u], contribution(e), spec), label_sum[v], spec, True)
            closed = {p: c for p, c in closed.items() if c}
            if closed:
                return closed
    return None


def find_dependency_kikuchi(
    inst: KLinInstance,
    ell: int,
    walk_budget: int,
    seed: int = 0,
    caps: Caps | None = None,
    workers: int = 1,
) -> Dependency | None:
    """Search closed walks of length at most ``walk_budget`` for a dependency.

    Start vertices are tried in increasing rank and the smallest start that closes a walk wins;
    ``seed`` fixes the order in which edges are explored. Returns None when the budget is
    exhausted, which does not prove that no dependency exists.

    Raises:
        DomainMismatchError: The domain is not a field.
        ValidationError: ``walk_budget < 2`` or the Kikuchi graph cannot be built at ``ell``.
        ResourceCapError: The vertex space is too large.
    """
    if not inst.spec.is_field:
        raise DomainMismatchError(f"dependency search needs a field, got {inst.spec.describe()}")
    if walk_budget < 2:
        raise ValidationError(f"closed walks have length at least 2, got {walk_budget}")
    caps = caps or Caps()
    spec = inst.spec
    graph = _graph(inst, ell, caps)
    if graph is None or graph[0].nnz == 0:
        log.warning("dependency graph has no edges", extra={"ell": ell, "incomplete": True})
        return None
    A, contribution = graph
    adjacency = _adjacency(A, seed)
    starts = sorted(adjacency)

    def run(start: int) -> Coeffs | None:
        return _walk_from(start, A, adjacency, contribution, spec, walk_budget)

    found: Coeffs | None = None
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            found = next((c for c in pool.map(run, starts) if c is not None), None)
    else:
        found = next((c for c in map(run, starts) if c is not None), None)
    if found is None:
        log.warning(
            "walk budget exhausted",
            extra={"walk_budget": walk_budget, "starts": len(starts), "incomplete": True},
        )
        return None
    dep = Dependency(terms=sorted(found.items()))
    if not verify_dependency(inst, dep):
        raise AssertionError(f"closed walk produced a non-dependency {dep.terms}")
    log.info("kikuchi dependency", extra={"length": dep.length, "walk_budget": walk_budget})
    return dep


def find_dependency(
    inst: KLinInstance,
    mode: SearchMode | str,
    max_size: int,
    ell: int = 1,
    seed: int = 0,
    caps: Caps | None = None,
    workers: int = 1,
) -> Dependency | None:
    """Run the chosen search; ``max_size`` bounds the subset size or the walk length."""
    caps = caps or Caps()
    match SearchMode(mode):
        case SearchMode.exhaustive:
            return find_dependency_exhaustive(inst, max_size, caps.exhaustive)
        case SearchMode.kikuchi:
            return find_dependency_kikuchi(inst, ell, max_size, seed, caps, workers)
