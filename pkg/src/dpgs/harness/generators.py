"""Synthetic insertion-only streams with known structure."""

from __future__ import annotations

import random

from dpgs.stream import NOOP, EdgeUpdate, UpdateStream, canon


class InfeasibleT(ValueError):
    pass


def random_tree_edges(n: int, rng: random.Random) -> list[tuple[int, int]]:
    """A random spanning tree: each vertex in a random order attaches to an
    earlier one."""
    perm = list(range(n))
    rng.shuffle(perm)
    return [canon(perm[i], perm[rng.randrange(i)]) for i in range(1, n)]


def forest_union_edges(n: int, alpha: int, rng: random.Random) -> list[tuple[int, int]]:
    """Union of alpha random spanning trees (duplicates merged), so the
    arboricity is at most alpha. Returned in random order."""
    seen, out = set(), []
    for _ in range(alpha):
        for e in random_tree_edges(n, rng):
            if e not in seen:
                seen.add(e)
                out.append(e)
    rng.shuffle(out)
    return out


def gen_bounded_arboricity_stream(n: int, alpha: int, T: int, seed=None,
                                  pad: bool = True) -> UpdateStream:
    """Insertion-only stream of length T over a forest union.

    If T is below the number of available edges the stream is a random prefix.
    If it is above, no-ops are interleaved at random positions; with
    ``pad=False`` that case raises InfeasibleT.
    """
    if T < 0 or n < 1 or alpha < 1:
        raise InfeasibleT(f"cannot build a stream with n={n}, alpha={alpha}, T={T}")
    rng = random.Random(seed)
    edges = forest_union_edges(n, alpha, rng)
    if T <= len(edges):
        return UpdateStream(n, [EdgeUpdate.insert(*e) for e in edges[:T]])
    if not pad:
        raise InfeasibleT(f"only {len(edges)} edges available, T={T}")
    ups = [EdgeUpdate.insert(*e) for e in edges]
    # shuffle no-op positions while keeping the edge order
    slots = sorted(rng.sample(range(T), len(edges)))
    out = [NOOP] * T
    for pos, up in zip(slots, ups):
        out[pos] = up
    return UpdateStream(n, out)


def gen_gnp_stream(n: int, p: float, seed=None) -> UpdateStream:
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    rng.shuffle(edges)
    return UpdateStream(n, [EdgeUpdate.insert(*e) for e in edges])


def gen_planted_stream(n: int, p: float, k: int, seed=None) -> UpdateStream:
    """G(n, p) plus a clique on k random vertices, in random order."""
    if k > n:
        raise InfeasibleT(f"clique size {k} exceeds n={n}")
    rng = random.Random(seed)
    edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
    C = sorted(rng.sample(range(n), k))
    edges |= {(a, b) for i, a in enumerate(C) for b in C[i + 1:]}
    edges = sorted(edges)
    rng.shuffle(edges)
    return UpdateStream(n, [EdgeUpdate.insert(*e) for e in edges])


def gen_clique_pendants(k: int, leaves: int, seed=None) -> UpdateStream:
    """K_k on vertices 0..k-1 plus `leaves` pendant vertices, each attached to
    a random clique vertex, in random order."""
    rng = random.Random(seed)
    edges = [(u, v) for u in range(k) for v in range(u + 1, k)]
    edges += [(rng.randrange(k), k + i) for i in range(leaves)]
    rng.shuffle(edges)
    return UpdateStream(k + leaves, [EdgeUpdate.insert(*e) for e in edges])
