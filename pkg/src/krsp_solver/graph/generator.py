"""Seeded random instance generation."""

import random

from krsp_solver.graph.core import Edge, Instance


def gen_random_instance(
    n: int,
    m: int,
    max_cost: int,
    max_delay: int,
    k: int,
    seed: int,
) -> Instance:
    """Sample a random instance with s = 0 and t = n - 1.

    Endpoints are drawn uniformly (self-loops resampled), cost uniformly in
    [0, max_cost] and delay in [0, max_delay]. The delay bound is left at 0;
    callers pick it with :meth:`Instance.with_delay_bound`.
    """
    rng = random.Random(seed)
    edges = []
    for edge_id in range(m):
        tail = rng.randrange(n)
        head = rng.randrange(n - 1)
        if head >= tail:
            head += 1
        edges.append(
            Edge(
                id=edge_id,
                tail=tail,
                head=head,
                cost=rng.randint(0, max(max_cost, 0)),
                delay=rng.randint(0, max(max_delay, 0)),
            )
        )
    return Instance(n=n, edges=tuple(edges), s=0, t=n - 1, k=k, D=0)
