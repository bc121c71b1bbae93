from hittingtime import from_edge_list

FIG1_EDGES = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]
K3_EDGES = [(0, 1), (1, 2), (0, 2)]


def complete_graph(n, weight=1.0):
    return from_edge_list([(i, j, weight) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n):
    return from_edge_list([(i, (i + 1) % n) for i in range(n)])


def random_connected(rng, n, extra=2.0, weights=True):
    """Random spanning tree plus about ``extra * n`` chords, mixed weights."""
    order = rng.permutation(n)
    pairs = set()
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(k)])
        pairs.add((min(u, v), max(u, v)))
    for _ in range(int(extra * n)):
        u, v = (int(x) for x in rng.choice(n, 2, replace=False))
        pairs.add((min(u, v), max(u, v)))
    pairs = sorted(pairs)
    if weights:
        w = rng.uniform(0.1, 10.0, len(pairs))
        return from_edge_list([(u, v, float(x)) for (u, v), x in zip(pairs, w)])
    return from_edge_list(pairs)
