"""Hitting times on a five-node graph, three ways.

Triangle 0-1-2, node 2 joined to 3, node 4 hanging off 3. With target 3,
node 4 is adherent (its only neighbour is the target) and drops out of
the reduced system.

    python demos/01_small_graph.py
"""
import numpy as np

from hittingtime import (
    distribution,
    from_edge_list,
    generating_function_value,
    hitting_table,
    moment,
    moments,
    reduce,
    simulate,
    spectral_radius_bound,
)

g = from_edge_list([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
r = reduce(g, 3)
print("sources", r.sources, "adherents", r.adherents)
print("B =\n", r.B.toarray())
print("X1 =", r.X1)
print("spectral radius bound:", spectral_radius_bound(r))

# %% exact moments from the power series
res = moments(r)
print(f"\nmean     {res.mean}  ({res.iterations_used} terms, converged={res.converged})")
print(f"variance {res.variance}")
for k in (3, 4):
    print(f"E[N^{k}]   {moment(r, k)}")

# %% full distribution and its normalisation
d = distribution(r, 120)
print("\nP(N = n), n = 1..6, from node 0:", np.round(d.probs[0, :6], 6))
print("tail mass at n_max = 120:", d.tail_mass)

# %% generating function at z = 1/2
print("\nf(1/2) =", generating_function_value(r, 0.5))

# %% Monte Carlo check
table = hitting_table(g, 3)
sim = simulate(g, 3, table.nodes, 200_000, seed=1)
print("\nnode  analytic     MC         std err")
for v, mean, mc, se in zip(table.nodes, table.mean, sim.sample_mean, sim.std_error):
    print(f"{v:>4}  {mean:<11.8f}  {mc:<9.5f}  {se:.5f}")
