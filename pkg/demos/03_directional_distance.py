"""Hitting-time distance is directional even on undirected graphs.

A 10-clique (ids 0-9) plus one extra node (id 10) attached to the top few
clique members. Reaching the poorly connected node from the clique takes
far longer than the reverse trip.

    python demos/03_directional_distance.py
"""
from hittingtime import clique_plus_pendant, pairwise_distances, simulate

print("degree  d(9 -> 10)  d(10 -> 9)  ratio")
for degree in range(1, 6):
    g = clique_plus_pendant(10, degree)
    (_, _, d_in, d_out, ratio), = pairwise_distances(g, [9, 10]).pairs
    print(f"{degree:>6}  {d_in:>10.4f}  {d_out:>10.4f}  {ratio:>5.2f}")

g = clique_plus_pendant(10, 3)
(_, _, d_in, d_out, _), = pairwise_distances(g, [9, 10]).pairs
a = simulate(g, 10, [9], 200_000, seed=1)
b = simulate(g, 9, [10], 200_000, seed=1)
print(f"\ndegree 3, Monte Carlo: {a.sample_mean[0]:.3f} +- {a.std_error[0]:.3f} "
      f"(exact {d_in:.3f}), {b.sample_mean[0]:.3f} +- {b.std_error[0]:.3f} (exact {d_out:.3f})")
