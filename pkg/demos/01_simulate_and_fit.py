"""
Simulating a nested block model and recovering its structure
============================================================

Six communities are grouped into two meta-communities. Communities in the
same meta-community share a node-heterogeneity pattern, which is what the
first clustering step looks for.
"""

import numpy as np

from nbm import GeneratorConfig, clustering_error, estimation_error, fit, generate_network

# A balanced network: 300 nodes, 6 communities of 50, 2 meta-communities.
# omega scales the between-community block means, so smaller is more assortative.
net = generate_network(GeneratorConfig(n=300, K=6, L=2, omega=0.6, seed=1))
A = net.graph.adjacency
print(f"{net.graph.n} nodes, {len(net.graph.edges())} edges, density {A.mean():.3f}")

# Node order is shuffled by the generator, so the adjacency shows no visible blocks.
# Fitting runs sparse subspace clustering for the meta-communities, then spectral
# k-median inside each of them, then a rank-one fit of every block-column.
result = fit(net.graph, K=6, L=2, seed=1)

true_meta = net.c.labels[net.z.labels]
print("meta-community error:", round(clustering_error(true_meta, result.meta.labels), 4))
print("community error:     ", round(clustering_error(net.z.labels, result.z.labels), 4))
print("estimation error:    ", round(estimation_error(result.P_hat, net.P, "NBM", K=6, L=2), 5))

# The estimate is an unclamped least-squares fit, so a few entries can leave [0, 1].
P_hat = result.P_hat
print(f"P_hat range [{P_hat.min():.3f}, {P_hat.max():.3f}]; clamped copy via result.clamped()")

# Every block-column of the sorted estimate is rank one; its singular value is recorded.
top = sorted(result.singular_values.items(), key=lambda kv: -kv[1])[:3]
for (l, k), sigma in top:
    print(f"meta {l}, community {k}: leading singular value {sigma:.2f}")
