"""
Why the clustering is identifiable
==================================

On the noiseless probability matrix every block-column is exactly rank one
under the true clustering, and only under it. A brute-force search over all
clusterings of a tiny network shows this directly.
"""

from nbm import GeneratorConfig, fit, generate_network, objective
from nbm.oracle import equivalent_labelings, exhaustive_best_clustering

net = generate_network(GeneratorConfig(n=8, K=2, L=2, omega=0.6, seed=4))
print("objective at the truth:", objective(net.P, net.z, net.c))

best, minimizers = exhaustive_best_clustering(net.P, K=2, L=2)
truth = equivalent_labelings(net.z, net.c)
print("best objective over all clusterings:", best)
print("minimizers are exactly the relabellings of the truth:", minimizers == truth)

# The full two-step pipeline also recovers the truth from P itself. The
# diagonal of P is known and kept; light regularization suits exact data.
net = generate_network(GeneratorConfig(n=40, K=4, L=2, omega=0.6, seed=4))
result = fit(net.P, 4, 2, gammas=(0.01, 2.0), seed=4, zero_diagonal=False)
print("pipeline objective on P:", result.objective)
