#ifndef L2GRAPH_SPECTRAL_HPP
#define L2GRAPH_SPECTRAL_HPP

#include "l2graph/types.hpp"

#include <cstdint>

namespace l2graph {

// L = I - D^{-1/2} W D^{-1/2} with d_i = sum_j w_ij.  Isolated vertices
// (d_i = 0) use (D^{-1/2})_ii = 0, so their Laplacian row is e_i.
Matrix normalized_laplacian(const SimilarityGraph& graph);

// Eigenvectors of the l smallest eigenvalues (including near-zero ones),
// rows scaled to unit length (all-zero rows stay zero), each column's sign
// fixed so its largest-magnitude entry is positive.
SpectralEmbedding spectral_embed(const Matrix& laplacian, int l);

struct KmeansOptions {
    int restarts = 20;
    int max_iterations = 300;
};

// Lloyd's algorithm over row-vectors.  Each restart seeds greedily:
// random first center, then repeatedly the point farthest from the chosen
// centers.  Convergence = stable assignment; the best-inertia restart wins.
// Emptied clusters are re-seeded with the point farthest from its center.
ClusterAssignment kmeans(const Matrix& points, int num_clusters,
                         std::uint64_t seed, const KmeansOptions& options = {});

// The full pipeline: Laplacian, l-dimensional embedding, k-means.
ClusterAssignment spectral_cluster(const SimilarityGraph& graph, int l,
                                   std::uint64_t seed,
                                   const KmeansOptions& options = {});

} // namespace l2graph

#endif
