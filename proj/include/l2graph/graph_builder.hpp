#ifndef L2GRAPH_GRAPH_BUILDER_HPP
#define L2GRAPH_GRAPH_BUILDER_HPP

#include "l2graph/types.hpp"

namespace l2graph {

// Ridge-regression codes for every sample over the dictionary of all other
// samples, from the closed form
//     c_i = P [Y'y_i - (e_i'P Y'y_i) / (e_i'P e_i) * e_i],
//     P   = (Y'Y + lambda I)^{-1},
// which equals the per-sample solve (Y_i'Y_i + lambda I)^{-1} Y_i'y_i with
// column i of the dictionary zeroed, but costs one factorization for the
// whole dataset instead of n.  The diagonal is exactly zeroed (the
// constraint makes it zero in exact arithmetic; we drop the float residue)
// and columns are scaled to unit l2 norm unless `normalize` is false
// (all-zero columns stay zero).
CoefficientMatrix l2_coefficients(const DataMatrix& data, double lambda,
                                  bool normalize = true);

// Keeps the k largest-magnitude entries of every column, zeroing the rest.
// Ties break toward the lower row index.
CoefficientMatrix threshold_topk(const CoefficientMatrix& coeffs, int k);

// w_ij = |c_ij| + |c_ji|.  Requires a zero diagonal.
SimilarityGraph symmetrize(const CoefficientMatrix& coeffs);

// The three steps above composed: codes -> top-k -> symmetric weights.
SimilarityGraph build_l2_graph(const DataMatrix& data, double lambda, int k);

// Heat-kernel weights exp(-||y_i - y_j||^2 / tau) on the union of the
// k-nearest-neighbor relations (edge kept if either endpoint selects the
// other).  Neighbor ties break toward the lower index.
SimilarityGraph build_gaussian_graph(const DataMatrix& data, double tau, int k);

// Local least-squares reconstruction weights over each sample's k nearest
// neighbors, constrained to sum to one, symmetrized the same way as the
// coefficient graphs.
SimilarityGraph build_lle_graph(const DataMatrix& data, int k);

// Throws unless weights are square, symmetric, non-negative with a zero
// diagonal.
void validate_graph(const SimilarityGraph& graph);

} // namespace l2graph

#endif
