#ifndef L2GRAPH_EMBEDDING_HPP
#define L2GRAPH_EMBEDDING_HPP

#include "l2graph/types.hpp"

namespace l2graph {

// Linear projection Theta minimizing ||Theta'Y - Theta'YW||_F^2 subject to
// Theta'YY'Theta = I, via the generalized eigenproblem
//     Y (I-W)'(I-W) Y' theta = lambda YY' theta
// restricted to the numerical range of YY'.  Returns the d eigenpairs of
// smallest eigenvalue above the relative tolerance 1e-10; when the whole
// pencil spectrum is zero (every sample reconstructed exactly) the
// objective vanishes in all directions and the smallest d are returned.
EmbeddingModel npe_embed(const DataMatrix& data, const SimilarityGraph& graph,
                         int d);

// Theta' X, labels carried through.
DataMatrix transform(const EmbeddingModel& model, const DataMatrix& data);

// Nearest-training-point label per test sample, Euclidean metric, distance
// ties toward the lower training index.
std::vector<int> nn_classify(const DataMatrix& train, const DataMatrix& test);

// One row of the evaluation grid: embed at dimension d, classify, score.
struct AccuracyRow {
    int d = 0;
    double accuracy = 0.0;
};

struct AccuracyTable {
    std::vector<AccuracyRow> rows;
    int best_d = 0;
    double best_accuracy = 0.0;
};

// For each d: L2-graph on the training set, embedding, projection of both
// sets, 1-NN classification against the test labels.  The graph is built
// once and reused across the grid.
AccuracyTable evaluate_subspace_learning(const DataMatrix& train,
                                         const DataMatrix& test,
                                         const GraphParams& graph_params,
                                         const std::vector<int>& d_grid);

} // namespace l2graph

#endif
