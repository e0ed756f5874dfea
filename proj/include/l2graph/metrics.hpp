#ifndef L2GRAPH_METRICS_HPP
#define L2GRAPH_METRICS_HPP

#include "l2graph/types.hpp"

namespace l2graph {

// Joint label counts: counts(i, j) = number of samples with predicted
// cluster i and true cluster j.  Labels are canonicalized first.
struct ContingencyTable {
    Eigen::MatrixXi counts;
    int n = 0;
};

ContingencyTable contingency(const std::vector<int>& pred,
                             const std::vector<int>& truth);

// Minimum-cost one-to-one assignment over a rectangular cost matrix
// (rows to columns; every row of the smaller side gets assigned).
struct Assignment {
    std::vector<int> column_of_row; // -1 for unassigned rows
    double total_cost = 0.0;
};

Assignment optimal_assignment(const Matrix& cost);

// Fraction of samples correctly clustered under the best one-to-one
// matching of predicted clusters to true clusters.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// Mutual information normalized by sqrt(H(pred) * H(truth)), natural log.
// If either partition has zero entropy, returns 1 when the partitions are
// identical as set partitions and 0 otherwise.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// 1 - accuracy.
double clustering_error(const std::vector<int>& pred,
                        const std::vector<int>& truth);

} // namespace l2graph

#endif
