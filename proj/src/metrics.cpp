#include "l2graph/metrics.hpp"
#include "l2graph/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace l2graph {

ContingencyTable contingency(const std::vector<int>& pred,
                             const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        throw Error("label vectors differ in length (" +
                    std::to_string(pred.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
    if (pred.empty()) throw Error("empty label vectors");

    auto p = canonicalize_labels(pred);
    auto t = canonicalize_labels(truth);
    int lp = *std::max_element(p.begin(), p.end()) + 1;
    int lt = *std::max_element(t.begin(), t.end()) + 1;

    ContingencyTable table;
    table.counts = Eigen::MatrixXi::Zero(lp, lt);
    table.n = static_cast<int>(p.size());
    for (size_t i = 0; i < p.size(); ++i) ++table.counts(p[i], t[i]);
    return table;
}

// Hungarian algorithm with row/column potentials and augmenting paths,
// O(rows^2 * cols).  Requires rows <= cols; optimal_assignment transposes
// when needed so callers don't have to care.
namespace {

Assignment solve_rows_le_cols(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    const int m = static_cast<int>(cost.cols());
    const double inf = std::numeric_limits<double>::infinity();

    // 1-indexed; p[j] = row matched to column j (0 = none).
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    Assignment out;
    out.column_of_row.assign(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j]) out.column_of_row[p[j] - 1] = j - 1;
    for (int i = 0; i < n; ++i)
        out.total_cost += cost(i, out.column_of_row[i]);
    return out;
}

} // namespace

Assignment optimal_assignment(const Matrix& cost) {
    if (cost.rows() == 0 || cost.cols() == 0)
        throw Error("empty cost matrix");
    if (cost.rows() <= cost.cols()) return solve_rows_le_cols(cost);

    Assignment t = solve_rows_le_cols(cost.transpose());
    Assignment out;
    out.column_of_row.assign(static_cast<size_t>(cost.rows()), -1);
    for (size_t j = 0; j < t.column_of_row.size(); ++j)
        if (t.column_of_row[j] >= 0)
            out.column_of_row[static_cast<size_t>(t.column_of_row[j])] =
                static_cast<int>(j);
    out.total_cost = t.total_cost;
    return out;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    ContingencyTable table = contingency(pred, truth);
    // Maximize matched counts = minimize negated counts, on a square
    // zero-padded matrix so unequal cluster counts are handled.
    int k = static_cast<int>(std::max(table.counts.rows(), table.counts.cols()));
    Matrix cost = Matrix::Zero(k, k);
    cost.topLeftCorner(table.counts.rows(), table.counts.cols()) =
        -table.counts.cast<double>();
    Assignment a = optimal_assignment(cost);

    long matched = 0;
    for (int i = 0; i < table.counts.rows(); ++i) {
        int j = a.column_of_row[static_cast<size_t>(i)];
        if (j >= 0 && j < table.counts.cols()) matched += table.counts(i, j);
    }
    return static_cast<double>(matched) / table.n;
}

namespace {

// Equality as set partitions: relabeling by order of first occurrence is a
// canonical form, so two labelings describe the same partition iff the
// canonical forms match.
std::vector<int> first_occurrence_form(const std::vector<int>& labels) {
    std::vector<int> out(labels.size());
    std::vector<std::pair<int, int>> seen; // (original, canonical)
    for (size_t i = 0; i < labels.size(); ++i) {
        int id = -1;
        for (const auto& [orig, canon] : seen)
            if (orig == labels[i]) { id = canon; break; }
        if (id < 0) {
            id = static_cast<int>(seen.size());
            seen.emplace_back(labels[i], id);
        }
        out[i] = id;
    }
    return out;
}

double entropy(const Eigen::VectorXi& counts, int n) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < counts.size(); ++i) {
        if (counts(i) == 0) continue;
        double q = static_cast<double>(counts(i)) / n;
        h -= q * std::log(q);
    }
    return h;
}

} // namespace

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    // Evaluate on a canonical argument order so nmi(a, b) == nmi(b, a)
    // bitwise (summation order and all).
    if (std::lexicographical_compare(truth.begin(), truth.end(),
                                     pred.begin(), pred.end()))
        return nmi(truth, pred);

    ContingencyTable table = contingency(pred, truth);
    Eigen::VectorXi row_sums = table.counts.rowwise().sum();
    Eigen::VectorXi col_sums = table.counts.colwise().sum();
    double hp = entropy(row_sums, table.n);
    double ht = entropy(col_sums, table.n);

    if (hp == 0.0 || ht == 0.0) {
        return first_occurrence_form(pred) == first_occurrence_form(truth)
                   ? 1.0
                   : 0.0;
    }

    double mi = 0.0;
    const double n = table.n;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
            int c = table.counts(i, j);
            if (c == 0) continue; // 0 * log 0 := 0
            double pij = c / n;
            mi += pij * std::log(n * c / (static_cast<double>(row_sums(i)) *
                                          col_sums(j)));
        }
    }
    return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double clustering_error(const std::vector<int>& pred,
                        const std::vector<int>& truth) {
    return 1.0 - accuracy(pred, truth);
}

} // namespace l2graph
