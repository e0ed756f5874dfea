#include "l2graph/graph_builder.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace l2graph {

CoefficientMatrix l2_coefficients(const DataMatrix& data, double lambda,
                                  bool normalize) {
    if (lambda < 0.0) throw Error("lambda must be non-negative");
    const Matrix& y = data.values;
    const Eigen::Index n = y.cols();
    if (n < 2) throw Error("need at least 2 samples");

    if (lambda == 0.0 && n > y.rows())
        throw Error("Y'Y is singular for n > m; use lambda > 0");

    Matrix gram = y.transpose() * y;
    Matrix reg = gram;
    reg.diagonal().array() += lambda;

    Eigen::LLT<Matrix> llt(reg);
    if (llt.info() != Eigen::Success)
        throw Error("Y'Y + lambda*I is not positive definite; use lambda > 0");

    // P = (Y'Y + lambda I)^{-1}; P Y'Y = I - lambda P, so both pieces of
    // the closed form come from the one factorization.
    Matrix p = llt.solve(Matrix::Identity(n, n));

    CoefficientMatrix out;
    out.values.resize(n, n);
    out.lambda = lambda;
    for (Eigen::Index i = 0; i < n; ++i) {
        // q = P Y'y_i = (I - lambda P) e_i
        Vector q = -lambda * p.col(i);
        q(i) += 1.0;
        out.values.col(i) = q - (q(i) / p(i, i)) * p.col(i);
        out.values(i, i) = 0.0; // exact zero; drop rounding residue
    }

    if (normalize) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double norm = out.values.col(i).norm();
            if (norm > 0.0) out.values.col(i) /= norm;
        }
        out.normalized = true;
    }
    return out;
}

CoefficientMatrix threshold_topk(const CoefficientMatrix& coeffs, int k) {
    const Eigen::Index n = coeffs.values.cols();
    if (k < 0 || k > n - 1)
        throw Error("k must be in [0, " + std::to_string(n - 1) + "], got " +
                    std::to_string(k));

    CoefficientMatrix out = coeffs;
    std::vector<Eigen::Index> idx(static_cast<size_t>(coeffs.values.rows()));
    for (Eigen::Index j = 0; j < n; ++j) {
        std::iota(idx.begin(), idx.end(), Eigen::Index{0});
        // Larger magnitude first; ties toward the lower row index.
        std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                          [&](Eigen::Index a, Eigen::Index b) {
                              double ma = std::abs(coeffs.values(a, j));
                              double mb = std::abs(coeffs.values(b, j));
                              if (ma != mb) return ma > mb;
                              return a < b;
                          });
        Vector col = Vector::Zero(coeffs.values.rows());
        for (int r = 0; r < k; ++r) col(idx[r]) = coeffs.values(idx[r], j);
        out.values.col(j) = col;
    }
    return out;
}

SimilarityGraph symmetrize(const CoefficientMatrix& coeffs) {
    const Matrix& c = coeffs.values;
    if (c.rows() != c.cols()) throw Error("coefficient matrix must be square");
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        if (c(i, i) != 0.0)
            throw Error("coefficient diagonal must be zero (row " +
                        std::to_string(i) + ")");

    SimilarityGraph g;
    g.weights = Matrix::Zero(c.rows(), c.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < c.cols(); ++j) {
            double w = std::abs(c(i, j)) + std::abs(c(j, i));
            g.weights(i, j) = w;
            g.weights(j, i) = w;
        }
    }
    return g;
}

SimilarityGraph build_l2_graph(const DataMatrix& data, double lambda, int k) {
    SimilarityGraph g =
        symmetrize(threshold_topk(l2_coefficients(data, lambda), k));
    g.builder = GraphBuilder::L2;
    g.params.lambda = lambda;
    g.params.k = k;
    return g;
}

namespace {

// Indices of the k nearest neighbors of sample i (self excluded), with
// distance ties broken toward the lower index.
std::vector<Eigen::Index> knn_of(const Matrix& sqdist, Eigen::Index i, int k) {
    std::vector<Eigen::Index> idx;
    idx.reserve(static_cast<size_t>(sqdist.rows()) - 1);
    for (Eigen::Index j = 0; j < sqdist.rows(); ++j)
        if (j != i) idx.push_back(j);
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          if (sqdist(a, i) != sqdist(b, i))
                              return sqdist(a, i) < sqdist(b, i);
                          return a < b;
                      });
    idx.resize(static_cast<size_t>(k));
    return idx;
}

Matrix pairwise_sqdist(const Matrix& y) {
    Vector sq = y.colwise().squaredNorm();
    Matrix d = sq.replicate(1, y.cols()) + sq.transpose().replicate(y.cols(), 1)
               - 2.0 * (y.transpose() * y);
    return d.cwiseMax(0.0); // clamp the tiny negatives rounding produces
}

} // namespace

SimilarityGraph build_gaussian_graph(const DataMatrix& data, double tau, int k) {
    if (tau <= 0.0) throw Error("tau must be positive");
    const Eigen::Index n = data.samples();
    if (k < 1 || k > n - 1)
        throw Error("k must be in [1, " + std::to_string(n - 1) + "], got " +
                    std::to_string(k));

    Matrix sqdist = pairwise_sqdist(data.values);
    SimilarityGraph g;
    g.builder = GraphBuilder::Gaussian;
    g.params.tau = tau;
    g.params.k = k;
    g.weights = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // Union rule: the edge exists if either endpoint picks the other,
        // which keeps the graph symmetric by construction.
        for (Eigen::Index j : knn_of(sqdist, i, k)) {
            double w = std::exp(-sqdist(i, j) / tau);
            g.weights(i, j) = w;
            g.weights(j, i) = w;
        }
    }
    return g;
}

SimilarityGraph build_lle_graph(const DataMatrix& data, int k) {
    const Eigen::Index n = data.samples();
    if (k < 1 || k > n - 1)
        throw Error("k must be in [1, " + std::to_string(n - 1) + "], got " +
                    std::to_string(k));

    const Matrix& y = data.values;
    Matrix sqdist = pairwise_sqdist(y);
    CoefficientMatrix coeffs;
    coeffs.values = Matrix::Zero(n, n);

    for (Eigen::Index i = 0; i < n; ++i) {
        auto nbrs = knn_of(sqdist, i, k);
        Matrix diff(y.rows(), k);
        for (int a = 0; a < k; ++a) diff.col(a) = y.col(nbrs[a]) - y.col(i);

        Matrix gram = diff.transpose() * diff;
        double tr = gram.trace();
        Vector c;
        if (tr > 0.0) {
            // Small ridge keeps degenerate neighborhoods solvable; the
            // sum-to-one rescale removes its first-order effect.
            gram.diagonal().array() += 1e-9 * tr;
            c = gram.ldlt().solve(Vector::Ones(k));
        } else {
            // All neighbors coincide with the point; any convex weights
            // reconstruct it, so fall back to uniform ones.
            c = Vector::Ones(k);
        }
        double sum = c.sum();
        if (std::abs(sum) < 1e-12 || !c.allFinite())
            c = Vector::Ones(k); // pathological geometry; uniform fallback
        c /= c.sum();

        for (int a = 0; a < k; ++a) coeffs.values(nbrs[a], i) = c(a);
    }

    SimilarityGraph g = symmetrize(coeffs);
    g.builder = GraphBuilder::Lle;
    g.params.k = k;
    return g;
}

void validate_graph(const SimilarityGraph& graph) {
    const Matrix& w = graph.weights;
    if (w.rows() != w.cols()) throw Error("graph weights must be square");
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        if (w(i, i) != 0.0)
            throw Error("graph diagonal must be zero (row " + std::to_string(i) + ")");
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            if (w(i, j) < 0.0)
                throw Error("graph weights must be non-negative");
            if (w(i, j) != w(j, i))
                throw Error("graph weights must be symmetric");
        }
    }
}

} // namespace l2graph
