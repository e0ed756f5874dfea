#include "l2graph/embedding.hpp"
#include "l2graph/graph_builder.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace l2graph {

EmbeddingModel npe_embed(const DataMatrix& data, const SimilarityGraph& graph,
                         int d) {
    const Matrix& y = data.values;
    const Eigen::Index n = y.cols();
    if (graph.weights.rows() != n)
        throw Error("graph size does not match sample count");
    if (d < 1) throw Error("d must be positive");

    Matrix iw = Matrix::Identity(n, n) - graph.weights;
    Matrix m = iw.transpose() * iw;
    Matrix a = y * m * y.transpose();
    a = ((a + a.transpose()) * 0.5).eval();
    Matrix b = y * y.transpose();
    b = ((b + b.transpose()) * 0.5).eval();

    // Whiten on the numerical range of YY' (rank-deficient for
    // small-sample data), turning the pencil into an ordinary symmetric
    // eigenproblem.
    Eigen::SelfAdjointEigenSolver<Matrix> beig(b);
    if (beig.info() != Eigen::Success)
        throw Error("eigen-solver did not converge on YY'");
    const Vector& mu = beig.eigenvalues(); // ascending
    double mu_max = mu(mu.size() - 1);
    if (mu_max <= 0.0) throw Error("YY' is zero; no data to embed");

    Eigen::Index first = 0;
    while (first < mu.size() && mu(first) <= 1e-10 * mu_max) ++first;
    const Eigen::Index r = mu.size() - first;
    if (d > r)
        throw Error("d = " + std::to_string(d) + " exceeds rank(YY') = " +
                    std::to_string(r));

    Matrix t = beig.eigenvectors().rightCols(r);
    for (Eigen::Index j = 0; j < r; ++j)
        t.col(j) /= std::sqrt(mu(first + j));

    Matrix s = t.transpose() * a * t;
    s = ((s + s.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> seig(s);
    if (seig.info() != Eigen::Success)
        throw Error("eigen-solver did not converge on the whitened pencil");
    const Vector& nu = seig.eigenvalues(); // ascending

    // "Smallest nonzero" filter, relative to the largest pencil
    // eigenvalue.  If nothing clears the threshold the objective is zero
    // in every direction (e.g. each sample is reconstructed exactly) and
    // every eigenpair is equally valid, so keep them all.
    double nu_max = nu(nu.size() - 1);
    double threshold = 1e-10 * std::max(nu_max, 0.0);
    Eigen::Index keep_from = 0;
    while (keep_from < nu.size() && nu(keep_from) <= threshold) ++keep_from;
    if (keep_from == nu.size()) keep_from = 0;

    Eigen::Index available = nu.size() - keep_from;
    if (d > available)
        throw Error("d = " + std::to_string(d) + " exceeds the " +
                    std::to_string(available) +
                    " eigenpairs above the zero tolerance");

    EmbeddingModel model;
    model.theta = t * seig.eigenvectors().middleCols(keep_from, d);
    model.eigenvalues = nu.segment(keep_from, d);
    model.graph_params = graph.params;

    // Deterministic sign: largest-magnitude entry of each column positive.
    for (Eigen::Index j = 0; j < model.theta.cols(); ++j) {
        Eigen::Index at = 0;
        model.theta.col(j).cwiseAbs().maxCoeff(&at);
        if (model.theta(at, j) < 0.0) model.theta.col(j) = -model.theta.col(j);
    }
    return model;
}

DataMatrix transform(const EmbeddingModel& model, const DataMatrix& data) {
    if (data.values.rows() != model.theta.rows())
        throw Error("dimension mismatch: data has " +
                    std::to_string(data.values.rows()) + " rows, model expects " +
                    std::to_string(model.theta.rows()));
    DataMatrix out;
    out.values = model.theta.transpose() * data.values;
    out.labels = data.labels;
    out.name = data.name;
    return out;
}

std::vector<int> nn_classify(const DataMatrix& train, const DataMatrix& test) {
    if (!train.labels) throw Error("training data has no labels");
    if (train.samples() == 0) throw Error("empty training set");
    if (train.dim() != test.dim())
        throw Error("train/test dimension mismatch");

    const Matrix& a = train.values;
    const Matrix& b = test.values;
    std::vector<int> out(static_cast<size_t>(b.cols()));
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        Eigen::Index best = 0;
        double best_d = (a.col(0) - b.col(j)).squaredNorm();
        for (Eigen::Index i = 1; i < a.cols(); ++i) {
            double d = (a.col(i) - b.col(j)).squaredNorm();
            if (d < best_d) { best_d = d; best = i; }
        }
        out[static_cast<size_t>(j)] = (*train.labels)[static_cast<size_t>(best)];
    }
    return out;
}

AccuracyTable evaluate_subspace_learning(const DataMatrix& train,
                                         const DataMatrix& test,
                                         const GraphParams& graph_params,
                                         const std::vector<int>& d_grid) {
    if (!train.labels) throw Error("training data has no labels");
    if (!test.labels) throw Error("test data has no labels");
    if (d_grid.empty()) throw Error("empty dimension grid");

    SimilarityGraph graph =
        build_l2_graph(train, graph_params.lambda, graph_params.k);

    AccuracyTable table;
    table.best_accuracy = -1.0;
    for (int d : d_grid) {
        EmbeddingModel model = npe_embed(train, graph, d);
        DataMatrix tr = transform(model, train);
        DataMatrix te = transform(model, test);
        std::vector<int> pred = nn_classify(tr, te);
        // Classification accuracy: predictions share the training label
        // space, so plain agreement is the right score (no cluster
        // matching here).
        size_t hits = 0;
        for (size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == (*test.labels)[i]) ++hits;
        double acc = static_cast<double>(hits) / pred.size();
        table.rows.push_back({d, acc});
        if (acc > table.best_accuracy) { // ties keep the earlier grid entry
            table.best_accuracy = acc;
            table.best_d = d;
        }
    }
    return table;
}

} // namespace l2graph
