#include "l2graph/spectral.hpp"
#include "l2graph/graph_builder.hpp"
#include "l2graph/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace l2graph {

Matrix normalized_laplacian(const SimilarityGraph& graph) {
    validate_graph(graph);
    const Matrix& w = graph.weights;
    const Eigen::Index n = w.rows();

    Vector d = w.rowwise().sum();
    Vector s(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;

    Matrix l = -(s.asDiagonal() * w * s.asDiagonal());
    l.diagonal().array() += 1.0;
    // The formula is symmetric in exact arithmetic; make it so in floats
    // too, since the eigensolver reads only one triangle.
    l = ((l + l.transpose()) * 0.5).eval();
    return l;
}

SpectralEmbedding spectral_embed(const Matrix& laplacian, int l) {
    const Eigen::Index n = laplacian.rows();
    if (laplacian.cols() != n) throw Error("Laplacian must be square");
    if (l < 1 || l > n)
        throw Error("l must be in [1, " + std::to_string(n) + "], got " +
                    std::to_string(l));

    Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian);
    if (eig.info() != Eigen::Success)
        throw Error("eigen-solver did not converge");

    SpectralEmbedding out;
    out.eigenvalues = eig.eigenvalues().head(l); // ascending already
    out.coords = eig.eigenvectors().leftCols(l);

    for (Eigen::Index j = 0; j < out.coords.cols(); ++j) {
        Eigen::Index at = 0;
        out.coords.col(j).cwiseAbs().maxCoeff(&at);
        if (out.coords(at, j) < 0.0) out.coords.col(j) = -out.coords.col(j);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double norm = out.coords.row(i).norm();
        if (norm > 0.0) out.coords.row(i) /= norm;
    }
    return out;
}

namespace {

// Greedy seeding: uniform-random first center, then repeatedly the point
// with the largest distance to its nearest chosen center (ties toward the
// lower index).
std::vector<Eigen::Index> seed_centers(const Matrix& pts, int k,
                                       std::mt19937_64& gen) {
    const Eigen::Index n = pts.rows();
    std::vector<Eigen::Index> centers;
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    centers.push_back(first(gen));

    Vector nearest = (pts.rowwise() - pts.row(centers[0]))
                         .rowwise()
                         .squaredNorm();
    while (static_cast<int>(centers.size()) < k) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (nearest(i) > nearest(best)) best = i;
        centers.push_back(best);
        Vector d = (pts.rowwise() - pts.row(best)).rowwise().squaredNorm();
        nearest = nearest.cwiseMin(d);
    }
    return centers;
}

struct LloydResult {
    std::vector<int> labels;
    double inertia = 0.0;
};

LloydResult lloyd_run(const Matrix& pts, int k, std::mt19937_64 gen,
                      int max_iterations) {
    const Eigen::Index n = pts.rows();
    Matrix centers(k, pts.cols());
    {
        auto seeds = seed_centers(pts, k, gen);
        for (int c = 0; c < k; ++c) centers.row(c) = pts.row(seeds[c]);
    }

    std::vector<int> labels(n, -1);
    for (int iter = 0; iter < max_iterations; ++iter) {
        // Assignment step (ties toward the lower center index).
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (pts.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                double d = (pts.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) { best_d = d; best = c; }
            }
            if (labels[i] != best) { labels[i] = best; changed = true; }
        }
        if (!changed) break;

        // Update step.
        Matrix sums = Matrix::Zero(k, pts.cols());
        std::vector<Eigen::Index> counts(k, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(labels[i]) += pts.row(i);
            ++counts[labels[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
            } else {
                // Re-seed an emptied cluster with the point farthest from
                // its own center; it gets reassigned next iteration.
                Eigen::Index far = 0;
                double far_d = -1.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    double d = (pts.row(i) - centers.row(labels[i])).squaredNorm();
                    if (d > far_d) { far_d = d; far = i; }
                }
                centers.row(c) = pts.row(far);
            }
        }
    }

    LloydResult out;
    out.labels = std::move(labels);
    for (Eigen::Index i = 0; i < n; ++i)
        out.inertia += (pts.row(i) - centers.row(out.labels[i])).squaredNorm();
    return out;
}

} // namespace

ClusterAssignment kmeans(const Matrix& points, int num_clusters,
                         std::uint64_t seed, const KmeansOptions& options) {
    const Eigen::Index n = points.rows();
    if (num_clusters < 1) throw Error("need at least one cluster");
    if (n < num_clusters)
        throw Error("cannot split " + std::to_string(n) + " points into " +
                    std::to_string(num_clusters) + " clusters");
    if (options.restarts < 1 || options.max_iterations < 1)
        throw Error("restarts and max_iterations must be positive");

    LloydResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < options.restarts; ++r) {
        LloydResult run = lloyd_run(points, num_clusters,
                                    substream(seed, static_cast<std::uint64_t>(r)),
                                    options.max_iterations);
        if (run.inertia < best.inertia) best = std::move(run);
    }

    ClusterAssignment out;
    out.labels = std::move(best.labels);
    out.num_clusters = num_clusters;
    out.inertia = best.inertia;
    return out;
}

ClusterAssignment spectral_cluster(const SimilarityGraph& graph, int l,
                                   std::uint64_t seed,
                                   const KmeansOptions& options) {
    Matrix lap = normalized_laplacian(graph);
    SpectralEmbedding embedding = spectral_embed(lap, l);
    return kmeans(embedding.coords, l, seed, options);
}

} // namespace l2graph
