#ifndef L2GRAPH_TESTS_SUPPORT_HPP
#define L2GRAPH_TESTS_SUPPORT_HPP

// Shared helpers for the test binaries: scratch-directory management,
// small data generators, and independent oracles (deliberately written
// against different algorithms / factorizations than the library uses, so
// an agreement between the two is evidence rather than tautology).

#include "l2graph/rng.hpp"
#include "l2graph/types.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace testsup {

using l2graph::Matrix;
using l2graph::Vector;

// ---------------------------------------------------------------------------
// scratch files

// Self-cleaning directory under the system temp root.  Each test that
// touches the filesystem makes one of these so parallel binaries cannot
// collide.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        std::ostringstream name;
        name << "l2graph-test-" << ::getpid() << "-"
             << counter.fetch_add(1);
        path = std::filesystem::temp_directory_path() / name.str();
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// generators

inline Matrix random_matrix(std::mt19937_64& gen, Eigen::Index m,
                            Eigen::Index n) {
    std::normal_distribution<double> normal;
    Matrix a(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i) a(i, j) = normal(gen);
    return a;
}

// Exact-rank-r matrix as a product of two gaussian factors.
inline Matrix random_rank_matrix(std::mt19937_64& gen, Eigen::Index m,
                                 Eigen::Index n, Eigen::Index r) {
    return random_matrix(gen, m, r) * random_matrix(gen, r, n);
}

inline Matrix random_orthonormal(std::mt19937_64& gen, Eigen::Index m,
                                 Eigen::Index r) {
    Matrix a = random_matrix(gen, m, r);
    Eigen::HouseholderQR<Matrix> qr(a);
    return Matrix(qr.householderQ()).leftCols(r);
}

// Two tight 1-D clusters of `n_per` points each on a circle in the plane:
// cluster centers at radius ~2 with 70-110 degrees between them, each
// cluster a short segment tilted 20-70 degrees off the tangential
// direction so that point norms vary along it.  The inter-cluster gap is
// at least the chord 2*1.8*sin(35 deg) ~ 2.06, more than 5x the in-cluster
// spread of 0.35.
inline l2graph::DataMatrix fig1_clusters(std::uint64_t seed, int n_per = 10,
                                         double spread = 0.35) {
    const double pi = std::acos(-1.0);
    std::mt19937_64 gen = l2graph::substream(seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto pick_sign = [&] { return unit(gen) < 0.5 ? -1.0 : 1.0; };
    double phi_a = unit(gen) * 2.0 * pi;
    double dphi = (70.0 + 40.0 * unit(gen)) * pi / 180.0 * pick_sign();
    double phi_b = phi_a + dphi;
    double ra = 1.8 + 0.6 * unit(gen);
    double rb = 1.8 + 0.6 * unit(gen);

    l2graph::DataMatrix data;
    data.values.resize(2, 2 * n_per);
    data.labels = std::vector<int>(2 * n_per);
    const double step = spread / (n_per - 1);

    const double phis[2] = {phi_a, phi_b};
    const double radii[2] = {ra, rb};
    for (int c = 0; c < 2; ++c) {
        Eigen::Vector2d radial(std::cos(phis[c]), std::sin(phis[c]));
        Eigen::Vector2d tang(-std::sin(phis[c]), std::cos(phis[c]));
        double beta = (20.0 + 50.0 * unit(gen)) * pi / 180.0 * pick_sign();
        Eigen::Vector2d seg =
            std::cos(beta) * tang + std::sin(beta) * radial;
        for (int i = 0; i < n_per; ++i) {
            double pos = -spread / 2.0 + step * i +
                         (unit(gen) - 0.5) * step / 2.0;
            data.values.col(c * n_per + i) = radii[c] * radial + pos * seg;
            (*data.labels)[c * n_per + i] = c;
        }
    }
    data.name = "fig1";
    return data;
}

// ---------------------------------------------------------------------------
// oracles

// Ridge coefficients for sample i by the definition itself: zero column i
// of the dictionary and solve the m-regularized normal equations directly.
// Uses LDLT (the library inverts one shared LLT factor), so the numerics
// take a different route.
inline Vector ridge_oracle_column(const Matrix& y, double lambda,
                                  Eigen::Index i) {
    Matrix dict = y;
    dict.col(i).setZero();
    Matrix gram = dict.transpose() * dict;
    gram.diagonal().array() += lambda;
    return gram.ldlt().solve(dict.transpose() * y.col(i));
}

// Clustering accuracy by exhausting every bijection between cluster label
// sets (feasible for <= ~6 clusters).  Both oracles and the library divide
// an integer match count by n, so agreement can be checked exactly.
inline double brute_force_accuracy(const std::vector<int>& pred,
                                   const std::vector<int>& truth) {
    auto canon = [](const std::vector<int>& v) {
        std::vector<int> sorted(v), out(v.size());
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (size_t i = 0; i < v.size(); ++i)
            out[i] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), v[i]) -
                sorted.begin());
        return out;
    };
    std::vector<int> p = canon(pred), t = canon(truth);
    int kp = *std::max_element(p.begin(), p.end()) + 1;
    int kt = *std::max_element(t.begin(), t.end()) + 1;
    int k = std::max(kp, kt);

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    long best = 0;
    do {
        long matches = 0;
        for (size_t i = 0; i < p.size(); ++i)
            if (perm[p[i]] == t[i]) ++matches;
        best = std::max(best, matches);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(p.size());
}

// Minimum assignment cost by exhausting row-to-column injections
// (reference for the library's Hungarian implementation).
inline double brute_force_assignment_cost(const Matrix& cost) {
    bool transpose = cost.rows() > cost.cols();
    Matrix c = transpose ? cost.transpose() : cost;
    std::vector<int> cols(c.cols());
    std::iota(cols.begin(), cols.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (Eigen::Index r = 0; r < c.rows(); ++r) total += c(r, cols[r]);
        best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

// Connected components of the positive-weight pattern, by union-find.
inline int component_count(const Matrix& weights) {
    const Eigen::Index n = weights.rows();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (weights(i, j) > 0.0) parent[find(static_cast<int>(i))] =
                find(static_cast<int>(j));
    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (find(static_cast<int>(i)) == i) ++count;
    return count;
}

// Total edge weight crossing the ground-truth partition.
inline double inter_cluster_weight(const Matrix& weights,
                                   const std::vector<int>& labels) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < weights.rows(); ++i)
        for (Eigen::Index j = i + 1; j < weights.cols(); ++j)
            if (labels[i] != labels[j]) total += std::abs(weights(i, j));
    return total;
}

// k-means objective of an assignment with centers at the cluster means.
inline double inertia_of_assignment(const Matrix& points,
                                    const std::vector<int>& labels, int k) {
    Matrix centers = Matrix::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        centers.row(labels[i]) += points.row(i);
        ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c)
        if (counts[c] > 0) centers.row(c) /= counts[c];
    double total = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        total += (points.row(i) - centers.row(labels[i])).squaredNorm();
    return total;
}

// Globally optimal k-means inertia by enumerating every assignment
// (only for tiny n).
inline double brute_force_kmeans_inertia(const Matrix& points, int k) {
    const Eigen::Index n = points.rows();
    std::vector<int> labels(n, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        best = std::min(best, inertia_of_assignment(points, labels,
                                                    k));
        Eigen::Index pos = 0;
        while (pos < n && labels[pos] == k - 1) labels[pos++] = 0;
        if (pos == n) break;
        ++labels[pos];
    }
    return best;
}

// Affine-constrained local reconstruction weights via the KKT system of
//   min ||y - N c||^2  s.t.  1'c = 1
// (the library goes through the shifted local Gram matrix instead).
inline Vector lle_oracle_weights(const Matrix& neighbors, const Vector& y) {
    const Eigen::Index k = neighbors.cols();
    Matrix kkt = Matrix::Zero(k + 1, k + 1);
    kkt.topLeftCorner(k, k) = 2.0 * neighbors.transpose() * neighbors;
    kkt.topRightCorner(k, 1).setOnes();
    kkt.bottomLeftCorner(1, k).setOnes();
    Vector rhs(k + 1);
    rhs.head(k) = 2.0 * neighbors.transpose() * y;
    rhs(k) = 1.0;
    Vector sol = kkt.fullPivLu().solve(rhs);
    return sol.head(k);
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace testsup

#endif
