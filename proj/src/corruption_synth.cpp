#include "l2graph/corruption_synth.hpp"
#include "l2graph/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace l2graph {

namespace {

void validate_spec(const SubspaceSpec& spec) {
    if (spec.ambient_dim < 1) throw Error("ambient dimension must be positive");
    if (spec.subspace_dims.empty()) throw Error("no subspaces requested");
    if (spec.subspace_dims.size() != spec.points_per_subspace.size())
        throw Error("subspace_dims and points_per_subspace differ in length");
    if (spec.noise_sigma < 0.0) throw Error("noise sigma must be non-negative");

    int total = 0;
    for (int r : spec.subspace_dims) {
        if (r < 1) throw Error("subspace dimensions must be at least 1");
        total += r;
    }
    for (int p : spec.points_per_subspace)
        if (p < 1) throw Error("points per subspace must be at least 1");

    if (spec.dependence == Dependence::Independent) {
        if (total > spec.ambient_dim)
            throw Error("subspace dimensions sum to " + std::to_string(total) +
                        " > ambient dimension " + std::to_string(spec.ambient_dim));
    } else {
        if (spec.overlap_count < 1)
            throw Error("shared-basis mode needs overlap_count >= 1");
        for (int r : spec.subspace_dims)
            if (spec.overlap_count > r)
                throw Error("overlap_count exceeds a subspace dimension");
        // Shared block + per-subspace private blocks must fit.
        int priv = 0;
        for (int r : spec.subspace_dims) priv += r - spec.overlap_count;
        if (spec.overlap_count + priv > spec.ambient_dim)
            throw Error("shared-basis frame does not fit the ambient dimension");
    }
}

Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols,
                          std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    Matrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = normal(gen);
    Eigen::HouseholderQR<Matrix> qr(a);
    return Matrix(qr.householderQ()).leftCols(cols);
}

void normalize_columns(Matrix& y) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
        double norm = y.col(j).norm();
        if (norm > 0.0) y.col(j) /= norm;
    }
}

} // namespace

DataMatrix sample_union_of_subspaces(const SubspaceSpec& spec,
                                     std::uint64_t seed) {
    validate_spec(spec);
    const int m = spec.ambient_dim;
    const size_t l = spec.subspace_dims.size();

    // A shared frame is drawn once from its own substream so that per-
    // subspace draws stay independent of subspace count.
    Matrix shared;
    if (spec.dependence == Dependence::SharedBasis) {
        auto gen = substream(seed, 0xf5a3e0ULL);
        shared = random_orthonormal(m, spec.overlap_count, gen);
    }

    int total_points = std::accumulate(spec.points_per_subspace.begin(),
                                       spec.points_per_subspace.end(), 0);
    DataMatrix out;
    out.values.resize(m, total_points);
    out.labels = std::vector<int>(static_cast<size_t>(total_points));
    out.name = "union";

    int offset = 0; // coordinate offset (independent mode)
    int at = 0;     // next output column
    for (size_t s = 0; s < l; ++s) {
        const int r = spec.subspace_dims[s];
        const int pts = spec.points_per_subspace[s];
        auto gen = substream(seed, s);
        // normal_distribution caches a spare draw, so the object must not
        // be shared between substreams.
        std::normal_distribution<double> normal;

        Matrix basis = Matrix::Zero(m, r);
        if (spec.dependence == Dependence::Independent) {
            // Disjoint coordinate blocks make the subspaces independent by
            // construction (and keep Y'Y block diagonal for clean data).
            basis.block(offset, 0, r, r) = random_orthonormal(r, r, gen);
            offset += r;
        } else {
            const int priv = r - spec.overlap_count;
            basis.leftCols(spec.overlap_count) = shared;
            if (priv > 0) {
                // Draw the private directions and orthogonalize them
                // against the shared block so the basis stays orthonormal.
                Matrix raw(m, priv);
                for (Eigen::Index j = 0; j < priv; ++j)
                    for (Eigen::Index i = 0; i < m; ++i) raw(i, j) = normal(gen);
                raw -= shared * (shared.transpose() * raw);
                Eigen::HouseholderQR<Matrix> qr(raw);
                basis.rightCols(priv) = Matrix(qr.householderQ()).leftCols(priv);
            }
        }

        Matrix coeff(r, pts);
        for (Eigen::Index j = 0; j < pts; ++j)
            for (Eigen::Index i = 0; i < r; ++i) coeff(i, j) = normal(gen);
        Matrix block = basis * coeff;
        if (spec.noise_sigma > 0.0)
            for (Eigen::Index j = 0; j < pts; ++j)
                for (Eigen::Index i = 0; i < m; ++i)
                    block(i, j) += spec.noise_sigma * normal(gen);

        out.values.middleCols(at, pts) = block;
        std::fill_n(out.labels->begin() + at, pts, static_cast<int>(s));
        at += pts;
    }

    normalize_columns(out.values);
    return out;
}

namespace {

std::vector<std::uint64_t> identity_map(Eigen::Index n) {
    std::vector<std::uint64_t> map(static_cast<size_t>(n));
    std::iota(map.begin(), map.end(), std::uint64_t{0});
    return map;
}

void check_map(const std::vector<std::uint64_t>& map, Eigen::Index n) {
    if (static_cast<Eigen::Index>(map.size()) != n)
        throw Error("index map length does not match sample count");
}

void check_fraction(double ratio, double fraction) {
    if (ratio < 0.0 || ratio > 1.0) throw Error("ratio must be in [0, 1]");
    if (fraction < 0.0 || fraction > 1.0)
        throw Error("fraction_of_samples must be in [0, 1]");
}

} // namespace

DataMatrix add_gaussian(const DataMatrix& data, double ratio,
                        double fraction_of_samples, double pixel_max,
                        std::uint64_t seed,
                        const std::vector<std::uint64_t>& index_map) {
    check_fraction(ratio, fraction_of_samples);
    if (pixel_max <= 0.0) throw Error("pixel_max must be positive");
    check_map(index_map, data.samples());
    if ((data.values.array() < 0.0).any() ||
        (data.values.array() > pixel_max).any())
        throw Error("entries must lie in [0, pixel_max] before corruption");

    DataMatrix out = data;
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        auto gen = substream(seed, index_map[static_cast<size_t>(j)]);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> normal; // stateful; keep per-stream
        // The selection draw comes first so a sample's fate never depends
        // on how much randomness other samples consumed.
        if (unit(gen) >= fraction_of_samples) continue;
        for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
            double v = out.values(i, j) + ratio * pixel_max * normal(gen);
            out.values(i, j) = std::clamp(v, 0.0, pixel_max);
        }
    }
    return out;
}

DataMatrix add_gaussian(const DataMatrix& data, double ratio,
                        double fraction_of_samples, double pixel_max,
                        std::uint64_t seed) {
    return add_gaussian(data, ratio, fraction_of_samples, pixel_max, seed,
                        identity_map(data.samples()));
}

DataMatrix random_pixel_corrupt(const DataMatrix& data, double ratio,
                                double fraction_of_samples,
                                std::uint64_t seed,
                                const std::vector<std::uint64_t>& index_map) {
    check_fraction(ratio, fraction_of_samples);
    check_map(index_map, data.samples());

    DataMatrix out = data;
    const Eigen::Index m = out.values.rows();
    const auto count = static_cast<Eigen::Index>(
        std::ceil(ratio * static_cast<double>(m)));

    std::vector<Eigen::Index> coords(static_cast<size_t>(m));
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        auto gen = substream(seed, index_map[static_cast<size_t>(j)]);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        if (unit(gen) >= fraction_of_samples || count == 0) continue;

        // Partial Fisher-Yates: the first `count` slots end up holding a
        // uniform sample of coordinates without replacement.
        std::iota(coords.begin(), coords.end(), Eigen::Index{0});
        for (Eigen::Index a = 0; a < count; ++a) {
            std::uniform_int_distribution<Eigen::Index> pick(a, m - 1);
            std::swap(coords[static_cast<size_t>(a)],
                      coords[static_cast<size_t>(pick(gen))]);
        }

        double p_max = out.values.col(j).maxCoeff();
        // Pixel data has p_max > 0; for signed data keep the draw interval
        // well-formed by spanning [min(0, p_max), max(0, p_max)].
        std::uniform_real_distribution<double> value(std::min(0.0, p_max),
                                                     std::max(0.0, p_max));
        for (Eigen::Index a = 0; a < count; ++a)
            out.values(coords[static_cast<size_t>(a)], j) = value(gen);
    }
    return out;
}

DataMatrix random_pixel_corrupt(const DataMatrix& data, double ratio,
                                double fraction_of_samples,
                                std::uint64_t seed) {
    return random_pixel_corrupt(data, ratio, fraction_of_samples, seed,
                                identity_map(data.samples()));
}

DataMatrix synth_trajectories(int num_motions, int frames,
                              int points_per_motion, double noise,
                              std::uint64_t seed) {
    if (num_motions < 1) throw Error("need at least one motion");
    if (frames < 3) throw Error("need at least 3 frames");
    if (points_per_motion < 1) throw Error("need at least one point per motion");
    if (noise < 0.0) throw Error("noise must be non-negative");

    const Eigen::Index dim = 2 * static_cast<Eigen::Index>(frames);
    const int rank = 4; // rigid motion under an affine camera
    DataMatrix out;
    out.values.resize(dim, static_cast<Eigen::Index>(num_motions) *
                               points_per_motion);
    out.labels =
        std::vector<int>(static_cast<size_t>(num_motions * points_per_motion));
    out.name = "trajectories";

    for (int s = 0; s < num_motions; ++s) {
        auto gen = substream(seed, static_cast<std::uint64_t>(s));
        std::normal_distribution<double> normal; // stateful; keep per-stream
        Matrix basis = random_orthonormal(dim, rank, gen);
        Matrix coeff(rank, points_per_motion);
        for (Eigen::Index j = 0; j < points_per_motion; ++j)
            for (Eigen::Index i = 0; i < rank; ++i) coeff(i, j) = normal(gen);
        Matrix block = basis * coeff;
        if (noise > 0.0)
            for (Eigen::Index j = 0; j < block.cols(); ++j)
                for (Eigen::Index i = 0; i < block.rows(); ++i)
                    block(i, j) += noise * normal(gen);

        out.values.middleCols(static_cast<Eigen::Index>(s) * points_per_motion,
                              points_per_motion) = block;
        std::fill_n(out.labels->begin() +
                        static_cast<size_t>(s) * points_per_motion,
                    points_per_motion, s);
    }
    return out;
}

} // namespace l2graph
