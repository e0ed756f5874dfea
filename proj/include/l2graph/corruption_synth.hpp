#ifndef L2GRAPH_CORRUPTION_SYNTH_HPP
#define L2GRAPH_CORRUPTION_SYNTH_HPP

#include "l2graph/types.hpp"

#include <cstdint>

namespace l2graph {

enum class Dependence { Independent, SharedBasis };

struct SubspaceSpec {
    int ambient_dim = 0;
    std::vector<int> subspace_dims;
    std::vector<int> points_per_subspace;
    double noise_sigma = 0.0;
    Dependence dependence = Dependence::Independent;
    int overlap_count = 0; // shared leading basis directions (SharedBasis)
};

struct CorruptionSpec {
    enum class Kind { Gaussian, RandomPixel } kind = Kind::Gaussian;
    double ratio = 0.0;               // noise scale alpha / corrupted fraction of coords
    double fraction_of_samples = 1.0; // share of columns hit
    double pixel_max = 255.0;         // gaussian model only
    std::uint64_t seed = 0;
};

// Draws points from a union of linear subspaces: per subspace an
// orthonormal basis (disjoint coordinate blocks when independent, a common
// leading block when shared), standard-normal coefficients, optional
// isotropic noise.  Columns are l2-normalized; labels give the subspace.
DataMatrix sample_union_of_subspaces(const SubspaceSpec& spec,
                                     std::uint64_t seed);

// Adds ratio * pixel_max * N(0,1) noise to every entry of the selected
// sample columns, then clamps back into [0, pixel_max].  Input entries
// must already lie in that range.
DataMatrix add_gaussian(const DataMatrix& data, double ratio,
                        double fraction_of_samples, double pixel_max,
                        std::uint64_t seed);

// Replaces ceil(ratio * m) coordinates (chosen without replacement) of
// each selected sample with uniform draws over [0, p_max], where p_max is
// that sample's maximum entry.
DataMatrix random_pixel_corrupt(const DataMatrix& data, double ratio,
                                double fraction_of_samples,
                                std::uint64_t seed);

// Rigid-motion trajectory analogue: each motion's 2F-dimensional
// trajectories are drawn from a random rank-4 basis.
DataMatrix synth_trajectories(int num_motions, int frames,
                              int points_per_motion, double noise,
                              std::uint64_t seed);

// Both corruption models randomize per sample from a substream keyed by
// the column index, so corrupting and permuting columns commute once the
// key follows the permutation.  These overloads let callers (and the
// property tests) supply the key explicitly; index_map[j] is the substream
// key for column j.
DataMatrix add_gaussian(const DataMatrix& data, double ratio,
                        double fraction_of_samples, double pixel_max,
                        std::uint64_t seed,
                        const std::vector<std::uint64_t>& index_map);
DataMatrix random_pixel_corrupt(const DataMatrix& data, double ratio,
                                double fraction_of_samples,
                                std::uint64_t seed,
                                const std::vector<std::uint64_t>& index_map);

} // namespace l2graph

#endif
