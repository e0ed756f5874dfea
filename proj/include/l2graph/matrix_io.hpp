#ifndef L2GRAPH_MATRIX_IO_HPP
#define L2GRAPH_MATRIX_IO_HPP

#include "l2graph/types.hpp"

#include <utility>

namespace l2graph {

enum class Orientation { SamplesAsRows, SamplesAsColumns };

// CSV matrix file: one row per line, comma separated, '#' comment lines
// ignored, no header.  Values are written with enough digits (%.17g) that
// save -> load round-trips bit-exactly.

// Loads a matrix; the result always stores samples as columns.  A sibling
// file "<path>.labels" (one integer per line) is picked up automatically
// and canonicalized to 0-based contiguous values.
DataMatrix load_matrix(const std::string& path, Orientation orientation);

// `comments` are emitted as '#' lines before the data.
void save_matrix(const Matrix& values, const std::string& path,
                 const std::vector<std::string>& comments = {});
void save_data(const DataMatrix& data, const std::string& path,
               const std::vector<std::string>& comments = {});

std::vector<int> load_labels(const std::string& path);
void save_labels(const std::vector<int>& labels, const std::string& path);

// Graph files are the same CSV carrying the full dense n x n weight
// matrix, with a provenance header like "# builder=l2 lambda=0.1 k=5".
// Loading validates symmetry, non-negativity and a zero diagonal.
void save_graph(const SimilarityGraph& graph, const std::string& path);
SimilarityGraph load_graph(const std::string& path);

// PCA on columns-as-samples data: center, decompose, keep the smallest
// number of leading components whose variance sum reaches energy_kept of
// the total.  Component signs are fixed (largest-magnitude entry positive)
// so results are reproducible.
std::pair<PcaModel, DataMatrix> pca_fit_transform(const DataMatrix& data,
                                                  double energy_kept);

// Maps arbitrary integer labels onto 0..l-1 in numeric order.  Used
// everywhere labels enter the system.
std::vector<int> canonicalize_labels(const std::vector<int>& labels);

} // namespace l2graph

#endif
