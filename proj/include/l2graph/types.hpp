#ifndef L2GRAPH_TYPES_HPP
#define L2GRAPH_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace l2graph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// All recoverable failures (bad input, unmet precondition, degenerate data)
// surface as this exception; the CLI maps it to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A dataset: samples are stored as columns of `values` (m = ambient
// dimension, n = number of samples).  Labels, when present, are 0-based
// and contiguous.
struct DataMatrix {
    Matrix values;
    std::optional<std::vector<int>> labels;
    std::string name;

    Eigen::Index dim() const { return values.rows(); }
    Eigen::Index samples() const { return values.cols(); }
};

// Per-column reconstruction coefficients: entry (j, i) is the weight of
// sample j in the representation of sample i.  Diagonal is identically
// zero (a point never represents itself).
struct CoefficientMatrix {
    Matrix values;
    double lambda = 0.0;
    bool normalized = false;
};

enum class GraphBuilder { L2, Gaussian, Lle };

struct GraphParams {
    double lambda = 0.0; // ridge regularizer (l2 builder)
    int k = 0;           // kept coefficients / nearest-neighbor count
    double tau = 0.0;    // heat-kernel bandwidth (gaussian builder)
};

// Symmetric non-negative affinity matrix with zero diagonal, plus a
// record of how it was built (round-trips through the graph file header).
struct SimilarityGraph {
    Matrix weights;
    GraphBuilder builder = GraphBuilder::L2;
    GraphParams params;

    Eigen::Index size() const { return weights.rows(); }
};

struct ClusterAssignment {
    std::vector<int> labels;
    int num_clusters = 0;
    double inertia = 0.0; // k-means objective at convergence
};

struct SpectralEmbedding {
    Matrix coords;      // n x l, rows are embedded points (unit or zero)
    Vector eigenvalues; // ascending, length l
};

struct EmbeddingModel {
    Matrix theta;       // m x d projection
    Vector eigenvalues; // ascending pencil eigenvalues, length d
    GraphParams graph_params;
};

struct PcaModel {
    Vector mean;
    Matrix basis; // m x p, orthonormal columns, variance-descending
    double energy_kept = 0.0;
};

const char* builder_name(GraphBuilder b);
GraphBuilder builder_from_name(const std::string& name);

} // namespace l2graph

#endif
