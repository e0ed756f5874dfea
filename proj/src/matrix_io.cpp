#include "l2graph/matrix_io.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace l2graph {

const char* builder_name(GraphBuilder b) {
    switch (b) {
    case GraphBuilder::L2: return "l2";
    case GraphBuilder::Gaussian: return "gaussian";
    case GraphBuilder::Lle: return "lle";
    }
    return "l2";
}

GraphBuilder builder_from_name(const std::string& name) {
    if (name == "l2") return GraphBuilder::L2;
    if (name == "gaussian") return GraphBuilder::Gaussian;
    if (name == "lle") return GraphBuilder::Lle;
    throw Error("unknown graph builder '" + name + "' (expected l2, gaussian or lle)");
}

namespace {

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Parses one CSV file into rows of doubles; comment lines are collected so
// graph loading can recover the provenance header.
struct CsvContent {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;
};

CsvContent read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");

    CsvContent out;
    std::string line;
    size_t data_row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            out.comments.push_back(line.substr(1));
            continue;
        }
        if (is_blank(line)) continue;
        ++data_row;

        std::vector<double> row;
        std::stringstream ss(line);
        std::string token;
        size_t col = 0;
        while (std::getline(ss, token, ',')) {
            ++col;
            std::string t = trim(token);
            const char* begin = t.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (t.empty() || end != begin + t.size())
                throw Error("parse error in '" + path + "' at row " +
                            std::to_string(data_row) + ", column " +
                            std::to_string(col) + ": bad token '" + t + "'");
            if (!std::isfinite(v))
                throw Error("parse error in '" + path + "' at row " +
                            std::to_string(data_row) + ", column " +
                            std::to_string(col) + ": non-finite value");
            row.push_back(v);
        }
        if (!out.rows.empty() && row.size() != out.rows.front().size())
            throw Error("ragged CSV in '" + path + "': row " +
                        std::to_string(data_row) + " has " +
                        std::to_string(row.size()) + " fields, expected " +
                        std::to_string(out.rows.front().size()));
        out.rows.push_back(std::move(row));
    }
    if (out.rows.empty()) throw Error("no data rows in '" + path + "'");
    return out;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return m;
}

void write_csv(const Matrix& values, const std::string& path,
               const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    for (const auto& c : comments) out << "# " << c << "\n";
    char buf[40];
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            // %.17g is enough digits to reproduce any double exactly.
            std::snprintf(buf, sizeof(buf), "%.17g", values(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("write failure on '" + path + "'");
}

} // namespace

std::vector<int> canonicalize_labels(const std::vector<int>& labels) {
    // Map the distinct values, in numeric order, onto 0..l-1.  The mapping
    // depends only on the set of values, not on sample order.
    std::map<int, int> remap;
    for (int v : labels) remap.emplace(v, 0);
    int next = 0;
    for (auto& [value, id] : remap) id = next++;
    std::vector<int> out(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) out[i] = remap[labels[i]];
    return out;
}

std::vector<int> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::vector<int> labels;
    std::string line;
    size_t row = 0;
    while (std::getline(in, line)) {
        if ((!line.empty() && line[0] == '#') || is_blank(line)) continue;
        ++row;
        std::string t = trim(line);
        const char* begin = t.c_str();
        char* end = nullptr;
        long v = std::strtol(begin, &end, 10);
        if (end != begin + t.size())
            throw Error("bad label '" + t + "' at line " + std::to_string(row) +
                        " in '" + path + "'");
        labels.push_back(static_cast<int>(v));
    }
    if (labels.empty()) throw Error("no labels in '" + path + "'");
    return canonicalize_labels(labels);
}

void save_labels(const std::vector<int>& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    for (int v : labels) out << v << '\n';
    if (!out) throw Error("write failure on '" + path + "'");
}

DataMatrix load_matrix(const std::string& path, Orientation orientation) {
    CsvContent csv = read_csv(path);
    Matrix m = rows_to_matrix(csv.rows);

    DataMatrix data;
    data.values = orientation == Orientation::SamplesAsRows
                      ? Matrix(m.transpose())
                      : std::move(m);
    data.name = std::filesystem::path(path).stem().string();

    std::string label_path = path + ".labels";
    if (std::filesystem::exists(label_path)) {
        auto labels = load_labels(label_path);
        if (static_cast<Eigen::Index>(labels.size()) != data.samples())
            throw Error("label file '" + label_path + "' has " +
                        std::to_string(labels.size()) + " entries for " +
                        std::to_string(data.samples()) + " samples");
        data.labels = std::move(labels);
    }
    return data;
}

void save_matrix(const Matrix& values, const std::string& path,
                 const std::vector<std::string>& comments) {
    write_csv(values, path, comments);
}

void save_data(const DataMatrix& data, const std::string& path,
               const std::vector<std::string>& comments) {
    write_csv(data.values, path, comments);
    if (data.labels) save_labels(*data.labels, path + ".labels");
}

void save_graph(const SimilarityGraph& graph, const std::string& path) {
    std::ostringstream header;
    header << "builder=" << builder_name(graph.builder);
    switch (graph.builder) {
    case GraphBuilder::L2:
        header << " lambda=" << graph.params.lambda << " k=" << graph.params.k;
        break;
    case GraphBuilder::Gaussian:
        header << " tau=" << graph.params.tau << " k=" << graph.params.k;
        break;
    case GraphBuilder::Lle:
        header << " k=" << graph.params.k;
        break;
    }
    write_csv(graph.weights, path, {header.str()});
}

SimilarityGraph load_graph(const std::string& path) {
    CsvContent csv = read_csv(path);
    Matrix w = rows_to_matrix(csv.rows);
    if (w.rows() != w.cols())
        throw Error("graph in '" + path + "' is not square (" +
                    std::to_string(w.rows()) + "x" + std::to_string(w.cols()) + ")");
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        if (w(i, i) != 0.0)
            throw Error("graph in '" + path + "' has nonzero diagonal at " +
                        std::to_string(i));
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            if (w(i, j) < 0.0)
                throw Error("graph in '" + path + "' has negative weight at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
            if (w(i, j) != w(j, i))
                throw Error("graph in '" + path + "' is asymmetric at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }

    SimilarityGraph g;
    g.weights = std::move(w);
    // Recover provenance from the header comment, if present.
    for (const auto& c : csv.comments) {
        std::istringstream ss(c);
        std::string field;
        while (ss >> field) {
            auto eq = field.find('=');
            if (eq == std::string::npos) continue;
            std::string key = field.substr(0, eq), value = field.substr(eq + 1);
            try {
                if (key == "builder") g.builder = builder_from_name(value);
                else if (key == "lambda") g.params.lambda = std::stod(value);
                else if (key == "k") g.params.k = std::stoi(value);
                else if (key == "tau") g.params.tau = std::stod(value);
            } catch (const std::exception&) {
                throw Error("bad provenance field '" + field + "' in '" + path + "'");
            }
        }
    }
    return g;
}

std::pair<PcaModel, DataMatrix> pca_fit_transform(const DataMatrix& data,
                                                  double energy_kept) {
    if (energy_kept <= 0.0 || energy_kept > 1.0)
        throw Error("energy_kept must be in (0, 1]");
    const Matrix& y = data.values;
    if (y.cols() < 2) throw Error("PCA needs at least 2 samples");

    Vector mean = y.rowwise().mean();
    Matrix centered = y.colwise() - mean;

    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
    Vector sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    if (smax <= 0.0) throw Error("degenerate data: all samples identical");

    // Count numerically nonzero directions; their squared singular values
    // are the (unnormalized) component variances, already descending.
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-12 * smax) ++rank;
    double total = sv.head(rank).squaredNorm();

    Eigen::Index p = 0;
    double cum = 0.0;
    while (p < rank) {
        cum += sv(p) * sv(p);
        ++p;
        if (cum >= energy_kept * total) break;
    }

    Matrix basis = svd.matrixU().leftCols(p);
    // Fix each component's sign: largest-magnitude entry positive.
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::Index at = 0;
        basis.col(j).cwiseAbs().maxCoeff(&at);
        if (basis(at, j) < 0.0) basis.col(j) = -basis.col(j);
    }

    PcaModel model{std::move(mean), std::move(basis), energy_kept};
    DataMatrix reduced;
    reduced.values = model.basis.transpose() * centered;
    reduced.labels = data.labels;
    reduced.name = data.name.empty() ? "pca" : data.name + "-pca";
    return {std::move(model), std::move(reduced)};
}

} // namespace l2graph
