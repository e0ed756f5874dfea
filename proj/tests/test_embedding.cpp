#include "l2graph/embedding.hpp"

#include "l2graph/corruption_synth.hpp"
#include "l2graph/graph_builder.hpp"
#include "l2graph/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

using namespace l2graph;

namespace {

DataMatrix gaussian_data(std::uint64_t seed, Eigen::Index m, Eigen::Index n) {
    std::mt19937_64 gen = substream(seed, 3);
    DataMatrix data;
    data.values = testsup::random_matrix(gen, m, n);
    return data;
}

double pencil_objective(const DataMatrix& data, const SimilarityGraph& graph,
                        const Matrix& theta) {
    Matrix projected = theta.transpose() * data.values;
    Matrix diff = projected - projected * graph.weights;
    return diff.squaredNorm();
}

} // namespace

TEST_CASE("embedding satisfies the pencil equations and the constraint") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        DataMatrix data = gaussian_data(seed, 8, 30);
        SimilarityGraph graph = build_l2_graph(data, 0.1, 5);
        const int d = 4;
        EmbeddingModel model = npe_embed(data, graph, d);

        REQUIRE(model.theta.cols() == d);
        REQUIRE(model.eigenvalues.size() == d);

        const Matrix& y = data.values;
        Matrix iw = Matrix::Identity(y.cols(), y.cols()) - graph.weights;
        Matrix a = y * (iw.transpose() * iw) * y.transpose();
        Matrix b = y * y.transpose();

        // Constraint: Theta' YY' Theta = I.
        Matrix eye = model.theta.transpose() * b * model.theta;
        CHECK((eye - Matrix::Identity(d, d)).norm() <= 1e-6);

        // Generalized eigen-residuals, relative to the left-hand side.
        for (int j = 0; j < d; ++j) {
            Vector lhs = a * model.theta.col(j);
            Vector rhs = model.eigenvalues(j) * (b * model.theta.col(j));
            CHECK((lhs - rhs).norm() <= 1e-6 * std::max(1.0, lhs.norm()));
        }

        // Eigenvalues ascend and the reconstruction objective at Theta
        // equals their sum.
        for (int j = 1; j < d; ++j)
            CHECK(model.eigenvalues(j) >= model.eigenvalues(j - 1));
        CHECK(pencil_objective(data, graph, model.theta) ==
              doctest::Approx(model.eigenvalues.sum()).epsilon(1e-6));
    }
}

TEST_CASE("embedding agrees with the direct generalized eigensolver") {
    // With m << n, YY' is positive definite and Eigen's generalized
    // solver is an independent reference for the pencil spectrum.
    DataMatrix data = gaussian_data(11, 6, 40);
    SimilarityGraph graph = build_l2_graph(data, 0.1, 4);
    const int d = 3;
    EmbeddingModel model = npe_embed(data, graph, d);

    const Matrix& y = data.values;
    Matrix iw = Matrix::Identity(y.cols(), y.cols()) - graph.weights;
    Matrix a = y * (iw.transpose() * iw) * y.transpose();
    a = ((a + a.transpose()) * 0.5).eval();
    Matrix b = y * y.transpose();
    b = ((b + b.transpose()) * 0.5).eval();

    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ref(a, b);
    REQUIRE(ref.info() == Eigen::Success);

    // All pencil eigenvalues here are well above zero (random data is
    // never reconstructed exactly), so the model keeps the smallest d.
    for (int j = 0; j < d; ++j)
        CHECK(model.eigenvalues(j) ==
              doctest::Approx(ref.eigenvalues()(j)).epsilon(1e-8));

    // Same span, column by column: the reference vector must be parallel
    // to the returned one after the B-normalization both sides use.
    for (int j = 0; j < d; ++j) {
        Vector u = model.theta.col(j);
        Vector v = ref.eigenvectors().col(j);
        double cosine = std::abs(u.dot(b * v)) /
                        std::sqrt(u.dot(b * u) * v.dot(b * v));
        CHECK(cosine == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("rank-deficient gram matrices are handled on their range") {
    // n < m makes YY' singular; the pencil is solved on its range.
    DataMatrix data = gaussian_data(12, 30, 12);
    SimilarityGraph graph = build_l2_graph(data, 0.1, 4);
    EmbeddingModel model = npe_embed(data, graph, 3);

    Matrix b = data.values * data.values.transpose();
    Matrix eye = model.theta.transpose() * b * model.theta;
    CHECK((eye - Matrix::Identity(3, 3)).norm() <= 1e-6);

    // Asking for more directions than rank(YY') must fail loudly.
    CHECK_THROWS_AS(npe_embed(data, graph, 13), Error);
}

TEST_CASE("exactly reconstructable data keeps the zero-objective directions") {
    // Duplicate every sample and wire each copy to reconstruct the other:
    // YW = Y holds exactly, the objective vanishes identically, and the
    // embedding falls back to keeping the (all-zero) spectrum.
    std::mt19937_64 gen = substream(13, 0);
    Matrix base = testsup::random_matrix(gen, 5, 6);
    DataMatrix data;
    data.values.resize(5, 12);
    data.values << base, base;

    SimilarityGraph graph;
    graph.weights = Matrix::Zero(12, 12);
    for (int i = 0; i < 6; ++i) {
        graph.weights(i, 6 + i) = 1.0;
        graph.weights(6 + i, i) = 1.0;
    }

    EmbeddingModel model = npe_embed(data, graph, 2);
    CHECK(model.eigenvalues.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(pencil_objective(data, graph, model.theta) <= 1e-10);

    Matrix b = data.values * data.values.transpose();
    Matrix eye = model.theta.transpose() * b * model.theta;
    CHECK((eye - Matrix::Identity(2, 2)).norm() <= 1e-6);
}

TEST_CASE("embedding input guards") {
    DataMatrix data = gaussian_data(14, 6, 20);
    SimilarityGraph graph = build_l2_graph(data, 0.1, 4);
    CHECK_THROWS_AS(npe_embed(data, graph, 0), Error);

    SimilarityGraph wrong;
    wrong.weights = Matrix::Zero(19, 19);
    CHECK_THROWS_AS(npe_embed(data, wrong, 2), Error);
}

TEST_CASE("transform projects and carries labels") {
    DataMatrix data = gaussian_data(15, 6, 20);
    data.labels = std::vector<int>(20, 1);
    SimilarityGraph graph = build_l2_graph(data, 0.1, 4);
    EmbeddingModel model = npe_embed(data, graph, 2);

    DataMatrix projected = transform(model, data);
    CHECK(projected.values.rows() == 2);
    CHECK(projected.values.cols() == 20);
    CHECK((projected.values - model.theta.transpose() * data.values).norm() ==
          0.0);
    REQUIRE(projected.labels.has_value());

    DataMatrix bad;
    bad.values = Matrix::Zero(7, 3);
    CHECK_THROWS_AS(transform(model, bad), Error);
}

TEST_CASE("nearest-neighbor classification") {
    DataMatrix train;
    train.values.resize(1, 3);
    train.values << 0.0, 10.0, 20.0;
    train.labels = std::vector<int>{5, 7, 9};

    DataMatrix test;
    test.values.resize(1, 4);
    test.values << 1.0, 11.0, 19.0, 100.0;

    CHECK(nn_classify(train, test) == std::vector<int>{5, 7, 9, 9});

    SUBCASE("distance ties pick the lower training index") {
        DataMatrix mid;
        mid.values.resize(1, 1);
        mid.values << 5.0; // equidistant from 0 and 10
        CHECK(nn_classify(train, mid) == std::vector<int>{5});
    }

    SUBCASE("unlabeled training data is rejected") {
        DataMatrix unlabeled;
        unlabeled.values = train.values;
        CHECK_THROWS_AS(nn_classify(unlabeled, test), Error);
    }
}

TEST_CASE("nn_classify is invariant under a common orthogonal transform") {
    std::mt19937_64 gen = substream(16, 0);
    DataMatrix train;
    train.values = testsup::random_matrix(gen, 5, 30);
    train.labels = std::vector<int>(30);
    for (int i = 0; i < 30; ++i) (*train.labels)[i] = i % 3;
    DataMatrix test;
    test.values = testsup::random_matrix(gen, 5, 10);

    std::vector<int> base = nn_classify(train, test);

    Matrix q = testsup::random_orthonormal(gen, 5, 5);
    DataMatrix rtrain = train, rtest = test;
    rtrain.values = q * train.values;
    rtest.values = q * test.values;
    CHECK(nn_classify(rtrain, rtest) == base);
}

TEST_CASE("subspace-learning evaluation scores separable data perfectly") {
    // Two independent subspaces; train and test drawn with different
    // seeds.  Projections preserve the separation, so some grid entry
    // classifies everything correctly.
    SubspaceSpec spec;
    spec.ambient_dim = 20;
    spec.subspace_dims = {3, 3};
    spec.points_per_subspace = {15, 15};

    DataMatrix train = sample_union_of_subspaces(spec, 1);
    DataMatrix test = sample_union_of_subspaces(spec, 1);
    // Same seed reproduces the same subspaces; jitter the test points so
    // they are not literally the training points.
    std::mt19937_64 jitter = substream(17, 0);
    test.values += 0.01 * testsup::random_matrix(jitter, 20, 30);

    GraphParams params;
    params.lambda = 0.1;
    params.k = 5;
    AccuracyTable table = evaluate_subspace_learning(train, test, params,
                                                     {2, 4, 6});
    REQUIRE(table.rows.size() == 3);
    CHECK(table.best_accuracy == 1.0);

    // best_d reports the first grid entry reaching the best accuracy.
    for (const AccuracyRow& row : table.rows) {
        if (row.accuracy == table.best_accuracy) {
            CHECK(table.best_d == row.d);
            break;
        }
    }
}

TEST_CASE("evaluation guards") {
    DataMatrix train = gaussian_data(18, 4, 10);
    DataMatrix test = gaussian_data(19, 4, 5);
    GraphParams params;
    params.lambda = 0.1;
    params.k = 3;
    CHECK_THROWS_AS(
        evaluate_subspace_learning(train, test, params, {1}), Error);

    train.labels = std::vector<int>(10, 0);
    CHECK_THROWS_AS(
        evaluate_subspace_learning(train, test, params, {1}), Error);

    test.labels = std::vector<int>(5, 0);
    CHECK_THROWS_AS(
        evaluate_subspace_learning(train, test, params, {}), Error);
}
