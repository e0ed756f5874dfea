#ifndef L2GRAPH_THEORY_HPP
#define L2GRAPH_THEORY_HPP

#include "l2graph/types.hpp"

#include <cstdint>

namespace l2graph {

// A dictionary split into a clean block and an error block, as used by the
// representation guarantees this module checks numerically.
struct SubspacePair {
    Matrix d0; // clean dictionary
    Matrix de; // error dictionary
    int r0 = 0;
    int re = 0; // ranks at relative tolerance 1e-10
};

SubspacePair make_subspace_pair(Matrix d0, Matrix de);

// Numerical rank at relative singular-value tolerance 1e-10.
int numerical_rank(const Matrix& a);

// Smallest angle between unit vectors of the two ranges: cos theta is the
// largest singular value of U_A' U_B.  Angles below 45 degrees are
// evaluated through the sine ((I - U_A U_A') U_B) instead of acos, which
// cannot resolve angles under ~1e-8.
double first_principal_angle(const Matrix& a, const Matrix& b);

// The sufficient condition sigma_min(D0) >= r_e * cos(theta_min) * ||De||_{1,2},
// where sigma_min is the smallest nonzero singular value and ||.||_{1,2}
// the largest column l2 norm.
struct LemmaReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double sigma_min = 0.0;
    double theta_min = 0.0;
    double de_column_norm_max = 0.0;
    int re = 0;
};

LemmaReport lemma3_condition(const SubspacePair& pair);

// Minimum l2-norm z with Dz = x (pseudoinverse at rank tolerance 1e-10).
// Throws if x is not in range(D) within relative residual 1e-8.
Vector min_l2_solution(const Matrix& d, const Vector& x);

// Empirical check of the "clean block wins" implication for the l2 norm:
// compares the separate minimum-norm solutions through D0 and De with the
// joint minimum-norm solution over [D0 De], and reports whether
// ||z0|| < ||ze|| coincides with the joint solution ignoring De.  This is
// a report, not an assertion -- the implication can fail for the l2 norm.
struct Lemma2Verdict {
    double norm_z0 = 0.0;
    double norm_ze = 0.0;
    bool z0_smaller = false;
    double de_block_norm = 0.0; // De-rows of the joint min-norm solution
    bool de_block_zero = false; // within 1e-8 of the joint solution's norm
    bool agrees = false;        // z0_smaller == de_block_zero
};

Lemma2Verdict lemma2_check(const SubspacePair& pair, const Vector& x);

// The minimum-nuclear-norm self-representation DC = D: C* = V_r V_r' from
// the skinny SVD of D.  A symmetric projector of rank = rank(D).
Matrix nuclear_min_representation(const Matrix& d);

// argmin over k of  k + (alpha/2) * sum_{i>k} sigma_i^2,  ties toward the
// smaller k.  `sigmas` must be sorted descending and non-negative.
int optimal_k(const Vector& sigmas, double alpha);

// Rank-truncated variant of the projector: keep only the top-k* right
// singular directions of D, with k* chosen by optimal_k on D's spectrum.
Matrix denoised_representation(const Matrix& d, double alpha);

// One line of the `verify` report.
struct CheckResult {
    std::string name;
    int instances = 0;
    int passed = 0;
    double worst_residual = 0.0;
    bool hard = true; // hard checks must pass every instance
    std::string note;
};

// Seeded sweep over every check this module exposes.  `hard` failures are
// what the verify command turns into a nonzero exit code.
std::vector<CheckResult> run_verification(std::uint64_t seed, int instances);

} // namespace l2graph

#endif
