#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hardy/numerics.hpp"
#include "hardy/pick.hpp"

namespace hardy {

/// Number of basis functions of the given degree: d + 1 monomials z^0..z^d for
/// H∞, and {1} ∪ {B z^0, …, B z^d} (d + 2 functions) for ℂ + BH∞.
Eigen::Index basis_size(const AlgebraSpec& algebra, int degree);

/// Values of the basis functions at z.
Eigen::VectorXcd basis_row(const AlgebraSpec& algebra, int degree, Complex z);

/// points × basis_size evaluation matrix.
Eigen::MatrixXcd basis_matrix(const AlgebraSpec& algebra, int degree, const Eigen::VectorXcd& points);

/// m-component analytic function F = (Σ_l C_{k,l} φ_l) / q with φ_l the algebra
/// basis and q an optional denominator polynomial (H∞ only, constant term first;
/// empty means q ≡ 1).
class VectorAnalyticFunction {
public:
    VectorAnalyticFunction(AlgebraSpec algebra, int degree, Eigen::MatrixXcd coefficients,
                           Eigen::VectorXcd denominator = {});

    [[nodiscard]] const AlgebraSpec& algebra() const noexcept { return algebra_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] const Eigen::MatrixXcd& coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] const Eigen::VectorXcd& denominator() const noexcept { return denominator_; }
    [[nodiscard]] Eigen::Index components() const noexcept { return coefficients_.rows(); }

    [[nodiscard]] Eigen::VectorXcd operator()(Complex z) const;
    /// points × m matrix of values.
    [[nodiscard]] Eigen::MatrixXcd evaluate(const Eigen::VectorXcd& points) const;
    /// Grid maximum of ‖F(z)‖.
    [[nodiscard]] double grid_norm(const DiskGrid& grid) const;

private:
    AlgebraSpec algebra_;
    int degree_;
    Eigen::MatrixXcd coefficients_;
    Eigen::VectorXcd denominator_;
};

/// Schur–Nevanlinna recursion for scalar H∞ data; returns a rational f of degree
/// ≤ n with f(x_j) = w_j and sup |f| ≤ alpha.
VectorAnalyticFunction schur_interpolate(const Eigen::VectorXcd& points, const Eigen::VectorXcd& values,
                                         double alpha);

/// Classes of points the algebra cannot separate. Points are reordered class by
/// class; `boundaries` holds n_0 = 0 < n_1 < … < n_p into `order`.
struct SeparationPartition {
    Eigen::VectorXcd points;            // input order
    std::vector<Eigen::Index> order;    // indices of points, grouped by class
    std::vector<Eigen::Index> boundaries;
    std::vector<Eigen::Index> class_of; // class index of each input point

    [[nodiscard]] Eigen::Index class_count() const noexcept {
        return static_cast<Eigen::Index>(boundaries.size()) - 1;
    }
    [[nodiscard]] std::vector<Eigen::Index> members(Eigen::Index k) const;
    [[nodiscard]] Complex representative(Eigen::Index k) const;
};

/// Coincident points share a class in both algebras; for ℂ + BH∞ every point that
/// is a zero of B joins a single class.
SeparationPartition separation_classes(const AlgebraSpec& algebra, const Eigen::VectorXcd& points);

/// Scalar functions e_1..e_p in the degree-d basis with e_k = δ_{kl} on class l,
/// minimum coefficient norm. Throws DegreeTooSmall when the degree cannot
/// separate the classes.
std::vector<VectorAnalyticFunction> separating_idempotents(const AlgebraSpec& algebra,
                                                           const SeparationPartition& partition, int degree);

struct WitnessConstruction {
    std::vector<VectorAnalyticFunction> idempotents;
    std::vector<Eigen::VectorXcd> class_vectors;
    SeparationPartition partition;
    VectorAnalyticFunction function;
};

/// F = Σ_k e_k ξ_k with ξ_k in the span of the class's directions; meets the
/// constraints without norm control. Throws NoSolutionExists when a class target
/// is outside the range of its Gram matrix.
WitnessConstruction witness_interpolant(const TangentialProblem& p, int degree);

struct TangentialSolution {
    VectorAnalyticFunction function;
    double grid_norm = 0.0;
    double level = 0.0;
    bool meets_level = false;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Default optimality-gap tolerance of the minimax solve in tangential_solve.
inline constexpr double kSolveTol = 1e-5;

/// Minimax over the degree-d algebra basis subject to the interpolation
/// constraints; `level` is the norm the caller wants to compare against.
TangentialSolution tangential_solve(const TangentialProblem& p, int degree, const DiskGrid& grid, double level,
                                    double tol = kSolveTol);

/// |Σ_k F_k(x_j) conj(v_{j,k}) - w_j| for every node.
Eigen::VectorXd constraint_residuals(const VectorAnalyticFunction& f, const TangentialProblem& p);

struct VerificationReport {
    Eigen::VectorXd residuals;
    double max_residual = 0.0;
    double grid_norm = 0.0;
    FeasibilityReport pick;
};

/// Residuals |⟨F(x_j), v_j⟩ - w_j|, grid norm, and the Pick test at α = grid norm
/// (Szegő for H∞, kernel family for ℂ + BH∞).
VerificationReport verify_solution(const VectorAnalyticFunction& f, const TangentialProblem& p,
                                   const DiskGrid& grid, double tol = 1e-6, const FamilyOptions& family = {});

}  // namespace hardy
