#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hardy/numerics.hpp"

namespace hardy {

/// Distance from A (n₂ × n₁) to span{S_k} in operator norm, with the ℓ² factor of
/// the dual formula truncated to ℂ^r.
struct TruncatedDistanceProblem {
    Eigen::MatrixXcd target;                 // A
    std::vector<Eigen::MatrixXcd> subspace;  // S_1..S_s, possibly empty
    int tensor_rank = 1;                     // r

    [[nodiscard]] Eigen::Index rows() const noexcept { return target.rows(); }  // n₂
    [[nodiscard]] Eigen::Index cols() const noexcept { return target.cols(); }  // n₁

    /// Shapes, r ≥ n₁, and linear independence of the S_k (Gram of the
    /// vectorizations nonsingular to 1e-10); throws InvalidInput.
    void validate() const;
};

struct PrimalOptions {
    int max_iterations = 20000;
};

struct PrimalResult {
    double value = 0.0;
    /// Certified lower bound from the final ellipsoid (value - lower_bound bounds the error).
    double lower_bound = 0.0;
    Eigen::VectorXcd coefficients;
    int iterations = 0;
};

/// min_c σ_max(A + Σ c_k S_k): central-cut ellipsoid method on the real and
/// imaginary parts of c, stopped when the certified gap is below tol, then a
/// coordinatewise golden-section polish.
PrimalResult distance_primal(const TruncatedDistanceProblem& p, double tol = 1e-10,
                             const PrimalOptions& options = {});

struct DualOptions {
    int starts = 64;
    int steps = 500;
    std::uint64_t seed = 0;
};

struct DualResult {
    double value = 0.0;
    Eigen::MatrixXcd h1;  // n₁ × r, unit Frobenius norm
    Eigen::MatrixXcd h2;  // n₂ × r, unit Frobenius norm, orthogonal to every S_k h1
    int best_start = 0;
};

/// Value of the dual functional at h1 (viewed as an n₁ × r matrix H):
/// min_β ‖(A - Σ β_k S_k) H‖_F = |⟨(A⊗I)h₁, h₂⟩| with h₂ the normalized
/// projection of A H onto the orthocomplement of span{S_k H}.
double dual_objective(const TruncatedDistanceProblem& p, const Eigen::MatrixXcd& h1);

/// sup over unit h1 of dual_objective: multistart ascent on the unit sphere
/// (limited-memory BFGS directions, Armijo steps, retraction by normalization),
/// one deterministic seed per start.
DualResult distance_dual(const TruncatedDistanceProblem& p, double tol = 1e-12, const DualOptions& options = {});

}  // namespace hardy
