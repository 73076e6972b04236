#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "hardy/numerics.hpp"
#include "hardy/rkhs.hpp"

namespace hardy {

/// All of H∞.
struct FullHinf {};
/// The subalgebra ℂ + B·H∞ for a finite Blaschke product B.
struct CplusB {
    BlaschkeProduct product;
};
using AlgebraSpec = std::variant<FullHinf, CplusB>;

/// nullptr for FullHinf.
const BlaschkeProduct* inner_factor(const AlgebraSpec& algebra) noexcept;
std::string algebra_name(const AlgebraSpec& algebra);

/// Data of a tangential interpolation problem: find F in the columns of the algebra
/// with sup ‖F‖ ≤ alpha and ⟨F(x_j), v_j⟩ = Σ_k F_k(x_j) conj(v_{j,k}) = w_j.
struct TangentialProblem {
    Eigen::VectorXcd points;      // x_1..x_n
    Eigen::MatrixXcd directions;  // m × n, column j is v_j
    Eigen::VectorXcd targets;     // w_1..w_n
    double alpha = 1.0;
    AlgebraSpec algebra = FullHinf{};

    [[nodiscard]] Eigen::Index nodes() const noexcept { return points.size(); }
    [[nodiscard]] Eigen::Index components() const noexcept { return directions.rows(); }

    /// Shape, disk membership, nonzero directions and alpha > 0; throws InvalidInput.
    void validate() const;
};

/// Groups of indices whose points coincide within tol, in order of first appearance.
std::vector<std::vector<Eigen::Index>> coincident_groups(const Eigen::VectorXcd& points, double tol = 1e-12);

/// Solves the Gram system [⟨v_j, v_i⟩] a = w restricted to `indices`; returns
/// ξ = Σ a_j v_j when the target lies in the Gram range (residual ≤ 1e-8 ‖w‖),
/// std::nullopt otherwise.
std::optional<Eigen::VectorXcd> gram_range_vector(const Eigen::MatrixXcd& directions,
                                                  const Eigen::VectorXcd& targets,
                                                  const std::vector<Eigen::Index>& indices);

/// Throws InconsistentDuplicates when coincident nodes carry contradictory data.
void check_duplicate_consistency(const TangentialProblem& p);

struct PickMatrix {
    Eigen::MatrixXcd matrix;
    std::string kernel_tag;
};

/// α²⟨v_j, v_i⟩ - w_i conj(w_j), the kernel-free factor of every Pick matrix.
Eigen::MatrixXcd pick_data_matrix(const Eigen::MatrixXcd& directions, const Eigen::VectorXcd& targets,
                                  double alpha);

/// [(α²⟨v_j, v_i⟩ - w_i conj(w_j)) K(x_i, x_j)]; the kernel must match the algebra
/// (Szegő for H∞, a cyclic kernel over the same B for ℂ + BH∞).
PickMatrix build_pick_matrix(const TangentialProblem& p, const KernelSpec& kernel);

enum class Verdict { Feasible, Infeasible, Undetermined };
std::string to_string(Verdict v);

struct FeasibilityReport {
    Verdict verdict = Verdict::Undetermined;
    double worst_min_eig = 0.0;
    std::optional<ModelVector> worst_parameter;
    int samples_tested = 0;
    /// Norm level guaranteed by the scaled single-kernel check (α·c) when Feasible.
    std::optional<double> guarantee_level;
    /// Set when the verdict only transfers to solutions under an assumed similarity bound.
    bool conditional = false;
};

FeasibilityReport feasible_single(const TangentialProblem& p, const KernelSpec& kernel,
                                  double tol = kDefaultPsdTol);

struct FamilyOptions {
    int samples = 512;
    bool refine = true;
    double tol = kDefaultPsdTol;
    std::uint64_t seed = 0;
    int refine_steps = 50;
};

/// Sweeps Pick matrices over cyclic kernels K_v, v on the unit sphere of the model
/// space, then refines the worst sample by projected descent on λ_min.
FeasibilityReport feasible_family(const TangentialProblem& p, const FamilyOptions& options = {});

/// Family sweep on a precomputed data matrix (shared with the corona checks).
FeasibilityReport family_sweep(const Eigen::MatrixXcd& data, const Eigen::VectorXcd& points,
                               const BlaschkeProduct& b, const FamilyOptions& options);

/// Single cyclic kernel with v the normalized model-space projection of 1; on
/// Feasible the report carries the conditional guarantee level α·c.
FeasibilityReport scaled_single_kernel_check(const TangentialProblem& p, double similarity_bound,
                                             double tol = kDefaultPsdTol);

}  // namespace hardy
