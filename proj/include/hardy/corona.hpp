#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hardy/pick.hpp"
#include "hardy/solve.hpp"

namespace hardy {

/// Row data F = (f_1, …, f_m) over an algebra and the lower bound δ > 0 of
/// M_F M_F^*.
struct CoronaProblem {
    VectorAnalyticFunction row;
    double delta = 1.0;

    [[nodiscard]] const AlgebraSpec& algebra() const noexcept { return row.algebra(); }
    void validate() const;
};

enum class CoronaVerdict { Passed, Failed, Solved };
std::string to_string(CoronaVerdict v);

struct CoronaReport {
    CoronaVerdict verdict = CoronaVerdict::Passed;
    /// Point set and kernel parameter with the smallest eigenvalue seen.
    std::optional<Eigen::VectorXcd> worst_point_set;
    std::optional<ModelVector> worst_parameter;
    double worst_min_eig = 0.0;
    int sets_tested = 0;
    int kernels_tested = 0;
    /// Filled by corona_solve.
    double node_residual = 0.0;
    double grid_residual = 0.0;
    double solution_norm = 0.0;
    /// ‖G‖ δ - 1.
    double slack = 0.0;
};

/// Tests [(⟨F(x_j)^*, F(x_i)^*⟩ - δ²) K(x_i, x_j)] ≥ 0 on each point set, with the
/// Szegő kernel for H∞ and a sampled cyclic-kernel family for ℂ + BH∞; stops at
/// the first failing set.
CoronaReport corona_check(const CoronaProblem& cp, std::span<const Eigen::VectorXcd> point_sets,
                          const FamilyOptions& family = {});

/// min over the grid of ‖F(z)‖; the explicit opt-in source of δ when the caller
/// does not supply one.
double grid_minimum_delta(const VectorAnalyticFunction& row, const DiskGrid& grid);

/// Tangential data with v_j = conj(F(x_j)), w_j = δ, α = 1.
TangentialProblem corona_tangential_problem(const CoronaProblem& cp, const Eigen::VectorXcd& nodes);

struct CoronaSolution {
    VectorAnalyticFunction solution;
    CoronaReport report;
};

/// Solves the tangential problem on the node set and returns G = G_Y / δ with
/// F G = 1 on the nodes. Throws HypothesisInsufficientAtScale when the reduced
/// problem has no solution at this degree and node set.
CoronaSolution corona_solve(const CoronaProblem& cp, const Eigen::VectorXcd& nodes, int degree,
                            const DiskGrid& grid, double tol = kSolveTol);

}  // namespace hardy
