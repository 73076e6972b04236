#include "hardy/corona.hpp"

#include <string>

namespace hardy {

void CoronaProblem::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::InvalidInput, "delta must be positive");
}

std::string to_string(CoronaVerdict v) {
    switch (v) {
    case CoronaVerdict::Passed: return "Passed";
    case CoronaVerdict::Failed: return "Failed";
    case CoronaVerdict::Solved: return "Solved";
    }
    return "Failed";
}

CoronaReport corona_check(const CoronaProblem& cp, std::span<const Eigen::VectorXcd> point_sets,
                          const FamilyOptions& family) {
    cp.validate();
    const BlaschkeProduct* b = inner_factor(cp.algebra());
    CoronaReport report;
    report.worst_min_eig = std::numeric_limits<double>::infinity();
    for (const Eigen::VectorXcd& ys : point_sets) {
        if (ys.size() == 0) throw Error(ErrorCode::InvalidInput, "corona point sets must be nonempty");
        for (Eigen::Index i = 0; i < ys.size(); ++i) {
            if (!(std::abs(ys(i)) < 1.0)) throw Error(ErrorCode::InvalidInput, "node outside the open unit disk");
        }
        const Eigen::MatrixXcd values = cp.row.evaluate(ys);  // rows F(y_i)
        Eigen::MatrixXcd data = values * values.adjoint();
        data.array() -= cp.delta * cp.delta;

        FeasibilityReport r;
        if (b == nullptr) {
            Eigen::MatrixXcd q = data.cwiseProduct(KernelSpec::szego().gram(ys));
            q = (q + q.adjoint()).eval() * 0.5;
            const PsdVerdict v = is_psd(q, family.tol);
            r.verdict = v.psd ? Verdict::Feasible : Verdict::Infeasible;
            r.worst_min_eig = v.min_eig;
            r.samples_tested = 1;
        } else {
            r = family_sweep(data, ys, *b, family);
        }
        ++report.sets_tested;
        report.kernels_tested += r.samples_tested;
        if (r.worst_min_eig < report.worst_min_eig) {
            report.worst_min_eig = r.worst_min_eig;
            report.worst_point_set = ys;
            report.worst_parameter = r.worst_parameter;
        }
        if (r.verdict != Verdict::Feasible) {
            report.verdict = CoronaVerdict::Failed;
            report.worst_point_set = ys;
            report.worst_parameter = r.worst_parameter;
            report.worst_min_eig = r.worst_min_eig;
            return report;
        }
    }
    report.verdict = CoronaVerdict::Passed;
    return report;
}

double grid_minimum_delta(const VectorAnalyticFunction& row, const DiskGrid& grid) {
    return row.evaluate(grid.points).rowwise().norm().minCoeff();
}

TangentialProblem corona_tangential_problem(const CoronaProblem& cp, const Eigen::VectorXcd& nodes) {
    cp.validate();
    const Eigen::MatrixXcd values = cp.row.evaluate(nodes);
    TangentialProblem p;
    p.points = nodes;
    p.directions = values.transpose().conjugate();  // column j is conj(F(x_j))
    p.targets = Eigen::VectorXcd::Constant(nodes.size(), cp.delta);
    p.alpha = 1.0;
    p.algebra = cp.algebra();
    return p;
}

CoronaSolution corona_solve(const CoronaProblem& cp, const Eigen::VectorXcd& nodes, int degree,
                            const DiskGrid& grid, double tol) {
    const TangentialProblem p = corona_tangential_problem(cp, nodes);
    for (Eigen::Index j = 0; j < p.nodes(); ++j) {
        if (p.directions.col(j).norm() == 0.0) {
            throw Error(ErrorCode::HypothesisInsufficientAtScale,
                        "F vanishes at node " + std::to_string(j) + "; no G can satisfy FG = 1 there");
        }
    }
    TangentialSolution ts = [&] {
        try {
            return tangential_solve(p, degree, grid, 1.0, tol);
        } catch (const NotConvergedError&) {
            throw;
        } catch (const Error& e) {
            throw Error(ErrorCode::HypothesisInsufficientAtScale,
                        std::string("reduced tangential problem failed: ") + e.what());
        }
    }();
    if (ts.grid_norm > 1.0 + tol) {
        throw Error(ErrorCode::HypothesisInsufficientAtScale,
                    "reduced tangential problem needs grid norm " + std::to_string(ts.grid_norm) +
                        " > 1 at degree " + std::to_string(degree));
    }

    VectorAnalyticFunction g(cp.algebra(), degree, ts.function.coefficients() / cp.delta);
    auto identity_residual = [&](const Eigen::VectorXcd& pts) {
        const Eigen::MatrixXcd fv = cp.row.evaluate(pts);
        const Eigen::MatrixXcd gv = g.evaluate(pts);
        const Eigen::VectorXcd prod = fv.cwiseProduct(gv).rowwise().sum();
        return (prod.array() - 1.0).abs().maxCoeff();
    };

    CoronaReport report;
    report.verdict = CoronaVerdict::Solved;
    report.sets_tested = 1;
    report.node_residual = identity_residual(nodes);
    report.grid_residual = identity_residual(grid.points);
    report.solution_norm = g.grid_norm(grid);
    report.slack = report.solution_norm * cp.delta - 1.0;
    return CoronaSolution{std::move(g), std::move(report)};
}

}  // namespace hardy
