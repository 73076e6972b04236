#include "hardy/solve.hpp"

#include <string>

namespace hardy {

Eigen::Index basis_size(const AlgebraSpec& algebra, int degree) {
    if (degree < 0) throw Error(ErrorCode::InvalidInput, "degree must be nonnegative");
    return std::holds_alternative<FullHinf>(algebra) ? degree + 1 : degree + 2;
}

Eigen::VectorXcd basis_row(const AlgebraSpec& algebra, int degree, Complex z) {
    Eigen::VectorXcd row(basis_size(algebra, degree));
    if (const BlaschkeProduct* b = inner_factor(algebra)) {
        row(0) = 1.0;
        Complex term = (*b)(z);
        for (int l = 0; l <= degree; ++l) {
            row(l + 1) = term;
            term *= z;
        }
    } else {
        Complex term = 1.0;
        for (int l = 0; l <= degree; ++l) {
            row(l) = term;
            term *= z;
        }
    }
    return row;
}

Eigen::MatrixXcd basis_matrix(const AlgebraSpec& algebra, int degree, const Eigen::VectorXcd& points) {
    Eigen::MatrixXcd m(points.size(), basis_size(algebra, degree));
    for (Eigen::Index i = 0; i < points.size(); ++i) m.row(i) = basis_row(algebra, degree, points(i)).transpose();
    return m;
}

VectorAnalyticFunction::VectorAnalyticFunction(AlgebraSpec algebra, int degree, Eigen::MatrixXcd coefficients,
                                               Eigen::VectorXcd denominator)
    : algebra_(std::move(algebra)),
      degree_(degree),
      coefficients_(std::move(coefficients)),
      denominator_(std::move(denominator)) {
    if (coefficients_.rows() < 1) throw Error(ErrorCode::InvalidInput, "function needs at least one component");
    if (coefficients_.cols() != basis_size(algebra_, degree_)) {
        throw Error(ErrorCode::InvalidInput, "coefficient count does not match the basis");
    }
    if (denominator_.size() > 0 && !std::holds_alternative<FullHinf>(algebra_)) {
        throw Error(ErrorCode::InvalidInput, "rational representation is only used for H-infinity");
    }
}

namespace {

Complex horner(const Eigen::VectorXcd& poly, Complex z) {
    Complex acc = 0.0;
    for (Eigen::Index k = poly.size() - 1; k >= 0; --k) acc = acc * z + poly(k);
    return acc;
}

}  // namespace

Eigen::VectorXcd VectorAnalyticFunction::operator()(Complex z) const {
    Eigen::VectorXcd value = coefficients_ * basis_row(algebra_, degree_, z);
    if (denominator_.size() > 0) value /= horner(denominator_, z);
    return value;
}

Eigen::MatrixXcd VectorAnalyticFunction::evaluate(const Eigen::VectorXcd& points) const {
    Eigen::MatrixXcd values = basis_matrix(algebra_, degree_, points) * coefficients_.transpose();
    if (denominator_.size() > 0) {
        for (Eigen::Index i = 0; i < points.size(); ++i) values.row(i) /= horner(denominator_, points(i));
    }
    return values;
}

double VectorAnalyticFunction::grid_norm(const DiskGrid& grid) const { return max_row_norm(evaluate(grid.points)); }

// ---------------------------------------------------------------------------
// Schur recursion
// ---------------------------------------------------------------------------

namespace {

// p * (c0 + c1 z)
Eigen::VectorXcd times_linear(const Eigen::VectorXcd& p, Complex c0, Complex c1) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(p.size() + 1);
    out.head(p.size()) += c0 * p;
    out.tail(p.size()) += c1 * p;
    return out;
}

Eigen::VectorXcd pad(const Eigen::VectorXcd& p, Eigen::Index n) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    out.head(p.size()) = p;
    return out;
}

}  // namespace

VectorAnalyticFunction schur_interpolate(const Eigen::VectorXcd& points, const Eigen::VectorXcd& values,
                                         double alpha) {
    const Eigen::Index n = points.size();
    if (n < 1 || values.size() != n) throw Error(ErrorCode::InvalidInput, "points and values differ in count");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidInput, "alpha must be positive");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(std::abs(points(i)) < 1.0)) throw Error(ErrorCode::InvalidInput, "node outside the open unit disk");
        for (Eigen::Index j = 0; j < i; ++j) {
            if (std::abs(points(i) - points(j)) <= 1e-12) {
                throw Error(ErrorCode::DuplicateNodes, "nodes " + std::to_string(j) + " and " +
                                                           std::to_string(i) + " coincide");
            }
        }
    }

    const Eigen::VectorXcd u = values / alpha;
    // A value of modulus alpha can only be attained by a unimodular constant.
    for (Eigen::Index j = 0; j < n && n >= 2; ++j) {
        if (std::abs(u(j)) < 1.0 - 1e-12) continue;
        const Complex g = u(j) / std::abs(u(j));
        for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(u(k) - g) > 1e-8) {
                throw Error(ErrorCode::DegenerateBoundaryData,
                            "value " + std::to_string(j) + " has modulus alpha but the data is not constant");
            }
        }
    }
    TangentialProblem scalar{points, Eigen::MatrixXcd::Ones(1, n), u, 1.0, FullHinf{}};
    const FeasibilityReport feas = feasible_single(scalar, KernelSpec::szego(), 1e-10);
    if (feas.verdict != Verdict::Feasible) {
        throw Error(ErrorCode::Infeasible, "Pick matrix has eigenvalue " + std::to_string(feas.worst_min_eig));
    }

    std::vector<Complex> pts(points.data(), points.data() + n);
    std::vector<Complex> vals(u.data(), u.data() + n);
    std::vector<std::pair<Complex, Complex>> steps;  // (node a, value γ)
    Complex tail = 0.0;
    while (true) {
        const Complex a = pts.front();
        Complex g = vals.front();
        if (std::abs(g) >= 1.0 - 1e-12) {
            // Boundary value: the only solution is the unimodular constant.
            g /= std::abs(g);
            for (std::size_t j = 1; j < vals.size(); ++j) {
                if (std::abs(vals[j] - g) > 1e-8) {
                    throw Error(ErrorCode::DegenerateBoundaryData,
                                "unimodular value reached with non-matching remaining data");
                }
            }
            tail = g;
            break;
        }
        if (pts.size() == 1) {
            tail = g;
            break;
        }
        std::vector<Complex> next_pts(pts.begin() + 1, pts.end());
        std::vector<Complex> next_vals;
        next_vals.reserve(next_pts.size());
        for (std::size_t j = 1; j < pts.size(); ++j) {
            const Complex mobius = (vals[j] - g) / (1.0 - std::conj(g) * vals[j]);
            const Complex phi = (pts[j] - a) / (1.0 - std::conj(a) * pts[j]);
            Complex next = mobius / phi;
            const double mod = std::abs(next);
            if (mod > 1.0 + 1e-9) {
                throw Error(ErrorCode::Infeasible, "Schur step produced a value of modulus " + std::to_string(mod));
            }
            if (mod > 1.0) next /= mod;
            next_vals.push_back(next);
        }
        steps.emplace_back(a, g);
        pts = std::move(next_pts);
        vals = std::move(next_vals);
    }

    // f_k = (φ_a f_{k+1} + γ) / (1 + conj(γ) φ_a f_{k+1}) with φ_a = (z - a)/(1 - ā z),
    // carried as numerator/denominator polynomials.
    Eigen::VectorXcd num = Eigen::VectorXcd::Constant(1, tail);
    Eigen::VectorXcd den = Eigen::VectorXcd::Constant(1, 1.0);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        const auto [a, g] = *it;
        const Eigen::VectorXcd zn = times_linear(num, -a, 1.0);           // (z - a) N
        const Eigen::VectorXcd bd = times_linear(den, 1.0, -std::conj(a)); // (1 - ā z) D
        num = zn + g * bd;
        den = bd + std::conj(g) * zn;
    }
    // Normalize so the denominator has constant term 1.
    const Complex d0 = den(0);
    num /= d0;
    den /= d0;
    const Eigen::Index deg = std::max(num.size(), den.size()) - 1;
    Eigen::MatrixXcd coeffs = (alpha * pad(num, deg + 1)).transpose();
    return VectorAnalyticFunction(FullHinf{}, static_cast<int>(deg), coeffs, pad(den, deg + 1));
}

// ---------------------------------------------------------------------------
// Separation classes and idempotents
// ---------------------------------------------------------------------------

std::vector<Eigen::Index> SeparationPartition::members(Eigen::Index k) const {
    return {order.begin() + boundaries[static_cast<std::size_t>(k)],
            order.begin() + boundaries[static_cast<std::size_t>(k) + 1]};
}

Complex SeparationPartition::representative(Eigen::Index k) const {
    return points(order[static_cast<std::size_t>(boundaries[static_cast<std::size_t>(k)])]);
}

SeparationPartition separation_classes(const AlgebraSpec& algebra, const Eigen::VectorXcd& points) {
    const BlaschkeProduct* b = inner_factor(algebra);
    std::vector<std::vector<Eigen::Index>> classes;
    std::vector<Eigen::Index> zero_class;
    for (auto& group : coincident_groups(points)) {
        if (b != nullptr && b->is_zero(points(group.front()))) {
            zero_class.insert(zero_class.end(), group.begin(), group.end());
        } else {
            classes.push_back(std::move(group));
        }
    }
    if (!zero_class.empty()) {
        std::sort(zero_class.begin(), zero_class.end());
        classes.push_back(std::move(zero_class));
        // Classes are ordered by their first member.
        std::sort(classes.begin(), classes.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    }

    SeparationPartition part;
    part.points = points;
    part.class_of.assign(static_cast<std::size_t>(points.size()), 0);
    part.boundaries.push_back(0);
    for (std::size_t k = 0; k < classes.size(); ++k) {
        for (const Eigen::Index i : classes[k]) {
            part.order.push_back(i);
            part.class_of[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(k);
        }
        part.boundaries.push_back(static_cast<Eigen::Index>(part.order.size()));
    }
    return part;
}

std::vector<VectorAnalyticFunction> separating_idempotents(const AlgebraSpec& algebra,
                                                           const SeparationPartition& partition, int degree) {
    const Eigen::Index p = partition.class_count();
    const Eigen::Index nb = basis_size(algebra, degree);
    std::vector<VectorAnalyticFunction> out;
    if (p == 1) {
        Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(1, nb);
        one(0, 0) = 1.0;
        out.emplace_back(algebra, degree, one);
        return out;
    }
    Eigen::MatrixXcd a(p, nb);
    for (Eigen::Index k = 0; k < p; ++k) a.row(k) = basis_row(algebra, degree, partition.representative(k)).transpose();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(p, p);
    const Eigen::MatrixXcd sol = cod.solve(id);
    const double resid = (a * sol - id).cwiseAbs().maxCoeff();
    if (!(resid <= 1e-9)) {
        throw Error(ErrorCode::DegreeTooSmall, "degree " + std::to_string(degree) + " cannot separate " +
                                                   std::to_string(p) + " classes (residual " +
                                                   std::to_string(resid) + ")");
    }
    for (Eigen::Index k = 0; k < p; ++k) out.emplace_back(algebra, degree, sol.col(k).transpose());
    return out;
}

WitnessConstruction witness_interpolant(const TangentialProblem& p, int degree) {
    p.validate();
    SeparationPartition part = separation_classes(p.algebra, p.points);
    std::vector<VectorAnalyticFunction> e = separating_idempotents(p.algebra, part, degree);
    const Eigen::Index m = p.components();
    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(m, basis_size(p.algebra, degree));
    std::vector<Eigen::VectorXcd> xi;
    for (Eigen::Index k = 0; k < part.class_count(); ++k) {
        auto v = gram_range_vector(p.directions, p.targets, part.members(k));
        if (!v) {
            throw Error(ErrorCode::NoSolutionExists,
                        "targets of class " + std::to_string(k) + " are outside the range of its Gram matrix");
        }
        coeffs += *v * e[static_cast<std::size_t>(k)].coefficients();
        xi.push_back(std::move(*v));
    }
    VectorAnalyticFunction f(p.algebra, degree, std::move(coeffs));
    return WitnessConstruction{std::move(e), std::move(xi), std::move(part), std::move(f)};
}

// ---------------------------------------------------------------------------
// Norm-controlled solutions
// ---------------------------------------------------------------------------

Eigen::VectorXd constraint_residuals(const VectorAnalyticFunction& f, const TangentialProblem& p) {
    if (f.components() != p.components()) {
        throw Error(ErrorCode::InvalidInput, "function and directions differ in component count");
    }
    const Eigen::MatrixXcd values = f.evaluate(p.points);
    Eigen::VectorXd r(p.nodes());
    for (Eigen::Index j = 0; j < p.nodes(); ++j) {
        r(j) = std::abs(p.directions.col(j).dot(values.row(j).transpose()) - p.targets(j));
    }
    return r;
}

TangentialSolution tangential_solve(const TangentialProblem& p, int degree, const DiskGrid& grid, double level,
                                    double tol) {
    p.validate();
    check_duplicate_consistency(p);
    const Eigen::Index m = p.components();
    const Eigen::Index nb = basis_size(p.algebra, degree);

    const Eigen::MatrixXcd e = basis_matrix(p.algebra, degree, grid.points);
    const std::vector<Eigen::MatrixXcd> evals(static_cast<std::size_t>(m), e);
    Eigen::MatrixXcd constraints(p.nodes(), m * nb);
    for (Eigen::Index j = 0; j < p.nodes(); ++j) {
        const Eigen::VectorXcd row = basis_row(p.algebra, degree, p.points(j));
        for (Eigen::Index k = 0; k < m; ++k) {
            constraints.block(j, k * nb, 1, nb) = std::conj(p.directions(k, j)) * row.transpose();
        }
    }
    const MinimaxSolution mm = minimax_affine(evals, constraints, p.targets, tol);

    VectorAnalyticFunction f(p.algebra, degree, mm.coefficients);
    const double residual = constraint_residuals(f, p).maxCoeff();
    return TangentialSolution{f,           mm.achieved_level, level, mm.achieved_level <= level * (1.0 + 1e-9),
                              residual,    mm.iterations,     mm.converged};
}

VerificationReport verify_solution(const VectorAnalyticFunction& f, const TangentialProblem& p,
                                   const DiskGrid& grid, double tol, const FamilyOptions& family) {
    p.validate();
    VerificationReport r;
    r.residuals = constraint_residuals(f, p);
    r.max_residual = r.residuals.maxCoeff();
    r.grid_norm = f.grid_norm(grid);
    TangentialProblem at_norm = p;
    at_norm.alpha = std::max(r.grid_norm, std::numeric_limits<double>::min());
    if (inner_factor(p.algebra) != nullptr) {
        FamilyOptions opts = family;
        opts.tol = tol;
        r.pick = feasible_family(at_norm, opts);
    } else {
        r.pick = feasible_single(at_norm, KernelSpec::szego(), tol);
    }
    return r;
}

}  // namespace hardy
