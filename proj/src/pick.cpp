#include "hardy/pick.hpp"

#include <vector>

namespace hardy {

const BlaschkeProduct* inner_factor(const AlgebraSpec& algebra) noexcept {
    if (const auto* c = std::get_if<CplusB>(&algebra)) return &c->product;
    return nullptr;
}

std::string algebra_name(const AlgebraSpec& algebra) {
    return std::holds_alternative<FullHinf>(algebra) ? "hinf" : "cplusb";
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Feasible: return "Feasible";
    case Verdict::Infeasible: return "Infeasible";
    case Verdict::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

void TangentialProblem::validate() const {
    const Eigen::Index n = points.size();
    if (n < 1) throw Error(ErrorCode::InvalidInput, "problem needs at least one node");
    if (directions.rows() < 1) throw Error(ErrorCode::InvalidInput, "direction vectors need at least one component");
    if (directions.cols() != n || targets.size() != n) {
        throw Error(ErrorCode::InvalidInput, "points, directions and targets differ in count");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(std::abs(points(j)) < 1.0)) throw Error(ErrorCode::InvalidInput, "node outside the open unit disk");
        if (directions.col(j).norm() == 0.0) throw Error(ErrorCode::InvalidInput, "direction vector is zero");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidInput, "alpha must be positive");
}

std::vector<std::vector<Eigen::Index>> coincident_groups(const Eigen::VectorXcd& points, double tol) {
    std::vector<std::vector<Eigen::Index>> groups;
    std::vector<bool> used(static_cast<std::size_t>(points.size()), false);
    for (Eigen::Index i = 0; i < points.size(); ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        std::vector<Eigen::Index> g{i};
        for (Eigen::Index j = i + 1; j < points.size(); ++j) {
            if (!used[static_cast<std::size_t>(j)] && std::abs(points(i) - points(j)) <= tol) {
                g.push_back(j);
                used[static_cast<std::size_t>(j)] = true;
            }
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

std::optional<Eigen::VectorXcd> gram_range_vector(const Eigen::MatrixXcd& directions,
                                                  const Eigen::VectorXcd& targets,
                                                  const std::vector<Eigen::Index>& indices) {
    const auto t = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXcd v(directions.rows(), t);
    Eigen::VectorXcd w(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        v.col(i) = directions.col(indices[static_cast<std::size_t>(i)]);
        w(i) = targets(indices[static_cast<std::size_t>(i)]);
    }
    const Eigen::MatrixXcd gram = v.adjoint() * v;  // (i, j) = ⟨v_j, v_i⟩
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(gram);
    const Eigen::VectorXcd a = cod.solve(w);
    if ((gram * a - w).norm() > 1e-8 * std::max(1.0, w.norm())) return std::nullopt;
    return Eigen::VectorXcd(v * a);
}

void check_duplicate_consistency(const TangentialProblem& p) {
    for (const auto& g : coincident_groups(p.points)) {
        if (g.size() < 2) continue;
        if (!gram_range_vector(p.directions, p.targets, g)) {
            throw Error(ErrorCode::InconsistentDuplicates,
                        "coincident nodes carry contradictory direction/target data");
        }
    }
}

Eigen::MatrixXcd pick_data_matrix(const Eigen::MatrixXcd& directions, const Eigen::VectorXcd& targets,
                                  double alpha) {
    Eigen::MatrixXcd d = alpha * alpha * (directions.adjoint() * directions);
    d -= targets * targets.adjoint();
    return d;
}

namespace {

void check_kernel_matches(const AlgebraSpec& algebra, const KernelSpec& kernel) {
    const auto& kv = kernel.variant();
    if (std::holds_alternative<FullHinf>(algebra)) {
        if (!std::holds_alternative<KernelSpec::Szego>(kv)) {
            throw Error(ErrorCode::KernelMismatch, "H-infinity problems use the Szego kernel");
        }
        return;
    }
    const auto* cyc = std::get_if<KernelSpec::CyclicCplusB>(&kv);
    if (cyc == nullptr || cyc->basis.product().zeros() != inner_factor(algebra)->zeros()) {
        throw Error(ErrorCode::KernelMismatch, "C+BH-infinity problems use cyclic kernels over the same B");
    }
}

Eigen::MatrixXcd hermitian_product(const Eigen::MatrixXcd& data, const Eigen::MatrixXcd& gram) {
    Eigen::MatrixXcd q = data.cwiseProduct(gram);
    // Symmetrize so the eigen solver sees an exactly Hermitian matrix.
    q = (q + q.adjoint()).eval() * 0.5;
    return q;
}

}  // namespace

PickMatrix build_pick_matrix(const TangentialProblem& p, const KernelSpec& kernel) {
    p.validate();
    check_kernel_matches(p.algebra, kernel);
    check_duplicate_consistency(p);
    const Eigen::MatrixXcd data = pick_data_matrix(p.directions, p.targets, p.alpha);
    return PickMatrix{hermitian_product(data, kernel.gram(p.points)), kernel.tag()};
}

FeasibilityReport feasible_single(const TangentialProblem& p, const KernelSpec& kernel, double tol) {
    const PickMatrix q = build_pick_matrix(p, kernel);
    const PsdVerdict v = is_psd(q.matrix, tol);
    FeasibilityReport r;
    r.verdict = v.psd ? Verdict::Feasible : Verdict::Infeasible;
    r.worst_min_eig = v.min_eig;
    r.samples_tested = 1;
    if (const auto* c = std::get_if<KernelSpec::CyclicCplusB>(&kernel.variant())) r.worst_parameter = c->v;
    return r;
}

namespace {

// Everything about the family of Pick matrices Q_c = D ∘ (a a^H + (b b^H) ∘ S), a = E c,
// that does not depend on the model-space coefficients c.
struct FamilyData {
    Eigen::MatrixXcd data;   // D
    Eigen::MatrixXcd basis;  // E, n × d
    Eigen::MatrixXcd fixed;  // D ∘ (b b^H) ∘ S

    [[nodiscard]] Eigen::MatrixXcd matrix(const Eigen::VectorXcd& c) const {
        const Eigen::VectorXcd a = basis * c;
        return hermitian_product(data, a * a.adjoint()) + fixed;
    }
};

FamilyData family_data(const Eigen::MatrixXcd& data, const Eigen::VectorXcd& points, const BlaschkeProduct& b) {
    const ModelSpaceBasis basis(b);
    const Eigen::Index n = points.size();
    FamilyData f;
    f.data = data;
    f.basis.resize(n, basis.dimension());
    Eigen::VectorXcd bv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        f.basis.row(i) = basis.evaluate(points(i)).transpose();
        bv(i) = b(points(i));
    }
    const Eigen::MatrixXcd szego = KernelSpec::szego().gram(points);
    f.fixed = hermitian_product(data, (bv * bv.adjoint()).cwiseProduct(szego));
    return f;
}

// Projected descent of λ_min(Q_c) over the unit sphere, step halving on failure.
std::pair<Eigen::VectorXcd, double> refine_worst(const FamilyData& f, Eigen::VectorXcd c, int steps) {
    auto eig = hermitian_eigen(f.matrix(c));
    double value = eig.values(0);
    double eta = -1.0;
    for (int s = 0; s < steps; ++s) {
        const Eigen::VectorXcd u = eig.vectors.col(0);
        // λ(c) = c^H H c + const for the current eigenvector u.
        const Eigen::MatrixXcd ut = u.conjugate().asDiagonal() * f.basis;
        const Eigen::MatrixXcd h = ut.adjoint() * f.data.conjugate() * ut;
        Eigen::VectorXcd g = h * c;
        g -= std::real(c.dot(g)) * c;
        const double gn = g.norm();
        if (gn <= 1e-15) break;
        if (eta < 0.0) eta = 0.5 / std::max(h.norm(), 1e-300);
        Eigen::VectorXcd trial = c - eta * g;
        trial.normalize();
        auto trial_eig = hermitian_eigen(f.matrix(trial));
        if (trial_eig.values(0) < value) {
            c = std::move(trial);
            eig = std::move(trial_eig);
            value = eig.values(0);
            eta *= 1.5;
        } else {
            eta *= 0.5;
        }
    }
    return {c, value};
}

}  // namespace

FeasibilityReport family_sweep(const Eigen::MatrixXcd& data, const Eigen::VectorXcd& points,
                               const BlaschkeProduct& b, const FamilyOptions& options) {
    if (options.samples < 1) throw Error(ErrorCode::InvalidInput, "family sweep needs at least one sample");
    const FamilyData f = family_data(data, points, b);
    const auto samples = sample_model_sphere(b, options.samples, options.seed);
    std::vector<double> mins(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        mins[i] = hermitian_min_eig(f.matrix(samples[i].coefficients));
    });
    std::size_t worst = 0;
    for (std::size_t i = 1; i < mins.size(); ++i) {
        if (mins[i] < mins[worst]) worst = i;
    }
    Eigen::VectorXcd c = samples[worst].coefficients;
    double value = mins[worst];
    if (options.refine) {
        auto [rc, rv] = refine_worst(f, c, options.refine_steps);
        if (rv < value) {
            c = std::move(rc);
            value = rv;
        }
    }
    FeasibilityReport r;
    r.samples_tested = options.samples;
    r.worst_min_eig = value;
    r.worst_parameter = ModelVector{c};
    r.verdict = value >= -options.tol ? Verdict::Feasible : Verdict::Infeasible;
    return r;
}

FeasibilityReport feasible_family(const TangentialProblem& p, const FamilyOptions& options) {
    p.validate();
    const BlaschkeProduct* b = inner_factor(p.algebra);
    if (b == nullptr) {
        throw Error(ErrorCode::KernelMismatch, "kernel families apply to C+BH-infinity; use the single Szego test");
    }
    check_duplicate_consistency(p);
    return family_sweep(pick_data_matrix(p.directions, p.targets, p.alpha), p.points, *b, options);
}

FeasibilityReport scaled_single_kernel_check(const TangentialProblem& p, double similarity_bound, double tol) {
    p.validate();
    const BlaschkeProduct* b = inner_factor(p.algebra);
    if (b == nullptr) {
        throw Error(ErrorCode::KernelMismatch, "the scaled single-kernel check applies to C+BH-infinity");
    }
    if (!(similarity_bound >= 1.0)) throw Error(ErrorCode::InvalidInput, "similarity bound must be at least 1");
    Eigen::VectorXcd v = ModelSpaceBasis(*b).projection_of_one();
    v.normalize();
    FeasibilityReport r = feasible_single(p, KernelSpec::cyclic(*b, ModelVector{v}), tol);
    r.conditional = true;
    if (r.verdict == Verdict::Feasible) r.guarantee_level = p.alpha * similarity_bound;
    return r;
}

}  // namespace hardy
