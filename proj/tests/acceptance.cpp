// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <unistd.h>

#include "hardy/cli.hpp"
#include "hardy/corona.hpp"
#include "hardy/duality.hpp"
#include "hardy/solve.hpp"
#include "unit/oracles.hpp"

using hardy::BlaschkeProduct;
using hardy::Complex;
using hardy::KernelSpec;
using hardy::TangentialProblem;
using hardy::VectorAnalyticFunction;
using hardy::Verdict;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Eigen::VectorXcd random_points(std::mt19937_64& g, Eigen::Index n, double radius) {
    Eigen::VectorXcd x(n);
    for (Eigen::Index j = 0; j < n; ++j) x(j) = oracle::disk_point(g, radius);
    return x;
}

// 1. Two-node Szegő verdicts against the pseudo-hyperbolic inequality.
Outcome schwarz_agreement() {
    auto& g = oracle::rng(1001);
    int agree = 0;
    for (int t = 0; t < 100; ++t) {
        TangentialProblem p;
        p.points = random_points(g, 2, 0.95);
        p.targets = random_points(g, 2, 1.0);
        p.directions = Eigen::MatrixXcd::Ones(1, 2);
        const auto rep = hardy::feasible_single(p, KernelSpec::szego(), 1e-9);
        const bool expected = oracle::pseudo_hyperbolic(p.targets(0), p.targets(1)) <=
                              oracle::pseudo_hyperbolic(p.points(0), p.points(1));
        agree += (rep.verdict == Verdict::Feasible) == expected;
    }
    return {agree == 100, std::to_string(agree) + "/100 verdicts agree"};
}

// 2. Schur construction on random feasible data.
Outcome schur_construction() {
    auto& g = oracle::rng(1002);
    const auto grid = hardy::disk_grid(16, 256, 0.995);
    double worst_res = 0.0, worst_ratio = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Eigen::Index n = 1 + t % 5;
        const Eigen::VectorXcd x = random_points(g, n, 0.9);
        const double alpha = oracle::uniform(g, 0.2, 5.0);
        const double scale = oracle::uniform(g, 0.5, 0.999);
        std::vector<Complex> zeros;
        for (Eigen::Index k = 0; k < n; ++k) zeros.push_back(oracle::disk_point(g, 0.9));
        const Complex gamma = std::polar(1.0, oracle::uniform(g, 0.0, 6.3));
        Eigen::VectorXcd w(n);
        for (Eigen::Index j = 0; j < n; ++j) w(j) = alpha * scale * oracle::blaschke(zeros, x(j), gamma);
        const auto f = hardy::schur_interpolate(x, w, alpha);
        for (Eigen::Index j = 0; j < n; ++j) worst_res = std::max(worst_res, std::abs(f(x(j))(0) - w(j)));
        worst_ratio = std::max(worst_ratio, f.grid_norm(grid) / alpha);
    }
    return {worst_res <= 1e-8 && worst_ratio <= 1.0 + 1e-6,
            "max residual " + fmt("%.2e", worst_res) + ", max grid norm / alpha " + fmt("%.9f", worst_ratio)};
}

// 3. Pick matrices built from the values of an actual F are PSD.
Outcome necessity() {
    auto& g = oracle::rng(1003);
    const hardy::QuadratureRule circle(8192);
    double worst = std::numeric_limits<double>::infinity();
    int matrices = 0;
    for (int t = 0; t < 100; ++t) {
        const bool cplusb = t % 2 == 1;
        const Eigen::Index m = 1 + t % 4;
        const int degree = t % 9;
        hardy::AlgebraSpec algebra = hardy::FullHinf{};
        std::optional<BlaschkeProduct> b;
        if (cplusb) {
            std::vector<Complex> zeros;
            for (int k = 0; k < 1 + t % 3; ++k) zeros.push_back(oracle::disk_point(g, 0.8));
            b.emplace(zeros);
            algebra = hardy::CplusB{*b};
        }
        Eigen::MatrixXcd c(m, hardy::basis_size(algebra, degree));
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = oracle::gaussian(g);
        const VectorAnalyticFunction f(algebra, degree, c);
        // The sup of ‖F‖ over the closed disk is attained on the circle.
        double alpha = 0.0;
        for (std::size_t k = 0; k < circle.size(); ++k) alpha = std::max(alpha, f(circle.point(k)).norm());

        std::vector<KernelSpec> kernels;
        if (b) {
            for (const auto& v : hardy::sample_model_sphere(*b, 200, static_cast<std::uint64_t>(t))) {
                kernels.push_back(KernelSpec::cyclic(*b, v));
            }
        } else {
            kernels.push_back(KernelSpec::szego());
        }
        TangentialProblem p;
        p.algebra = algebra;
        p.alpha = alpha;
        p.points = random_points(g, 5, 0.95);
        p.directions.resize(m, 5);
        for (Eigen::Index i = 0; i < p.directions.size(); ++i) p.directions(i) = oracle::gaussian(g);
        p.directions.colwise().normalize();
        p.targets.resize(5);
        for (Eigen::Index j = 0; j < 5; ++j) p.targets(j) = p.directions.col(j).dot(f(p.points(j)));
        for (const KernelSpec& k : kernels) {
            worst = std::min(worst, hardy::hermitian_min_eig(hardy::build_pick_matrix(p, k).matrix));
            ++matrices;
        }
    }
    return {worst >= -1e-6, std::to_string(matrices) + " Pick matrices, min eigenvalue " + fmt("%.3e", worst)};
}

// 4. Single kernel passes, family fails, and the minimax norm stays near 2.
Outcome family_strictness() {
    TangentialProblem p;
    p.points = Eigen::Vector2cd(0.0, 0.5);
    p.targets = Eigen::Vector2cd(0.0, 0.5);
    p.directions = Eigen::MatrixXcd::Ones(1, 2);
    p.alpha = 1.0;
    const auto single = hardy::feasible_single(p, KernelSpec::szego());
    p.algebra = hardy::CplusB{BlaschkeProduct({0.0, 0.0})};
    const auto family = hardy::feasible_family(p);
    const bool witness = family.worst_parameter.has_value() && family.worst_parameter->is_normalized();
    const auto grid = hardy::disk_grid(8, 128, 0.995);
    double lowest = std::numeric_limits<double>::infinity();
    for (int degree = 0; degree <= 20; ++degree) {
        lowest = std::min(lowest, hardy::tangential_solve(p, degree, grid, 1.0).grid_norm);
    }
    const bool pass = single.verdict == Verdict::Feasible && family.verdict == Verdict::Infeasible && witness &&
                      lowest >= 1.9;
    return {pass, "Szego " + hardy::to_string(single.verdict) + ", family " + hardy::to_string(family.verdict) +
                      " (min eig " + fmt("%.4f", family.worst_min_eig) + (witness ? ", witness v" : ", no witness") +
                      "), lowest norm over degrees 0..20 " + fmt("%.6f", lowest)};
}

// 5. Corona solve and the necessity loop at δ' = 1/‖G‖.
Outcome corona_loop() {
    Eigen::MatrixXcd c(2, 2);
    c << 0.0, 1.0, 0.5, 0.0;
    const VectorAnalyticFunction row(hardy::FullHinf{}, 1, c);
    Eigen::VectorXcd nodes(5);
    nodes << 0.0, 0.5, -0.5, Complex(0, 0.5), Complex(0, -0.5);
    const auto grid = hardy::disk_grid(32, 128, 0.995);
    const auto sol = hardy::corona_solve(hardy::CoronaProblem{row, 0.5}, nodes, 10, grid);
    auto& g = oracle::rng(1005);
    std::vector<Eigen::VectorXcd> sets{nodes};
    for (int s = 0; s < 20; ++s) sets.push_back(random_points(g, 1 + s % 5, 0.95));
    const double delta_back = 1.0 / sol.report.solution_norm;
    const auto check = hardy::corona_check(hardy::CoronaProblem{row, delta_back}, sets);
    const bool pass = sol.report.node_residual <= 1e-8 && sol.report.solution_norm <= 2.0 + 1e-3 &&
                      check.verdict == hardy::CoronaVerdict::Passed;
    return {pass, "node residual " + fmt("%.2e", sol.report.node_residual) + ", norm " +
                      fmt("%.8f", sol.report.solution_norm) + ", check at 1/norm " + hardy::to_string(check.verdict)};
}

// 6. Primal and dual distances agree on random truncations.
Outcome distance_formula() {
    auto& g = oracle::rng(1006);
    double worst_gap = 0.0, worst_violation = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
        const auto n1 = static_cast<Eigen::Index>(1 + g() % 6);
        const auto n2 = static_cast<Eigen::Index>(1 + g() % 6);
        const int dim = static_cast<int>(std::min<std::uint64_t>(g() % 4, static_cast<std::uint64_t>(n1 * n2 - 1)));
        hardy::TruncatedDistanceProblem p;
        p.target.resize(n2, n1);
        for (Eigen::Index i = 0; i < p.target.size(); ++i) p.target(i) = oracle::gaussian(g);
        for (int k = 0; k < dim; ++k) {
            Eigen::MatrixXcd s(n2, n1);
            for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = oracle::gaussian(g);
            p.subspace.push_back(s);
        }
        p.tensor_rank = static_cast<int>(n1);
        const double primal = hardy::distance_primal(p).value;
        const double dual = hardy::distance_dual(p).value;
        worst_gap = std::max(worst_gap, std::abs(primal - dual));
        worst_violation = std::max(worst_violation, dual - primal);
    }
    return {worst_gap <= 1e-6 && worst_violation <= 1e-12,
            "max |primal - dual| " + fmt("%.2e", worst_gap) + ", max dual - primal " + fmt("%.2e", worst_violation)};
}

// 7. Outer functions from boundary moduli.
Outcome outer_construction() {
    auto& g = oracle::rng(1007);
    const Eigen::VectorXcd z = random_points(g, 20, 0.95);
    double best_err = std::numeric_limits<double>::infinity();
    double best_offset = 0.0;
    for (const double offset : {0.0, 0.5}) {
        const hardy::QuadratureRule rule(4096, offset);
        Eigen::VectorXd p(4096);
        for (std::size_t k = 0; k < rule.size(); ++k) p(static_cast<Eigen::Index>(k)) = std::norm(1.0 + rule.point(k));
        double err = std::numeric_limits<double>::infinity();
        try {
            const auto outer = hardy::outer_from_modulus(p, rule);
            err = 0.0;
            for (Eigen::Index j = 0; j < z.size(); ++j) err = std::max(err, std::abs(outer(z(j)) - (1.0 + z(j))));
        } catch (const hardy::Error&) {
        }
        if (err < best_err) {
            best_err = err;
            best_offset = offset;
        }
    }
    const hardy::QuadratureRule rule(4096);
    const auto one = hardy::outer_from_modulus(Eigen::VectorXd::Ones(4096), rule);
    double one_err = 0.0;
    for (Eigen::Index j = 0; j < z.size(); ++j) one_err = std::max(one_err, std::abs(one(z(j)) - 1.0));
    return {best_err <= 1e-6 && one_err <= 1e-12,
            "|1+z| case max error " + fmt("%.3e", best_err) + " (node offset " + fmt("%.1f", best_offset) +
                "), constant case max error " + fmt("%.1e", one_err)};
}

// 8. ‖(M_F ⊗ I) h‖ equals ‖M_F g‖ with |g|² = Σ|h_i|².
Outcome unitary_reduction() {
    auto& g = oracle::rng(1008);
    const hardy::QuadratureRule rule(4096);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        std::vector<Eigen::VectorXcd> h(5, Eigen::VectorXcd(7));
        for (auto& hi : h)
            for (Eigen::Index k = 0; k < 7; ++k) hi(k) = oracle::gaussian(g);
        Eigen::MatrixXcd c(3, 7);
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = oracle::gaussian(g);
        const VectorAnalyticFunction f(hardy::FullHinf{}, 6, c);

        Eigen::VectorXd p(4096);
        for (std::size_t k = 0; k < rule.size(); ++k) {
            double s = 0.0;
            for (const auto& hi : h) s += std::norm(oracle::poly(hi, rule.point(k)));
            p(static_cast<Eigen::Index>(k)) = s;
        }
        const auto outer = hardy::outer_from_modulus(p, rule);
        const Eigen::VectorXcd gb = outer.boundary_values();
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const Eigen::VectorXcd fk = f(rule.point(k));
            for (const auto& hi : h) lhs += (fk * oracle::poly(hi, rule.point(k))).squaredNorm();
            rhs += (fk * gb(static_cast<Eigen::Index>(k))).squaredNorm();
        }
        lhs = std::sqrt(lhs * rule.weight());
        rhs = std::sqrt(rhs * rule.weight());
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, lhs));
    }
    return {worst <= 1e-7, "max relative difference " + fmt("%.2e", worst) + " over 20 tuples"};
}

// 9. Byte-identical certificates across runs and worker counts.
Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("hardy-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> problems = {
        {"feasible", "hardy-problem 1\nkind feasible\nalgebra cplusb\nblaschke_zeros 0 0  0.3 0.2\n"
                     "points 0.1 0  -0.2 0.3  0.5 -0.1\ntargets 0.3 0  0.1 0.1  0.2 -0.4\nalpha 0.9\n"},
        {"solve", "hardy-problem 1\nkind solve\npoints 0 0  0.5 0  0 0.4\ndirection 1 0  0 0\n"
                  "direction 0.6 0  0.8 0\ndirection 0 0  1 0\ntargets 0.2 0  0.3 0.1  -0.1 0\nalpha 1\n"
                  "degree 8\ngrid_radial 12\ngrid_angular 64\n"},
        {"corona", "hardy-problem 1\nkind corona\nrow_degree 1\nrow 0 0  1 0\nrow 0.5 0  0 0\ndelta 0.5\n"
                   "mode solve\nnodes 0 0  0.5 0  -0.5 0  0 0.5  0 -0.5\ndegree 6\n"},
        {"distance", "hardy-problem 1\nkind distance\nrows 2\ncols 3\n"
                     "target 1 0  0.2 0.1  0 1  -0.5 0  0.3 0  0.1 -0.2\n"
                     "subspace 1 0  0 0  0 0  0 0  1 0  0 0\ntensor_rank 3\nstarts 16\n"},
    };
    int identical = 0;
    for (const auto& [kind, text] : problems) {
        const std::string path = (dir / (kind + ".txt")).string();
        std::ofstream(path) << text;
        std::string first;
        bool same = true;
        for (const char* threads : {"1", "4", "1"}) {
            ::setenv("HARDY_INTERP_THREADS", threads, 1);
            std::ostringstream out, err;
            hardy::cli::run_command(kind, path, hardy::cli::Settings{}, out, err);
            if (first.empty()) first = out.str();
            same = same && !first.empty() && out.str() == first;
        }
        identical += same;
    }
    ::unsetenv("HARDY_INTERP_THREADS");
    fs::remove_all(dir);
    return {identical == static_cast<int>(problems.size()),
            std::to_string(identical) + "/" + std::to_string(problems.size()) +
                " commands byte-identical over three runs (1, 4, 1 workers)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Schwarz / pseudo-hyperbolic agreement", schwarz_agreement},
        {"Schur construction", schur_construction},
        {"Necessity of Pick positivity", necessity},
        {"Family strictness", family_strictness},
        {"Corona loop", corona_loop},
        {"Distance formula", distance_formula},
        {"Outer construction", outer_construction},
        {"Unitary reduction", unitary_reduction},
        {"Determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("criterion %zu %s: %s  [%s] (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
