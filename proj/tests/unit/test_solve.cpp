#include <doctest.h>

#include <cmath>

#include "hardy/solve.hpp"
#include "oracles.hpp"

using hardy::BlaschkeProduct;
using hardy::Complex;
using hardy::TangentialProblem;
using hardy::VectorAnalyticFunction;

namespace {

Eigen::VectorXcd vec(std::initializer_list<Complex> v) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (const Complex z : v) out(i++) = z;
    return out;
}

TangentialProblem scalar_problem(const Eigen::VectorXcd& x, const Eigen::VectorXcd& w, double alpha,
                                 hardy::AlgebraSpec algebra = hardy::FullHinf{}) {
    TangentialProblem p;
    p.points = x;
    p.targets = w;
    p.directions = Eigen::MatrixXcd::Ones(1, x.size());
    p.alpha = alpha;
    p.algebra = std::move(algebra);
    return p;
}

/// Scalar dense sup of a one-component function.
double sup_norm(const VectorAnalyticFunction& f, double r = 0.995) {
    return oracle::dense_sup([&](Complex z) { return f(z).norm(); }, r, 48, 512);
}

/// Values of 0.9 B(z) for a random Blaschke product, so that the data has a
/// solution of norm 0.9 < 1.
Eigen::VectorXcd feasible_values(std::mt19937_64& g, const Eigen::VectorXcd& x) {
    const std::vector<Complex> zeros{oracle::disk_point(g, 0.9), oracle::disk_point(g, 0.9)};
    const Complex gamma = std::polar(1.0, oracle::uniform(g, 0.0, 6.0));
    Eigen::VectorXcd w(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) w(j) = 0.9 * oracle::blaschke(zeros, x(j), gamma);
    return w;
}

const hardy::CplusB z_squared{BlaschkeProduct({0.0, 0.0})};

}  // namespace

TEST_CASE("basis evaluation") {
    CHECK(hardy::basis_size(hardy::FullHinf{}, 4) == 5);
    CHECK(hardy::basis_size(z_squared, 4) == 6);
    const Complex z(0.3, 0.2);
    const Eigen::VectorXcd row = hardy::basis_row(z_squared, 2, z);
    REQUIRE(row.size() == 4);
    CHECK(std::abs(row(0) - 1.0) <= 1e-15);
    CHECK(std::abs(row(1) - z * z) <= 1e-15);
    CHECK(std::abs(row(3) - z * z * z * z) <= 1e-15);
}

TEST_CASE("schur_interpolate small cases") {
    const auto zero = hardy::schur_interpolate(vec({0.0}), vec({0.0}), 1.0);
    CHECK(sup_norm(zero) <= 1e-15);

    const auto identity = hardy::schur_interpolate(vec({0.0, 0.5}), vec({0.0, 0.5}), 1.0);
    for (const Complex z : {Complex(0.1, 0.2), Complex(-0.7, 0.3), Complex(0.5, 0.0)}) {
        CHECK(std::abs(identity(z)(0) - z) <= 1e-12);
    }

    const auto quarter = hardy::schur_interpolate(vec({0.0, 0.5}), vec({0.0, 0.25}), 1.0);
    CHECK(std::abs(quarter(0.0)(0)) <= 1e-8);
    CHECK(std::abs(quarter(0.5)(0) - 0.25) <= 1e-8);
    CHECK(sup_norm(quarter) <= 1.0 + 1e-6);
}

TEST_CASE("schur_interpolate on random feasible data") {
    auto& g = oracle::rng(41);
    for (int t = 0; t < 20; ++t) {
        const Eigen::Index n = 1 + t % 5;
        Eigen::VectorXcd x(n);
        for (Eigen::Index j = 0; j < n; ++j) x(j) = oracle::disk_point(g, 0.9);
        const Eigen::VectorXcd w = feasible_values(g, x);
        const auto f = hardy::schur_interpolate(x, w, 1.0);
        for (Eigen::Index j = 0; j < n; ++j) CHECK(std::abs(f(x(j))(0) - w(j)) <= 1e-8);
        CHECK(sup_norm(f) <= 1.0 + 1e-6);
    }
}

TEST_CASE("schur_interpolate error paths") {
    CHECK_THROWS_WITH_AS(hardy::schur_interpolate(vec({0.0, 0.5}), vec({0.0, 0.6}), 1.0), doctest::Contains("Infeasible"),
                         hardy::Error);
    CHECK_THROWS_WITH_AS(hardy::schur_interpolate(vec({0.2, 0.2}), vec({0.1, 0.1}), 1.0),
                         doctest::Contains("DuplicateNodes"), hardy::Error);
    CHECK_THROWS_WITH_AS(hardy::schur_interpolate(vec({0.0, 0.5}), vec({1.0, 0.3}), 1.0),
                         doctest::Contains("DegenerateBoundaryData"), hardy::Error);
    CHECK_THROWS_WITH_AS(hardy::schur_interpolate(vec({0.0, 0.5}), vec({0.3, Complex(0, 2)}), 2.0),
                         doctest::Contains("DegenerateBoundaryData"), hardy::Error);
    // Unimodular constant data is attained by the constant.
    const auto c = hardy::schur_interpolate(vec({0.0, 0.5}), vec({Complex(0, 1), Complex(0, 1)}), 1.0);
    CHECK(std::abs(c(0.3)(0) - Complex(0, 1)) <= 1e-12);
}

TEST_CASE("minimal Schur norm matches the pseudo-hyperbolic oracle") {
    auto& g = oracle::rng(42);
    const auto feasible = [](const Eigen::VectorXcd& x, const Eigen::VectorXcd& w, double alpha) {
        try {
            (void)hardy::schur_interpolate(x, w, alpha);
            return true;
        } catch (const hardy::Error&) {
            return false;
        }
    };
    for (int t = 0; t < 10; ++t) {
        const Complex x1 = oracle::disk_point(g, 0.9), x2 = oracle::disk_point(g, 0.9);
        const Complex w1 = t % 2 == 0 ? Complex(0.0) : oracle::disk_point(g, 0.9);
        const Complex w2 = oracle::disk_point(g, 0.9);
        const Eigen::VectorXcd x = vec({x1, x2}), w = vec({w1, w2});
        double lo = 0.0, hi = 100.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (feasible(x, w, mid) ? hi : lo) = mid;
        }
        const double expected = oracle::two_node_optimal_norm(x1, x2, w1, w2);
        CHECK(std::abs(hi - expected) <= 1e-6 * std::max(1.0, expected));
        if (w1 == 0.0) {
            CHECK(std::abs(hi - oracle::pseudo_hyperbolic(w1, w2) / oracle::pseudo_hyperbolic(x1, x2)) <= 1e-6);
        }
    }
}

TEST_CASE("separation classes") {
    const auto full = hardy::separation_classes(hardy::FullHinf{}, vec({0.1, 0.2, 0.3}));
    CHECK(full.class_count() == 3);

    const hardy::CplusB b{BlaschkeProduct({0.0, 0.5})};
    const auto two = hardy::separation_classes(b, vec({0.0, 0.5, Complex(0, 0.5)}));
    REQUIRE(two.class_count() == 2);
    CHECK(two.class_of[0] == two.class_of[1]);
    CHECK(two.class_of[0] != two.class_of[2]);

    const auto single = hardy::separation_classes(z_squared, vec({0.0, 0.5}));
    CHECK(single.class_count() == 2);
}

TEST_CASE("separating idempotents") {
    const auto part = hardy::separation_classes(hardy::FullHinf{}, vec({0.0, 0.5}));
    const auto e = hardy::separating_idempotents(hardy::FullHinf{}, part, 1);
    REQUIRE(e.size() == 2);
    const Complex z(0.3, -0.1);
    CHECK(std::abs(e[part.class_of[0]](z)(0) - (1.0 - 2.0 * z)) <= 1e-12);
    CHECK(std::abs(e[part.class_of[1]](z)(0) - 2.0 * z) <= 1e-12);

    const hardy::CplusB b{BlaschkeProduct({0.0, 0.5})};
    const auto one_class = hardy::separation_classes(b, vec({0.0, 0.5}));
    const auto unit = hardy::separating_idempotents(b, one_class, 3);
    REQUIRE(unit.size() == 1);
    CHECK(std::abs(unit[0](z)(0) - 1.0) <= 1e-12);

    const auto zz = hardy::separation_classes(z_squared, vec({0.0, 0.5}));
    const auto ez = hardy::separating_idempotents(z_squared, zz, 2);
    for (Eigen::Index k = 0; k < 2; ++k)
        for (Eigen::Index j = 0; j < 2; ++j)
            CHECK(std::abs(ez[k](zz.points(j))(0) - (zz.class_of[j] == k ? 1.0 : 0.0)) <= 1e-9);

    const auto three = hardy::separation_classes(hardy::FullHinf{}, vec({0.0, 0.5, -0.5}));
    CHECK_THROWS_WITH_AS(hardy::separating_idempotents(hardy::FullHinf{}, three, 1), doctest::Contains("DegreeTooSmall"),
                         hardy::Error);
}

TEST_CASE("witness_interpolant") {
    TangentialProblem one;
    one.points = vec({0.0});
    one.directions = Eigen::MatrixXcd(2, 1);
    one.directions << 1.0, 0.0;
    one.targets = vec({2.0});
    const auto w = hardy::witness_interpolant(one, 3);
    REQUIRE(w.class_vectors.size() == 1);
    CHECK((w.class_vectors[0] - vec({2.0, 0.0})).norm() <= 1e-12);
    CHECK((w.function(Complex(0.4, 0.2)) - vec({2.0, 0.0})).norm() <= 1e-12);

    TangentialProblem rank_one;
    rank_one.points = vec({0.0, 0.5});
    rank_one.directions = Eigen::MatrixXcd(2, 2);
    rank_one.directions << 1.0, 1.0, 0.0, 0.0;
    rank_one.targets = vec({0.0, 1.0});
    rank_one.algebra = hardy::CplusB{BlaschkeProduct({0.0, 0.5})};
    CHECK_THROWS_WITH_AS(hardy::witness_interpolant(rank_one, 3), doctest::Contains("NoSolutionExists"), hardy::Error);

    auto& g = oracle::rng(43);
    for (int t = 0; t < 10; ++t) {
        TangentialProblem p;
        p.points = vec({oracle::disk_point(g, 0.9), oracle::disk_point(g, 0.9)});
        p.directions.resize(3, 2);
        for (Eigen::Index i = 0; i < p.directions.size(); ++i) p.directions(i) = oracle::gaussian(g);
        p.directions.colwise().normalize();
        p.targets = vec({oracle::gaussian(g), oracle::gaussian(g)});
        const auto wi = hardy::witness_interpolant(p, 2);
        for (Eigen::Index j = 0; j < 2; ++j) {
            CHECK(std::abs(p.directions.col(j).dot(wi.function(p.points(j))) - p.targets(j)) <= 1e-8);
        }
        CHECK(hardy::verify_solution(wi.function, p, hardy::disk_grid(4, 16, 0.9)).max_residual <= 1e-8);
    }
}

TEST_CASE("tangential_solve") {
    const auto grid = hardy::disk_grid(6, 256, 0.99);

    TangentialProblem one;
    one.points = vec({0.0});
    one.directions = Eigen::MatrixXcd(2, 1);
    one.directions << 1.0, 0.0;
    one.targets = vec({1.0});
    const auto c = hardy::tangential_solve(one, 4, grid, 1.0, 1e-8);
    CHECK((c.function(Complex(0.3, 0.3)) - vec({1.0, 0.0})).norm() <= 1e-6);
    CHECK(c.grid_norm == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(c.meets_level);

    // Scalar reduction: the grid optimum over |z| <= r is the disk optimum at x/r.
    auto& g = oracle::rng(44);
    for (int t = 0; t < 3; ++t) {
        const Complex x1 = oracle::disk_point(g, 0.4), x2 = oracle::disk_point(g, 0.4);
        const Complex w1 = oracle::disk_point(g, 0.8), w2 = oracle::disk_point(g, 0.8);
        TangentialProblem p;
        p.points = vec({x1, x2});
        p.directions = Eigen::MatrixXcd::Zero(2, 2);
        p.directions.row(0).setOnes();
        p.targets = vec({w1, w2});
        const auto s = hardy::tangential_solve(p, 20, grid, 1.0);
        CHECK(std::abs(s.grid_norm - oracle::two_node_optimal_norm(x1 / 0.99, x2 / 0.99, w1, w2)) <= 1e-3);
        CHECK(s.residual <= 1e-7);
    }

    const auto infeasible = scalar_problem(vec({0.0, 0.5}), vec({0.0, 0.5}), 1.0, z_squared);
    double previous = std::numeric_limits<double>::infinity();
    const auto coarse = hardy::disk_grid(8, 64, 0.99);
    for (const int degree : {0, 2, 5, 10, 20}) {
        const auto s = hardy::tangential_solve(infeasible, degree, coarse, 1.0);
        CHECK(s.grid_norm >= 1.9);
        CHECK_FALSE(s.meets_level);
        CHECK(s.grid_norm <= previous + 1e-5);
        previous = s.grid_norm;
    }
}

TEST_CASE("verify_solution") {
    const auto grid = hardy::disk_grid(32, 128, 0.995);
    TangentialProblem one;
    one.points = vec({0.0});
    one.directions = Eigen::MatrixXcd(2, 1);
    one.directions << 1.0, 0.0;
    one.targets = vec({1.0});
    Eigen::MatrixXcd coef(2, 1);
    coef << 1.0, 0.0;
    const VectorAnalyticFunction constant(hardy::FullHinf{}, 0, coef);
    const auto r1 = hardy::verify_solution(constant, one, grid);
    CHECK(r1.max_residual == 0.0);
    CHECK(r1.grid_norm == doctest::Approx(1.0));
    CHECK(r1.pick.verdict == hardy::Verdict::Feasible);

    auto& g = oracle::rng(45);
    for (int t = 0; t < 5; ++t) {
        Eigen::VectorXcd x(4);
        for (Eigen::Index j = 0; j < 4; ++j) x(j) = oracle::disk_point(g, 0.8);
        const Eigen::VectorXcd w = feasible_values(g, x);
        const auto f = hardy::schur_interpolate(x, w, 1.0);
        const auto rep = hardy::verify_solution(f, scalar_problem(x, w, 1.0), grid, 1e-6);
        CHECK(rep.max_residual <= 1e-8);
        CHECK(rep.pick.verdict == hardy::Verdict::Feasible);

        Eigen::MatrixXcd bent = f.coefficients();
        bent(0, 0) += 1e-3;
        const VectorAnalyticFunction corrupted(hardy::FullHinf{}, f.degree(), bent, f.denominator());
        CHECK(hardy::verify_solution(corrupted, scalar_problem(x, w, 1.0), grid).max_residual > 1e-5);
    }
}
