#include "hardy/numerics.hpp"

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace hardy {

QuadratureRule::QuadratureRule(std::size_t node_count, double offset)
    : n_(node_count), offset_(offset) {
    if (n_ == 0 || (n_ & (n_ - 1)) != 0) {
        throw Error(ErrorCode::InvalidInput, "quadrature node count must be a power of two");
    }
    if (!(offset >= 0.0 && offset < 1.0)) {
        throw Error(ErrorCode::InvalidInput, "quadrature offset must lie in [0, 1)");
    }
}

DiskGrid disk_grid(int radial, int angular, double max_radius) {
    if (!(max_radius > 0.0 && max_radius < 1.0)) {
        throw Error(ErrorCode::InvalidRadius, "grid radius must lie in (0, 1)");
    }
    if (radial < 1 || angular < 1) {
        throw Error(ErrorCode::InvalidInput, "grid counts must be positive");
    }
    DiskGrid grid;
    grid.radial_count = radial;
    grid.angular_count = angular;
    grid.max_radius = max_radius;
    grid.points.resize(static_cast<Eigen::Index>(radial) * angular);
    Eigen::Index idx = 0;
    for (int k = radial - 1; k >= 0; --k) {
        const double r = max_radius * std::cos(std::numbers::pi * k / (2.0 * radial));
        for (int j = 0; j < angular; ++j) {
            grid.points(idx++) = std::polar(r, 2.0 * std::numbers::pi * j / angular);
        }
    }
    return grid;
}

double max_row_norm(const Eigen::MatrixXcd& values) {
    if (values.size() == 0) return 0.0;
    return values.rowwise().norm().maxCoeff();
}

namespace {

// Barrier state for min t s.t. ‖y_g‖ ≤ t, y = a + B x, where the 2m real rows of
// grid point g are the rows r with r mod G = g.
struct ConeProgram {
    Eigen::Index grid = 0;
    Eigen::Index width = 0;  // 2m
    Eigen::VectorXd a;
    Eigen::MatrixXd b;

    [[nodiscard]] Eigen::VectorXd squared_norms(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd y = a + b * x;
        return Eigen::Map<const Eigen::MatrixXd>(y.data(), grid, width).rowwise().squaredNorm();
    }

    // τ t - Σ log(t² - ‖y_g‖²), or +∞ outside the cone interior.
    [[nodiscard]] double barrier(double tau, double t, const Eigen::VectorXd& x) const {
        if (!(t > 0.0)) return std::numeric_limits<double>::infinity();
        const Eigen::VectorXd s = (t * t) - squared_norms(x).array();
        if (!(s.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
        return tau * t - s.array().log().sum();
    }
};

}  // namespace

MinimaxSolution minimax_affine(std::span<const Eigen::MatrixXcd> basis_eval,
                               const Eigen::MatrixXcd& constraints,
                               const Eigen::VectorXcd& rhs, double tol,
                               const MinimaxOptions& options) {
    if (basis_eval.empty()) throw Error(ErrorCode::InvalidInput, "no components");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
    const auto comps = static_cast<Eigen::Index>(basis_eval.size());
    const Eigen::Index grid = basis_eval[0].rows();
    const Eigen::Index nb = basis_eval[0].cols();
    for (const auto& e : basis_eval) {
        if (e.rows() != grid || e.cols() != nb) {
            throw Error(ErrorCode::InvalidInput, "component evaluation matrices differ in shape");
        }
    }
    if (grid == 0 || nb == 0) throw Error(ErrorCode::InvalidInput, "empty grid or basis");
    const Eigen::Index nvar = comps * nb;
    if (constraints.cols() != nvar || constraints.rows() != rhs.size()) {
        throw Error(ErrorCode::InvalidInput, "constraint system has the wrong shape");
    }

    // Particular solution and null space of the constraints.
    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(nvar);
    Eigen::MatrixXcd null_basis = Eigen::MatrixXcd::Identity(nvar, nvar);
    if (constraints.rows() > 0) {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(constraints);
        c0 = cod.solve(rhs);
        const double resid = (constraints * c0 - rhs).norm();
        if (!(resid <= options.consistency_tol * std::max(1.0, rhs.norm()))) {
            throw Error(ErrorCode::InfeasibleConstraints,
                        "least-squares residual " + std::to_string(resid));
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(constraints.adjoint());
        const Eigen::Index rank = qr.rank();
        Eigen::MatrixXcd full_q = qr.householderQ();
        null_basis = full_q.rightCols(nvar - rank);
    }

    // Flattened values, index k * grid + g.
    auto values_of = [&](const Eigen::VectorXcd& c) {
        Eigen::VectorXcd flat(grid * comps);
        for (Eigen::Index k = 0; k < comps; ++k) {
            flat.segment(k * grid, grid) = basis_eval[static_cast<std::size_t>(k)] * c.segment(k * nb, nb);
        }
        return flat;
    };

    MinimaxSolution sol;
    auto finish = [&](const Eigen::VectorXcd& c, bool converged) {
        sol.coefficients = Eigen::Map<const Eigen::MatrixXcd>(c.data(), nb, comps).transpose();
        sol.achieved_level = max_row_norm(Eigen::Map<const Eigen::MatrixXcd>(values_of(c).data(), grid, comps));
        sol.converged = converged;
        return sol;
    };

    const Eigen::Index nfree = null_basis.cols();
    if (nfree == 0) return finish(c0, true);

    const Eigen::VectorXcd offset = values_of(c0);
    Eigen::MatrixXcd phi(grid * comps, nfree);
    for (Eigen::Index j = 0; j < nfree; ++j) phi.col(j) = values_of(null_basis.col(j));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(phi);
    qr.setThreshold(1e-13);
    const Eigen::Index reach = qr.rank();
    if (reach == 0) return finish(c0, true);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(grid * comps, reach);
    const Eigen::MatrixXcd r11 = qr.matrixR().topLeftCorner(reach, reach).triangularView<Eigen::Upper>();

    auto coefficients_of = [&](const Eigen::VectorXcd& z) {
        Eigen::VectorXcd yp = Eigen::VectorXcd::Zero(nfree);
        yp.head(reach) = r11.triangularView<Eigen::Upper>().solve(z);
        const Eigen::VectorXcd y = qr.colsPermutation() * yp;
        return Eigen::VectorXcd(c0 + null_basis * y);
    };

    // Real form: x = (Re z, Im z), rows (Re values; Im values).
    const Eigen::Index rows = grid * comps;
    const Eigen::Index nx = 2 * reach;
    ConeProgram cp;
    cp.grid = grid;
    cp.width = 2 * comps;
    cp.a.resize(2 * rows);
    cp.a << offset.real(), offset.imag();
    cp.b.resize(2 * rows, nx);
    cp.b << q.real(), -q.imag(), q.imag(), q.real();

    // Start at the minimum Frobenius point and rescale so its level is 1.
    const Eigen::VectorXcd z0 = -(q.adjoint() * offset);
    Eigen::VectorXd x(nx);
    x << z0.real(), z0.imag();
    const double scale = std::sqrt(cp.squared_norms(x).maxCoeff());
    auto complex_of = [&](const Eigen::VectorXd& xr) {
        Eigen::VectorXcd z(reach);
        for (Eigen::Index j = 0; j < reach; ++j) z(j) = Complex(xr(j), xr(reach + j));
        return z;
    };
    if (scale <= tol) return finish(coefficients_of(z0), true);
    cp.a /= scale;
    cp.b /= scale;
    const double tol_s = tol / scale;

    const double nu = 2.0 * static_cast<double>(grid);
    double t = 1.1;
    double tau = nu / t;
    bool done = false;
    while (!done) {
        // Centering by damped Newton.
        for (int inner = 0; inner < 100; ++inner) {
            if (sol.iterations >= options.max_newton_steps) break;
            ++sol.iterations;
            const Eigen::VectorXd y = cp.a + cp.b * x;
            const Eigen::VectorXd sq = Eigen::Map<const Eigen::MatrixXd>(y.data(), grid, cp.width).rowwise().squaredNorm();
            const Eigen::ArrayXd s = (t * t) - sq.array();
            const Eigen::MatrixXd wy = y.asDiagonal() * cp.b;
            Eigen::MatrixXd pg = Eigen::MatrixXd::Zero(grid, nx);  // rows (B_g^T y_g)^T
            for (Eigen::Index c = 0; c < cp.width; ++c) pg += wy.middleRows(c * grid, grid);

            const Eigen::ArrayXd inv_s = s.inverse();
            const Eigen::ArrayXd inv_s2 = inv_s.square();
            Eigen::VectorXd grad(nx + 1);
            grad(0) = tau - 2.0 * t * inv_s.sum();
            grad.tail(nx) = 2.0 * (pg.transpose() * inv_s.matrix());

            Eigen::MatrixXd hess(nx + 1, nx + 1);
            hess(0, 0) = (4.0 * t * t * inv_s2 - 2.0 * inv_s).sum();
            const Eigen::VectorXd htx = -4.0 * t * (pg.transpose() * inv_s2.matrix());
            hess.block(1, 0, nx, 1) = htx;
            hess.block(0, 1, 1, nx) = htx.transpose();
            Eigen::VectorXd row_weight(2 * rows);
            for (Eigen::Index c = 0; c < cp.width; ++c) row_weight.segment(c * grid, grid) = (2.0 * inv_s).sqrt().matrix();
            const Eigen::MatrixXd bs = row_weight.asDiagonal() * cp.b;
            const Eigen::MatrixXd ps = (2.0 * inv_s).matrix().asDiagonal() * pg;
            hess.bottomRightCorner(nx, nx) = ps.transpose() * ps + bs.transpose() * bs;

            const Eigen::VectorXd step = -hess.ldlt().solve(grad);
            const double decrement = -grad.dot(step);
            if (!(decrement > 1e-12)) break;

            const double f0 = cp.barrier(tau, t, x);
            double alpha = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
                const double tn = t + alpha * step(0);
                const Eigen::VectorXd xn = x + alpha * step.tail(nx);
                if (cp.barrier(tau, tn, xn) <= f0 - 0.25 * alpha * decrement) {
                    t = tn;
                    x = xn;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
            if (decrement < 1e-9) break;
        }
        const double gap = nu / tau;
        sol.lower_bound = std::max(0.0, t - gap) * scale;
        if (gap <= tol_s) {
            done = true;
        } else if (sol.iterations >= options.max_newton_steps) {
            break;
        } else {
            tau *= 10.0;
        }
    }

    const Eigen::VectorXcd c = coefficients_of(complex_of(x));
    if (!done) {
        finish(c, false);
        throw NotConvergedError("barrier gap above " + std::to_string(tol) + " after " +
                                    std::to_string(sol.iterations) + " Newton steps",
                                sol);
    }
    return finish(c, true);
}

int worker_count() {
    if (const char* env = std::getenv("HARDY_INTERP_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace hardy
