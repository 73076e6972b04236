#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hardy/errors.hpp"

namespace hardy {

using Complex = std::complex<double>;

inline constexpr double kDefaultPsdTol = 1e-8;
inline constexpr double kHermitianTol = 1e-12;

// ---------------------------------------------------------------------------
// Hermitian eigenanalysis (cyclic Jacobi)
// ---------------------------------------------------------------------------

template <typename Scalar>
struct HermitianEigen {
    Eigen::VectorXd values;  // ascending
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns match values
    int sweeps = 0;
};

/// Throws InvalidMatrix unless m is square, nonempty and Hermitian to within
/// tol * max(1, max |m_ij|).
template <typename Derived>
void check_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTol) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw Error(ErrorCode::InvalidMatrix, "matrix must be square with order >= 1");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= tol * scale)) {
        throw Error(ErrorCode::InvalidMatrix, "matrix is not Hermitian (asymmetry " +
                                                  std::to_string(asym) + ")");
    }
}

/// Cyclic Jacobi eigendecomposition. Each rotation first removes the phase of the
/// pivot with a diagonal unitary, then applies the real symmetric Jacobi rotation.
template <typename Derived>
HermitianEigen<typename Derived::Scalar> hermitian_eigen(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Eigen::numext::conj;
    check_hermitian(m);

    const Eigen::Index n = m.rows();
    Mat a = (m + m.adjoint()) / 2.0;
    Mat v = Mat::Identity(n, n);
    const double total = std::max(a.norm(), std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();

    HermitianEigen<Scalar> out;
    constexpr int kMaxSweeps = 100;
    for (; out.sweeps < kMaxSweeps; ++out.sweeps) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= eps * total) break;

        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = std::abs(a(p, q));
                if (apq <= std::numeric_limits<double>::min()) continue;
                const Scalar phase = a(p, q) / apq;
                const double app = std::real(a(p, p));
                const double aqq = std::real(a(q, q));
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                const Scalar gpp = c;
                const Scalar gpq = s;
                const Scalar gqp = -s * conj(phase);
                const Scalar gqq = c * conj(phase);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                    const Scalar vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar apk = a(p, k), aqk = a(q, k);
                    a(p, k) = conj(gpp) * apk + conj(gqp) * aqk;
                    a(q, k) = conj(gpq) * apk + conj(gqq) * aqk;
                }
                a(p, q) = Scalar(0);
                a(q, p) = Scalar(0);
                a(p, p) = Scalar(std::real(a(p, p)));
                a(q, q) = Scalar(std::real(a(q, q)));
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return std::real(a(x, x)) < std::real(a(y, y));
    });
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index src = order[static_cast<std::size_t>(i)];
        out.values(i) = std::real(a(src, src));
        out.vectors.col(i) = v.col(src);
    }
    return out;
}

template <typename Derived>
double hermitian_min_eig(const Eigen::MatrixBase<Derived>& m) {
    return hermitian_eigen(m).values(0);
}

struct PsdVerdict {
    bool psd = true;
    double min_eig = 0.0;
    explicit operator bool() const noexcept { return psd; }
};

/// PSD iff the smallest eigenvalue is >= -tol.
template <typename Derived>
PsdVerdict is_psd(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultPsdTol) {
    if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidInput, "tolerance must be nonnegative");
    const double lo = hermitian_min_eig(m);
    return PsdVerdict{lo >= -tol, lo};
}

// ---------------------------------------------------------------------------
// Circle quadrature and disk grids
// ---------------------------------------------------------------------------

/// Equispaced rule t_k = 2π(k + offset)/N with weights 1/N on the unit circle.
/// offset ∈ [0, 1) shifts every node by a fraction of the spacing.
class QuadratureRule {
public:
    explicit QuadratureRule(std::size_t node_count, double offset = 0.0);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double offset() const noexcept { return offset_; }
    [[nodiscard]] double weight() const noexcept { return 1.0 / static_cast<double>(n_); }
    [[nodiscard]] double angle(std::size_t k) const noexcept {
        return 2.0 * std::numbers::pi * (static_cast<double>(k) + offset_) / static_cast<double>(n_);
    }
    [[nodiscard]] Complex point(std::size_t k) const noexcept { return std::polar(1.0, angle(k)); }

private:
    std::size_t n_;
    double offset_;
};

/// (1/N) Σ f(e^{i t_k}), summed in ascending node order.
template <typename F>
Complex circle_integral(F&& f, const QuadratureRule& rule) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) sum += Complex(f(rule.point(k)));
    return sum * rule.weight();
}

struct DiskGrid {
    int radial_count = 0;
    int angular_count = 0;
    double max_radius = 0.0;
    Eigen::VectorXcd points;  // ring-major, inner ring first

    [[nodiscard]] Eigen::Index size() const noexcept { return points.size(); }
};

/// Radii r_k = ρ cos(πk / 2R), k = 0..R-1 (Chebyshev clustering toward the rim ρ),
/// times uniform angles 2πj/A.
DiskGrid disk_grid(int radial, int angular, double max_radius);

// ---------------------------------------------------------------------------
// Linearly constrained minimax
// ---------------------------------------------------------------------------

struct MinimaxSolution {
    Eigen::MatrixXcd coefficients;  // components × basis size
    double achieved_level = 0.0;
    /// Lower bound on the grid optimum implied by the final barrier parameter.
    double lower_bound = 0.0;
    int iterations = 0;             // Newton steps
    bool converged = false;
};

struct MinimaxOptions {
    int max_newton_steps = 400;
    double consistency_tol = 1e-8;
};

/// Raised when the barrier iteration cannot reach the requested gap; carries the
/// best feasible point found.
class NotConvergedError : public Error {
public:
    NotConvergedError(const std::string& what, MinimaxSolution best)
        : Error(ErrorCode::NotConverged, what), best_(std::move(best)) {}
    [[nodiscard]] const MinimaxSolution& best() const noexcept { return best_; }

private:
    MinimaxSolution best_;
};

/// Minimizes max_g ‖(E_1 c_1)_g, …, (E_m c_m)_g‖ over coefficient rows c_k subject
/// to L vec(c) = b, where vec stacks the rows of the coefficient matrix
/// (component-major). basis_eval[k] is the grid × basis evaluation matrix of
/// component k; all components share the basis size.
///
/// The constraints are eliminated through a null-space basis, and the remaining
/// second-order cone program min t s.t. ‖y_g‖ ≤ t is solved by a log-barrier
/// method with damped Newton steps. tol bounds the optimality gap t - t*; the
/// achieved level is recomputed from the returned coefficients.
MinimaxSolution minimax_affine(std::span<const Eigen::MatrixXcd> basis_eval,
                               const Eigen::MatrixXcd& constraints,
                               const Eigen::VectorXcd& rhs, double tol,
                               const MinimaxOptions& options = {});

/// Grid maximum of the pointwise Euclidean norm of the component values.
double max_row_norm(const Eigen::MatrixXcd& values);

// ---------------------------------------------------------------------------
// Worker pool helpers
// ---------------------------------------------------------------------------

/// Worker count: HARDY_INTERP_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// processed exactly once; callers write results into per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hardy
