#pragma once

// Independent reference computations used by the tests. Nothing here calls into
// the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

inline std::mt19937_64& rng(std::uint64_t seed) {
    static std::mt19937_64 gen;
    gen.seed(seed);
    return gen;
}

inline double uniform(std::mt19937_64& g, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Uniform point of the disk of the given radius.
inline Complex disk_point(std::mt19937_64& g, double radius) {
    const double r = radius * std::sqrt(uniform(g));
    return std::polar(r, uniform(g, 0.0, 2.0 * M_PI));
}

inline Complex gaussian(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    return {n(g), n(g)};
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937_64& g, Eigen::Index n) {
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gaussian(g);
    return (a + a.adjoint()) / 2.0;
}

/// Smallest eigenvalue as the smallest root of det(M - λI), located by a sign
/// scan on a fine grid over the Gershgorin interval followed by bisection.
inline double charpoly_min_eig(const Eigen::MatrixXcd& m) {
    const Eigen::Index n = m.rows();
    double radius = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) radius = std::max(radius, m.row(i).cwiseAbs().sum());
    const auto charpoly = [&](double x) {
        const Eigen::MatrixXcd shifted = m - x * Eigen::MatrixXcd::Identity(n, n);
        return shifted.partialPivLu().determinant().real();
    };
    const int steps = 20000;
    double lo = -radius - 1.0;
    double flo = charpoly(lo);
    for (int k = 1; k <= steps; ++k) {
        double hi = -radius - 1.0 + (2.0 * radius + 2.0) * k / steps;
        const double fhi = charpoly(hi);
        if (fhi == 0.0) return hi;
        if ((flo < 0) != (fhi < 0)) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = charpoly(mid);
                if ((fm < 0) == (flo < 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        lo = hi;
        flo = fhi;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Pseudo-hyperbolic distance |(a - b)/(1 - conj(b) a)|.
inline double pseudo_hyperbolic(Complex a, Complex b) { return std::abs((a - b) / (1.0 - std::conj(b) * a)); }

/// Two-node scalar feasibility at norm alpha: ρ(w₁/α, w₂/α) ≤ ρ(x₁, x₂), |w_j| ≤ α.
inline bool two_node_feasible(Complex x1, Complex x2, Complex w1, Complex w2, double alpha) {
    if (std::abs(w1) > alpha || std::abs(w2) > alpha) return false;
    return pseudo_hyperbolic(w1 / alpha, w2 / alpha) <= pseudo_hyperbolic(x1, x2);
}

/// Smallest alpha at which the two-node problem is feasible, by bisection on the
/// pseudo-hyperbolic inequality.
inline double two_node_optimal_norm(Complex x1, Complex x2, Complex w1, Complex w2) {
    double lo = std::max(std::abs(w1), std::abs(w2));
    double hi = lo + 10.0 * (std::abs(w1 - w2) + 1.0) / std::max(1e-3, std::abs(x1 - x2));
    if (two_node_feasible(x1, x2, w1, w2, lo)) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (two_node_feasible(x1, x2, w1, w2, mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Blaschke product γ Π (z - a)/(1 - ā z) from the factor formula.
inline Complex blaschke(const std::vector<Complex>& zeros, Complex z, Complex gamma = 1.0) {
    Complex b = gamma;
    for (const Complex a : zeros) b *= (z - a) / (1.0 - std::conj(a) * z);
    return b;
}

inline Complex szego(Complex z, Complex w) { return 1.0 / (1.0 - z * std::conj(w)); }

/// (1 - B(z) conj(B(w))) / (1 - z w̄).
inline Complex model_kernel(const std::vector<Complex>& zeros, Complex z, Complex w) {
    return (1.0 - blaschke(zeros, z) * std::conj(blaschke(zeros, w))) / (1.0 - z * std::conj(w));
}

/// Polynomial with coefficients c (constant first) at z, Horner.
inline Complex poly(const Eigen::VectorXcd& c, Complex z) {
    Complex s = 0.0;
    for (Eigen::Index k = c.size(); k-- > 0;) s = s * z + c(k);
    return s;
}

/// Max of |f| over a dense polar scan of the closed disk of radius r.
template <typename F>
double dense_sup(F&& f, double r, int rings = 64, int angles = 512) {
    double best = 0.0;
    for (int i = 1; i <= rings; ++i) {
        const double rho = r * i / rings;
        for (int j = 0; j < angles; ++j) best = std::max(best, std::abs(f(std::polar(rho, 2.0 * M_PI * j / angles))));
    }
    return std::max(best, std::abs(f(Complex(0.0))));
}

/// Largest singular value by power iteration on M^H M.
inline double spectral_norm(const Eigen::MatrixXcd& m) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(1.0 + 0.1 * i, 0.03 * i);
    double sigma = 0.0;
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXcd u = m.adjoint() * (m * v);
        const double nrm = u.norm();
        if (nrm == 0.0) return 0.0;
        v = u / nrm;
        const double next = std::sqrt(nrm);
        if (std::abs(next - sigma) <= 1e-16 * next) return next;
        sigma = next;
    }
    return sigma;
}

}  // namespace oracle
