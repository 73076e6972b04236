#include "hardy/duality.hpp"

#include <deque>
#include <random>
#include <string>

namespace hardy {

namespace {

Eigen::MatrixXcd vectorized_gram(const std::vector<Eigen::MatrixXcd>& basis) {
    const auto s = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd g(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) {
            g(i, j) = (basis[static_cast<std::size_t>(i)].conjugate().cwiseProduct(basis[static_cast<std::size_t>(j)])).sum();
        }
    }
    return g;
}

Eigen::MatrixXcd combine(const TruncatedDistanceProblem& p, const Eigen::VectorXcd& c) {
    Eigen::MatrixXcd m = p.target;
    for (std::size_t k = 0; k < p.subspace.size(); ++k) m += c(static_cast<Eigen::Index>(k)) * p.subspace[k];
    return m;
}

struct TopSingular {
    double value;
    Eigen::VectorXcd u, v;
};

TopSingular top_singular(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

Eigen::VectorXcd to_complex(const Eigen::VectorXd& x) {
    Eigen::VectorXcd c(x.size() / 2);
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = Complex(x(2 * k), x(2 * k + 1));
    return c;
}

}  // namespace

void TruncatedDistanceProblem::validate() const {
    if (target.rows() < 1 || target.cols() < 1) throw Error(ErrorCode::InvalidInput, "target operator is empty");
    for (const auto& s : subspace) {
        if (s.rows() != target.rows() || s.cols() != target.cols()) {
            throw Error(ErrorCode::InvalidInput, "subspace basis matrix has the wrong shape");
        }
    }
    if (tensor_rank < target.cols()) {
        throw Error(ErrorCode::InvalidInput, "tensor rank r must be at least n1 = " + std::to_string(target.cols()));
    }
    if (!subspace.empty()) {
        const Eigen::MatrixXcd g = vectorized_gram(subspace);
        const double scale = std::max(1.0, g.diagonal().real().maxCoeff());
        if (!(hermitian_min_eig(g) > 1e-10 * scale)) {
            throw Error(ErrorCode::InvalidInput, "subspace basis matrices are linearly dependent");
        }
    }
}

PrimalResult distance_primal(const TruncatedDistanceProblem& p, double tol, const PrimalOptions& options) {
    p.validate();
    const auto s = static_cast<Eigen::Index>(p.subspace.size());
    PrimalResult out;
    if (s == 0) {
        out.value = out.lower_bound = top_singular(p.target).value;
        return out;
    }

    const Eigen::Index n = 2 * s;
    auto objective = [&](const Eigen::VectorXd& x) { return top_singular(combine(p, to_complex(x))).value; };

    // Every minimizer satisfies ‖Σ c_k S_k‖ ≤ 2‖A‖, which bounds ‖c‖ through the Gram matrix.
    const double norm_a = top_singular(p.target).value;
    const double lam = hermitian_min_eig(vectorized_gram(p.subspace));
    const auto rank = static_cast<double>(std::min(p.rows(), p.cols()));
    const double radius = 2.0 * norm_a * std::sqrt(rank / lam) + 1e-12;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd shape = radius * radius * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd best_x = x;
    double best = norm_a;
    double lower = 0.0;
    const double nn = static_cast<double>(n);
    for (; out.iterations < options.max_iterations; ++out.iterations) {
        const Eigen::VectorXcd c = to_complex(x);
        const TopSingular t = top_singular(combine(p, c));
        if (t.value < best) {
            best = t.value;
            best_x = x;
        }
        Eigen::VectorXd g(n);
        for (Eigen::Index k = 0; k < s; ++k) {
            const Complex d = t.u.dot(p.subspace[static_cast<std::size_t>(k)] * t.v);
            g(2 * k) = d.real();
            g(2 * k + 1) = -d.imag();
        }
        const double width = std::sqrt(std::max(0.0, g.dot(shape * g)));
        lower = std::max(lower, t.value - width);
        if (best - lower <= tol || width == 0.0) break;
        const Eigen::VectorXd pg = shape * g / width;
        x -= pg / (nn + 1.0);
        shape = nn * nn / (nn * nn - 1.0) * (shape - 2.0 / (nn + 1.0) * pg * pg.transpose());
        shape = 0.5 * (shape + shape.transpose()).eval();
    }

    // Coordinatewise golden-section polish inside the final ellipsoid's extent.
    constexpr double kInvPhi = 0.6180339887498949;
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w = 2.0 * std::sqrt(std::max(shape(i, i), 0.0)) + 1e-15;
            auto along = [&](double t) {
                Eigen::VectorXd y = best_x;
                y(i) = t;
                return objective(y);
            };
            double a = best_x(i) - w, b = best_x(i) + w;
            double c1 = b - kInvPhi * (b - a), c2 = a + kInvPhi * (b - a);
            double f1 = along(c1), f2 = along(c2);
            for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(best_x(i))); ++it) {
                if (f1 < f2) {
                    b = c2;
                    c2 = c1;
                    f2 = f1;
                    c1 = b - kInvPhi * (b - a);
                    f1 = along(c1);
                } else {
                    a = c1;
                    c1 = c2;
                    f1 = f2;
                    c2 = a + kInvPhi * (b - a);
                    f2 = along(c2);
                }
            }
            const double tm = f1 < f2 ? c1 : c2;
            const double fm = std::min(f1, f2);
            if (fm < best) {
                best = fm;
                best_x(i) = tm;
            }
        }
    }
    out.value = best;
    out.lower_bound = std::min(lower, best);
    out.coefficients = to_complex(best_x);
    return out;
}

namespace {

struct DualEval {
    double value_sq = 0.0;
    Eigen::MatrixXcd residual;  // (A - Σ β_k S_k) H
    Eigen::MatrixXcd gradient;  // (A - Σ β_k S_k)^H residual
};

// H must have unit Frobenius norm.
DualEval evaluate_dual(const TruncatedDistanceProblem& p, const Eigen::MatrixXcd& h) {
    const Eigen::Index n2 = p.rows();
    const Eigen::Index r = h.cols();
    const auto s = static_cast<Eigen::Index>(p.subspace.size());
    DualEval e;
    Eigen::MatrixXcd m = p.target;
    if (s > 0) {
        const Eigen::MatrixXcd ah = p.target * h;
        Eigen::MatrixXcd y(n2 * r, s);
        for (Eigen::Index k = 0; k < s; ++k) {
            const Eigen::MatrixXcd sh = p.subspace[static_cast<std::size_t>(k)] * h;
            y.col(k) = Eigen::Map<const Eigen::VectorXcd>(sh.data(), n2 * r);
        }
        const Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(ah.data(), n2 * r);
        const Eigen::VectorXcd beta = y.completeOrthogonalDecomposition().solve(b);
        for (Eigen::Index k = 0; k < s; ++k) m -= beta(k) * p.subspace[static_cast<std::size_t>(k)];
    }
    e.residual = m * h;
    e.value_sq = e.residual.squaredNorm();
    e.gradient = m.adjoint() * e.residual;
    return e;
}

// Real coordinates (Re H, Im H), column-major.
Eigen::VectorXd to_real(const Eigen::MatrixXcd& h) {
    const Eigen::Index n = h.size();
    Eigen::VectorXd x(2 * n);
    x.head(n) = Eigen::Map<const Eigen::VectorXcd>(h.data(), n).real();
    x.tail(n) = Eigen::Map<const Eigen::VectorXcd>(h.data(), n).imag();
    return x;
}

Eigen::MatrixXcd from_real(const Eigen::VectorXd& x, Eigen::Index rows, Eigen::Index cols) {
    const Eigen::Index n = rows * cols;
    Eigen::MatrixXcd h(rows, cols);
    for (Eigen::Index i = 0; i < n; ++i) h(i % rows, i / rows) = Complex(x(i), x(n + i));
    return h;
}

// Value ‖M_β H‖² / ‖H‖² and its real gradient at a point of the unit sphere; the
// radial component vanishes, so the gradient is already tangent.
struct SphereEval {
    double value = 0.0;
    Eigen::VectorXd grad;
};

SphereEval sphere_eval(const TruncatedDistanceProblem& p, const Eigen::VectorXd& x) {
    const Eigen::MatrixXcd h = from_real(x, p.cols(), p.tensor_rank);
    const DualEval e = evaluate_dual(p, h);
    return {e.value_sq, to_real(2.0 * (e.gradient - e.value_sq * h))};
}

struct StartResult {
    double value_sq = -1.0;
    Eigen::MatrixXcd h;
};

// Limited-memory BFGS ascent with Armijo backtracking, retracting to the sphere
// after every step. The plain gradient stalls near rank-deficient maximizers,
// where the span of the S_k H degenerates and the curvature grows without bound.
StartResult ascend(const TruncatedDistanceProblem& p, const Eigen::MatrixXcd& start, int steps, double tol) {
    constexpr std::size_t kMemory = 10;
    Eigen::VectorXd x = to_real(start / start.norm());
    SphereEval e = sphere_eval(p, x);
    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;  // (s, y) for the negated objective
    for (int step = 0; step < steps; ++step) {
        if (e.grad.norm() <= tol * (1.0 + e.value)) break;
        // Two-loop recursion on -f.
        Eigen::VectorXd q = -e.grad;
        std::vector<double> alpha(memory.size());
        for (std::size_t i = memory.size(); i-- > 0;) {
            const auto& [sv, yv] = memory[i];
            alpha[i] = sv.dot(q) / yv.dot(sv);
            q -= alpha[i] * yv;
        }
        if (memory.empty()) {
            q *= 0.1 / e.grad.norm();
        } else {
            const auto& [sv, yv] = memory.back();
            q *= sv.dot(yv) / yv.squaredNorm();
        }
        for (std::size_t i = 0; i < memory.size(); ++i) {
            const auto& [sv, yv] = memory[i];
            const double beta = yv.dot(q) / yv.dot(sv);
            q += (alpha[i] - beta) * sv;
        }
        Eigen::VectorXd dir = -q;
        double slope = e.grad.dot(dir);
        if (!(slope > 0.0)) {
            memory.clear();
            dir = e.grad * (0.1 / e.grad.norm());
            slope = e.grad.dot(dir);
        }
        bool moved = false;
        double t = 1.0;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            const Eigen::VectorXd xn = x + t * dir;
            const SphereEval trial = sphere_eval(p, xn / xn.norm());
            if (trial.value >= e.value + 1e-4 * t * slope) {
                const Eigen::VectorXd xr = xn / xn.norm();
                Eigen::VectorXd sv = xr - x;
                Eigen::VectorXd yv = -(trial.grad - e.grad);
                if (sv.dot(yv) > 1e-300) {
                    memory.emplace_back(std::move(sv), std::move(yv));
                    if (memory.size() > kMemory) memory.pop_front();
                }
                const double previous = e.value;
                x = xr;
                e = trial;
                moved = true;
                if (step > 10 && e.value - previous <= 1e-16 * e.value) step = steps;
                break;
            }
        }
        if (!moved) break;
    }
    return {e.value, from_real(x, p.cols(), p.tensor_rank)};
}

}  // namespace

double dual_objective(const TruncatedDistanceProblem& p, const Eigen::MatrixXcd& h1) {
    p.validate();
    if (h1.rows() != p.cols() || h1.cols() != p.tensor_rank) {
        throw Error(ErrorCode::InvalidInput, "h1 must be n1 x r");
    }
    const double nrm = h1.norm();
    if (nrm == 0.0) throw Error(ErrorCode::InvalidInput, "h1 must be nonzero");
    return std::sqrt(evaluate_dual(p, h1 / nrm).value_sq);
}

DualResult distance_dual(const TruncatedDistanceProblem& p, double tol, const DualOptions& options) {
    p.validate();
    if (options.starts < 1) throw Error(ErrorCode::InvalidInput, "dual needs at least one start");
    const Eigen::Index n1 = p.cols();
    const Eigen::Index r = p.tensor_rank;
    std::vector<StartResult> results(static_cast<std::size_t>(options.starts));
    parallel_for(results.size(), [&](std::size_t i) {
        std::mt19937_64 rng(options.seed + 0x9e3779b97f4a7c15ULL * (i + 1));
        std::normal_distribution<double> gauss;
        Eigen::MatrixXcd h(n1, r);
        for (Eigen::Index c = 0; c < r; ++c) {
            for (Eigen::Index k = 0; k < n1; ++k) {
                const double re = gauss(rng);
                h(k, c) = Complex(re, gauss(rng));
            }
        }
        results[i] = ascend(p, h, options.steps, tol);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (results[i].value_sq > results[best].value_sq) best = i;
    }
    DualResult out;
    out.best_start = static_cast<int>(best);
    out.h1 = results[best].h;
    const DualEval e = evaluate_dual(p, out.h1);
    out.value = std::sqrt(e.value_sq);
    out.h2 = out.value > 0.0 ? Eigen::MatrixXcd(e.residual / out.value)
                             : Eigen::MatrixXcd::Zero(p.rows(), r);
    return out;
}

}  // namespace hardy
