#include "hardy/rkhs.hpp"

#include <random>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace hardy {

DiskPoint::DiskPoint(Complex value) : value_(value) {
    if (!(std::abs(value) < 1.0)) {
        throw Error(ErrorCode::InvalidInput, "point is not inside the open unit disk");
    }
}

BlaschkeProduct::BlaschkeProduct(std::vector<Complex> zeros, Complex unimodular_constant)
    : zeros_(std::move(zeros)), constant_(unimodular_constant) {
    if (zeros_.empty()) throw Error(ErrorCode::InvalidInput, "Blaschke product needs at least one zero");
    for (const Complex a : zeros_) {
        if (!(std::abs(a) < 1.0)) throw Error(ErrorCode::InvalidInput, "Blaschke zero outside the open disk");
    }
    if (!(std::abs(std::abs(constant_) - 1.0) <= 1e-12)) {
        throw Error(ErrorCode::InvalidInput, "Blaschke constant is not unimodular");
    }
}

Complex BlaschkeProduct::operator()(Complex z) const {
    Complex value = constant_;
    for (const Complex a : zeros_) value *= (z - a) / (1.0 - std::conj(a) * z);
    return value;
}

bool BlaschkeProduct::is_zero(Complex z, double tol) const {
    return std::any_of(zeros_.begin(), zeros_.end(), [&](Complex a) { return std::abs(z - a) <= tol; });
}

Complex blaschke_eval(const BlaschkeProduct& b, Complex z) { return b(z); }

Complex model_space_kernel(const BlaschkeProduct& b, Complex z, Complex w) {
    return (1.0 - b(z) * std::conj(b(w))) / (1.0 - z * std::conj(w));
}

ModelSpaceBasis::ModelSpaceBasis(BlaschkeProduct product) : product_(std::move(product)) {}

Eigen::VectorXcd ModelSpaceBasis::evaluate(Complex z) const {
    const auto& zeros = product_.zeros();
    Eigen::VectorXcd e(dimension());
    Complex prefix = 1.0;
    for (std::size_t k = 0; k < zeros.size(); ++k) {
        const Complex a = zeros[k];
        const Complex denom = 1.0 - std::conj(a) * z;
        e(static_cast<Eigen::Index>(k)) = prefix * std::sqrt(1.0 - std::norm(a)) / denom;
        prefix *= (z - a) / denom;
    }
    return e;
}

Complex ModelSpaceBasis::expand(const Eigen::VectorXcd& coefficients, Complex z) const {
    return (evaluate(z).array() * coefficients.array()).sum();
}

Eigen::VectorXcd ModelSpaceBasis::projection_of_one() const { return evaluate(0.0).conjugate(); }

ModelSpaceBasis tm_basis(const BlaschkeProduct& b) { return ModelSpaceBasis(b); }

Complex cyclic_kernel(const ModelSpaceBasis& basis, const ModelVector& v, Complex z, Complex w) {
    if (v.coefficients.size() != basis.dimension()) {
        throw Error(ErrorCode::InvalidInput, "model vector dimension does not match the basis");
    }
    if (!v.is_normalized()) throw Error(ErrorCode::NotNormalized, "model vector must have unit norm");
    const auto& b = basis.product();
    return basis.expand(v.coefficients, z) * std::conj(basis.expand(v.coefficients, w)) +
           b(z) * std::conj(b(w)) * szego_kernel(z, w);
}

Complex cyclic_kernel(const BlaschkeProduct& b, const ModelVector& v, Complex z, Complex w) {
    return cyclic_kernel(ModelSpaceBasis(b), v, z, w);
}

KernelSpec KernelSpec::cyclic(const BlaschkeProduct& b, ModelVector v) {
    ModelSpaceBasis basis(b);
    if (v.coefficients.size() != basis.dimension()) {
        throw Error(ErrorCode::InvalidInput, "model vector dimension does not match the basis");
    }
    if (!v.is_normalized()) throw Error(ErrorCode::NotNormalized, "model vector must have unit norm");
    return KernelSpec(CyclicCplusB{std::move(basis), std::move(v)});
}

Complex KernelSpec::operator()(Complex z, Complex w) const {
    return std::visit(
        [&](const auto& k) -> Complex {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Szego>) {
                return szego_kernel(z, w);
            } else if constexpr (std::is_same_v<T, ModelSpace>) {
                return model_space_kernel(k.product, z, w);
            } else {
                return cyclic_kernel(k.basis, k.v, z, w);
            }
        },
        v_);
}

std::string KernelSpec::tag() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Szego>) {
                return "szego";
            } else if constexpr (std::is_same_v<T, ModelSpace>) {
                return "model_space(degree " + std::to_string(k.product.degree()) + ")";
            } else {
                std::ostringstream os;
                os.precision(17);
                os << "cyclic(degree " << k.basis.product().degree() << ", v = [";
                for (Eigen::Index i = 0; i < k.v.coefficients.size(); ++i) {
                    if (i) os << ", ";
                    os << k.v.coefficients(i).real() << (k.v.coefficients(i).imag() < 0 ? "" : "+")
                       << k.v.coefficients(i).imag() << "i";
                }
                os << "])";
                return os.str();
            }
        },
        v_);
}

Eigen::MatrixXcd KernelSpec::gram(const Eigen::VectorXcd& points) const {
    const Eigen::Index n = points.size();
    Eigen::MatrixXcd k(n, n);
    // Cyclic kernels are assembled from basis values once per point.
    if (const auto* c = std::get_if<CyclicCplusB>(&v_)) {
        Eigen::VectorXcd vz(n), bz(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            vz(i) = c->basis.expand(c->v.coefficients, points(i));
            bz(i) = c->basis.product()(points(i));
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                k(i, j) = vz(i) * std::conj(vz(j)) + bz(i) * std::conj(bz(j)) * szego_kernel(points(i), points(j));
                k(j, i) = std::conj(k(i, j));
            }
            k(i, i) = k(i, i).real();
        }
        return k;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            k(i, j) = (*this)(points(i), points(j));
            k(j, i) = std::conj(k(i, j));
        }
        k(i, i) = k(i, i).real();
    }
    return k;
}

OuterFunction::OuterFunction(QuadratureRule rule, Eigen::VectorXd log_modulus_squared)
    : rule_(rule), log_p_(std::move(log_modulus_squared)) {
    if (static_cast<std::size_t>(log_p_.size()) != rule_.size()) {
        throw Error(ErrorCode::InvalidInput, "sample count does not match the quadrature rule");
    }
}

Complex OuterFunction::log_value(Complex z) const {
    if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::InvalidInput, "outer function evaluated outside the disk");
    Complex sum = 0.0;
    for (std::size_t k = 0; k < rule_.size(); ++k) {
        const Complex zeta = rule_.point(k);
        sum += (zeta + z) / (zeta - z) * log_p_(static_cast<Eigen::Index>(k));
    }
    return 0.5 * sum * rule_.weight();
}

Complex OuterFunction::operator()(Complex z) const { return std::exp(log_value(z)); }

Eigen::VectorXcd OuterFunction::boundary_values() const {
    const auto n = static_cast<Eigen::Index>(rule_.size());
    Eigen::FFT<double> fft;
    std::vector<double> half(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) half[static_cast<std::size_t>(k)] = 0.5 * log_p_(k);
    std::vector<Complex> spec;
    fft.fwd(spec, half);  // spec has n entries (full spectrum of real input)
    // Analytic signal: keep the mean and Nyquist terms, double positive frequencies.
    std::vector<Complex> analytic(static_cast<std::size_t>(n), 0.0);
    analytic[0] = spec[0];
    for (Eigen::Index j = 1; j < n / 2; ++j) analytic[static_cast<std::size_t>(j)] = 2.0 * spec[static_cast<std::size_t>(j)];
    if (n > 1) analytic[static_cast<std::size_t>(n / 2)] = spec[static_cast<std::size_t>(n / 2)];
    std::vector<Complex> logg;
    fft.inv(logg, analytic);
    Eigen::VectorXcd out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        // Real part reproduces (1/2) log p exactly; drop rounding in it.
        const Complex l(half[static_cast<std::size_t>(k)], logg[static_cast<std::size_t>(k)].imag());
        out(k) = std::exp(l);
    }
    return out;
}

OuterFunction outer_from_modulus(const Eigen::VectorXd& p, const QuadratureRule& rule) {
    if (static_cast<std::size_t>(p.size()) != rule.size()) {
        throw Error(ErrorCode::InvalidInput, "sample count does not match the quadrature rule");
    }
    Eigen::VectorXd logp(p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (!(p(k) > 0.0) || !std::isfinite(p(k))) {
            throw Error(ErrorCode::NotLogIntegrable,
                        "boundary modulus sample " + std::to_string(k) + " is not positive and finite");
        }
        logp(k) = std::log(p(k));
    }
    return OuterFunction(rule, std::move(logp));
}

namespace {

double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

constexpr std::uint64_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                     59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

}  // namespace

std::vector<ModelVector> sample_model_sphere(const BlaschkeProduct& b, int count, std::uint64_t seed) {
    if (count < 1) throw Error(ErrorCode::InvalidInput, "sample count must be positive");
    const auto d = static_cast<Eigen::Index>(b.degree());
    if (2 * d > static_cast<Eigen::Index>(std::size(kPrimes))) {
        throw Error(ErrorCode::InvalidInput, "model space dimension too large for the sphere sampler");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> shift(static_cast<std::size_t>(2 * d));
    for (auto& s : shift) s = unit(rng);

    std::vector<ModelVector> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXcd c(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            const auto idx = static_cast<std::uint64_t>(i) + 1;
            auto coord = [&](Eigen::Index axis) {
                const double u = radical_inverse(idx, kPrimes[axis]) + shift[static_cast<std::size_t>(axis)];
                return u - std::floor(u);
            };
            const double u1 = std::max(coord(2 * k), 1e-300);
            const double u2 = coord(2 * k + 1);
            c(k) = std::polar(std::sqrt(-2.0 * std::log(u1)), 2.0 * std::numbers::pi * u2);
        }
        const double nrm = c.norm();
        if (nrm == 0.0) {
            c.setZero();
            c(0) = 1.0;
        } else {
            c /= nrm;
        }
        out.push_back(ModelVector{std::move(c)});
    }
    return out;
}

}  // namespace hardy
