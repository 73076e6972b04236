#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hardy/numerics.hpp"

namespace hardy {

/// A point of the open unit disk.
class DiskPoint {
public:
    explicit DiskPoint(Complex value);
    [[nodiscard]] Complex value() const noexcept { return value_; }
    operator Complex() const noexcept { return value_; }  // NOLINT(google-explicit-constructor)

private:
    Complex value_;
};

/// Finite Blaschke product γ Π (z - a)/(1 - ā z), zeros listed with multiplicity.
class BlaschkeProduct {
public:
    explicit BlaschkeProduct(std::vector<Complex> zeros, Complex unimodular_constant = 1.0);

    [[nodiscard]] const std::vector<Complex>& zeros() const noexcept { return zeros_; }
    [[nodiscard]] Complex unimodular_constant() const noexcept { return constant_; }
    [[nodiscard]] std::size_t degree() const noexcept { return zeros_.size(); }
    [[nodiscard]] Complex operator()(Complex z) const;
    /// True when z coincides (within tol) with a listed zero.
    [[nodiscard]] bool is_zero(Complex z, double tol = 1e-12) const;

private:
    std::vector<Complex> zeros_;
    Complex constant_;
};

Complex blaschke_eval(const BlaschkeProduct& b, Complex z);

/// Szegő kernel 1/(1 - z w̄).
inline Complex szego_kernel(Complex z, Complex w) { return 1.0 / (1.0 - z * std::conj(w)); }

/// Reproducing kernel of H² ⊖ BH².
Complex model_space_kernel(const BlaschkeProduct& b, Complex z, Complex w);

/// Takenaka–Malmquist orthonormal basis of the model space H² ⊖ BH²:
/// e_k(z) = sqrt(1-|a_k|²)/(1 - ā_k z) Π_{j<k} (z - a_j)/(1 - ā_j z).
class ModelSpaceBasis {
public:
    explicit ModelSpaceBasis(BlaschkeProduct product);

    [[nodiscard]] const BlaschkeProduct& product() const noexcept { return product_; }
    [[nodiscard]] Eigen::Index dimension() const noexcept {
        return static_cast<Eigen::Index>(product_.degree());
    }
    /// (e_1(z), …, e_d(z)).
    [[nodiscard]] Eigen::VectorXcd evaluate(Complex z) const;
    /// Σ c_k e_k(z).
    [[nodiscard]] Complex expand(const Eigen::VectorXcd& coefficients, Complex z) const;
    /// Coefficients of the model-space projection of the constant 1, i.e. conj(e_k(0)).
    [[nodiscard]] Eigen::VectorXcd projection_of_one() const;

private:
    BlaschkeProduct product_;
};

ModelSpaceBasis tm_basis(const BlaschkeProduct& b);

/// Coefficient vector of a model-space element in the Takenaka–Malmquist basis.
struct ModelVector {
    Eigen::VectorXcd coefficients;

    [[nodiscard]] bool is_normalized(double tol = 1e-10) const {
        return std::abs(coefficients.norm() - 1.0) <= tol;
    }
};

/// v(z) conj(v(w)) + B(z) conj(B(w)) / (1 - z w̄): kernel of ℂv ⊕ BH².
/// Throws NotNormalized unless ‖v‖ = 1 within 1e-10.
Complex cyclic_kernel(const ModelSpaceBasis& basis, const ModelVector& v, Complex z, Complex w);
Complex cyclic_kernel(const BlaschkeProduct& b, const ModelVector& v, Complex z, Complex w);

/// An evaluable positive kernel on the disk.
class KernelSpec {
public:
    struct Szego {};
    struct ModelSpace {
        BlaschkeProduct product;
    };
    struct CyclicCplusB {
        ModelSpaceBasis basis;
        ModelVector v;
    };
    using Variant = std::variant<Szego, ModelSpace, CyclicCplusB>;

    static KernelSpec szego() { return KernelSpec(Szego{}); }
    static KernelSpec model_space(BlaschkeProduct b) { return KernelSpec(ModelSpace{std::move(b)}); }
    /// Validates ‖v‖ = 1 and the dimension of v.
    static KernelSpec cyclic(const BlaschkeProduct& b, ModelVector v);

    [[nodiscard]] Complex operator()(Complex z, Complex w) const;
    [[nodiscard]] const Variant& variant() const noexcept { return v_; }
    [[nodiscard]] std::string tag() const;

    /// [K(x_i, x_j)].
    [[nodiscard]] Eigen::MatrixXcd gram(const Eigen::VectorXcd& points) const;

private:
    explicit KernelSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Outer function with prescribed boundary modulus, held as log-modulus samples on
/// a quadrature rule and evaluated through the discretized Herglotz integral
/// g(z) = exp( (1/2) (1/N) Σ (ζ_k + z)/(ζ_k - z) log p_k ).
class OuterFunction {
public:
    OuterFunction(QuadratureRule rule, Eigen::VectorXd log_modulus_squared);

    [[nodiscard]] const QuadratureRule& rule() const noexcept { return rule_; }
    [[nodiscard]] const Eigen::VectorXd& log_samples() const noexcept { return log_p_; }

    /// Interior evaluation, |z| < 1.
    [[nodiscard]] Complex operator()(Complex z) const;
    [[nodiscard]] Complex log_value(Complex z) const;

    /// Boundary values g(ζ_k) at the rule's nodes: modulus sqrt(p_k) with the phase
    /// given by the discrete conjugate function of (1/2) log p.
    [[nodiscard]] Eigen::VectorXcd boundary_values() const;

private:
    QuadratureRule rule_;
    Eigen::VectorXd log_p_;
};

/// p holds p(t_k) at the rule's nodes; each sample must be positive and finite.
/// Phase normalization: g(0) > 0.
OuterFunction outer_from_modulus(const Eigen::VectorXd& p, const QuadratureRule& rule);

/// Deterministic unit vectors in the model space of b: scrambled Halton points
/// pushed through Box–Muller to complex Gaussians, then normalized.
std::vector<ModelVector> sample_model_sphere(const BlaschkeProduct& b, int count, std::uint64_t seed);

}  // namespace hardy
