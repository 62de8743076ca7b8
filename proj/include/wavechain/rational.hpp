#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "wavechain/errors.hpp"
#include "wavechain/polynomial.hpp"

namespace wavechain {

/// Real-coefficient rational transfer function num(s)/den(s), stored with a
/// monic denominator. Covers plants, controllers and open loops alike.
class RationalTf {
public:
    RationalTf() : num_{0.0}, den_{1.0} {}

    RationalTf(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw ValidationError("rational transfer function: zero denominator");
        const double lead = den_.coeffs().back();
        num_ = num_ * (1.0 / lead);
        den_ = den_ * (1.0 / lead);
    }

    RationalTf(std::initializer_list<double> num, std::initializer_list<double> den)
        : RationalTf(Polynomial(num), Polynomial(den)) {}

    static RationalTf constant(double k) { return RationalTf{Polynomial{k}, Polynomial{1.0}}; }

    static RationalTf identity() { return constant(1.0); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_proper() const { return num_.degree() <= den_.degree(); }
    bool is_strictly_proper() const { return num_.degree() < den_.degree() || num_.is_zero(); }

    /// Pointwise evaluation. Throws PoleHit when the denominator value is
    /// dominated by cancellation (the point is numerically a pole).
    Complex operator()(Complex s) const {
        double mag_den = 0.0;
        const Complex d = den_.eval_with_magnitude(s, mag_den);
        if (std::abs(d) < 1e-13 * mag_den)
            throw PoleHit("transfer function evaluated at a pole, s = (" + std::to_string(s.real()) + ", " +
                          std::to_string(s.imag()) + ")");
        return num_(s) / d;
    }

    /// Number of free integrators: multiplicity of s = 0 in den minus num,
    /// clamped at zero.
    int integrator_count() const {
        const int nu = den_.root_multiplicity_at_zero() - num_.root_multiplicity_at_zero();
        return nu > 0 ? nu : 0;
    }

    /// lim_{s->0} s^nu * M(s) with nu = integrator_count(); the finite
    /// low-frequency strength of an open loop.
    double integrator_limit() const {
        const int mn = num_.root_multiplicity_at_zero();
        const int md = den_.root_multiplicity_at_zero();
        if (md - mn <= 0) return num_(0.0) / den_(0.0);
        return num_[mn] / den_[md];
    }

    RationalTf operator*(const RationalTf& rhs) const { return {num_ * rhs.num_, den_ * rhs.den_}; }

    RationalTf operator+(const RationalTf& rhs) const {
        return {num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_};
    }

    RationalTf operator*(double k) const { return {num_ * k, den_}; }

private:
    Polynomial num_;
    Polynomial den_;
};

inline Complex tf_eval(const RationalTf& g, Complex s) { return g(s); }

inline int count_integrators(const RationalTf& g) { return g.integrator_count(); }

/// Coefficient-wise comparison of monic-normalized forms. Used to decide
/// whether two agents carry the same dynamics.
inline bool tf_equal(const RationalTf& a, const RationalTf& b, double rel_tol = 1e-9) {
    if (a.num().degree() != b.num().degree() || a.den().degree() != b.den().degree()) return false;
    const double scale =
        std::max({a.num().max_abs_coeff(), b.num().max_abs_coeff(), a.den().max_abs_coeff(), b.den().max_abs_coeff(), 1e-300});
    for (int k = 0; k <= a.num().degree(); ++k)
        if (std::abs(a.num()[k] - b.num()[k]) > rel_tol * scale) return false;
    for (int k = 0; k <= a.den().degree(); ++k)
        if (std::abs(a.den()[k] - b.den()[k]) > rel_tol * scale) return false;
    return true;
}

}  // namespace wavechain
