#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wavechain/errors.hpp"

namespace wavechain {

using Complex = std::complex<double>;

/// Real polynomial in the Laplace variable, coefficients stored in
/// ascending powers of s. The zero polynomial is represented as {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}

    Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { normalize(); }

    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

    static Polynomial one() { return Polynomial{1.0}; }

    const std::vector<double>& coeffs() const { return coeffs_; }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

    double operator[](int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<size_t>(k)] : 0.0;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    /// Horner evaluation.
    Complex operator()(Complex s) const {
        Complex acc(0.0, 0.0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
        return acc;
    }

    double operator()(double s) const {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
        return acc;
    }

    /// Horner evaluation together with a running magnitude bound of the
    /// summed terms; the bound tells how much cancellation occurred.
    Complex eval_with_magnitude(Complex s, double& magnitude) const {
        Complex acc(0.0, 0.0);
        double mag = 0.0;
        const double as = std::abs(s);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * s + *it;
            mag = mag * as + std::abs(*it);
        }
        magnitude = mag;
        return acc;
    }

    Polynomial operator*(const Polynomial& rhs) const {
        if (is_zero() || rhs.is_zero()) return Polynomial{};
        std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
        for (size_t i = 0; i < coeffs_.size(); ++i)
            for (size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
        return Polynomial(std::move(out));
    }

    Polynomial operator+(const Polynomial& rhs) const {
        std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
        for (size_t i = 0; i < out.size(); ++i) out[i] = (*this)[static_cast<int>(i)] + rhs[static_cast<int>(i)];
        return Polynomial(std::move(out));
    }

    Polynomial operator-(const Polynomial& rhs) const {
        std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
        for (size_t i = 0; i < out.size(); ++i) out[i] = (*this)[static_cast<int>(i)] - rhs[static_cast<int>(i)];
        return Polynomial(std::move(out));
    }

    Polynomial operator*(double k) const {
        std::vector<double> out = coeffs_;
        for (double& c : out) c *= k;
        return Polynomial(std::move(out));
    }

    Polynomial derivative() const {
        if (degree() == 0) return Polynomial{};
        std::vector<double> out(coeffs_.size() - 1);
        for (size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * static_cast<double>(i);
        return Polynomial(std::move(out));
    }

    /// Multiplicity of the root s = 0 (number of vanishing low-order
    /// coefficients, judged relative to the largest coefficient).
    int root_multiplicity_at_zero(double rel_tol = 1e-12) const {
        if (is_zero()) return 0;
        const double tol = rel_tol * max_abs_coeff();
        int mult = 0;
        while (mult < static_cast<int>(coeffs_.size()) - 1 && std::abs(coeffs_[static_cast<size_t>(mult)]) <= tol)
            ++mult;
        return mult;
    }

    /// All complex roots via the companion-matrix eigenproblem.
    std::vector<Complex> roots() const {
        const int n = degree();
        if (n < 1 || is_zero()) return {};
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
        const double lead = coeffs_.back();
        for (int i = 0; i < n; ++i) comp(i, n - 1) = -coeffs_[static_cast<size_t>(i)] / lead;
        for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
        std::vector<Complex> out(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
        return out;
    }

private:
    void normalize() {
        if (coeffs_.empty()) coeffs_ = {0.0};
        while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    }

    std::vector<double> coeffs_;
};

inline Complex poly_eval(const Polynomial& p, Complex s) { return p(s); }

}  // namespace wavechain
