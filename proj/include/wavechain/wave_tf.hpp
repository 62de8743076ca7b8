#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "wavechain/errors.hpp"
#include "wavechain/rational.hpp"

namespace wavechain {

inline Complex alpha_of(const RationalTf& m, Complex s) {
    const Complex mv = m(s);
    if (mv == Complex(0.0, 0.0)) throw ZeroOfM("alpha(s) undefined where the open loop vanishes");
    return 2.0 + 1.0 / mv;
}

/// Irrational transfer function of one-hop wave propagation along a
/// homogeneous run of agents with open loop M. Of the two roots of
/// G^2 - alpha*G + 1 = 0, alpha = 2 + 1/M, the contractive one (|G| <= 1)
/// is the physical branch.
class WaveTf {
public:
    WaveTf() = default;
    explicit WaveTf(RationalTf m) : m_(std::move(m)) {}

    const RationalTf& open_loop() const { return m_; }

    Complex alpha(Complex s) const { return alpha_of(m_, s); }

    /// Contractive root. Evaluated through delta = 1/M = alpha - 2 so that
    /// alpha^2 - 4 = delta*(delta + 4) keeps full precision when alpha is
    /// near the branch point at 2 (s -> 0 with integrators in M).
    Complex operator()(Complex s) const {
        Complex big, small;
        roots(s, big, small);
        return small;
    }

    /// Expansive root 1/G.
    Complex inverse(Complex s) const {
        Complex big, small;
        roots(s, big, small);
        return big;
    }

    /// Evaluate along an ordered path. Where the two root magnitudes tie to
    /// within 1e-9 the branch is picked by continuity with the previous point.
    std::vector<Complex> eval_grid(std::span<const Complex> path) const {
        std::vector<Complex> out;
        out.reserve(path.size());
        bool have_prev = false;
        Complex prev;
        for (Complex s : path) {
            Complex big, small;
            roots(s, big, small);
            Complex g = small;
            if (have_prev && std::abs(std::abs(big) - std::abs(small)) <= 1e-9 * (1.0 + std::abs(big))) {
                if (std::abs(big - prev) < std::abs(small - prev)) g = big;
            }
            out.push_back(g);
            prev = g;
            have_prev = true;
        }
        return out;
    }

    /// Zero-frequency gain: exactly 1 with an integrator in M, otherwise the
    /// numerical limit along the positive real axis.
    double dc_gain() const {
        if (m_.integrator_count() >= 1) return 1.0;
        return (*this)(Complex(1e-8, 0.0)).real();
    }

    /// Low-frequency group delay of one hop, estimated from the phase slope.
    double front_delay() const {
        const double w = 1e-4;
        const Complex g = (*this)(Complex(0.0, w));
        return -std::arg(g) / w;
    }

private:
    void roots(Complex s, Complex& big, Complex& small) const {
        const Complex mv = m_(s);
        if (mv == Complex(0.0, 0.0)) {  // M -> 0 forces G -> 0
            big = Complex(1e300, 0.0);
            small = Complex(0.0, 0.0);
            return;
        }
        const Complex delta = 1.0 / mv;  // alpha - 2
        const Complex disc = std::sqrt(delta * (delta + 4.0));
        const Complex alpha = 2.0 + delta;
        // Root pair multiplies to 1; form the large root without cancellation
        // and divide for the small one.
        const Complex sum = (alpha.real() * disc.real() + alpha.imag() * disc.imag()) >= 0.0 ? alpha + disc : alpha - disc;
        if (sum == Complex(0.0, 0.0)) {  // branch point alpha = +-2 exactly
            big = alpha * 0.5;
            small = alpha * 0.5;
            return;
        }
        big = sum * 0.5;
        small = 1.0 / big;
        if (std::abs(small) > std::abs(big)) std::swap(big, small);
    }

    RationalTf m_;
};

inline Complex wtf_eval(const WaveTf& w, Complex s) { return w(s); }

inline double wtf_dc_gain(const WaveTf& w) { return w.dc_gain(); }

}  // namespace wavechain
