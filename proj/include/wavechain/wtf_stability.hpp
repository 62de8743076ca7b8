#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "wavechain/rational.hpp"
#include "wavechain/signal.hpp"

namespace wavechain {

/// Checklist deciding whether the wave transfer function built from M is
/// asymptotically stable: M proper, no closed-right-half-plane zeros, no
/// CRHP poles except at the origin, and the curve 1 + 4*M(j*omega) staying
/// clear of the non-positive real axis.
struct StabilityReport {
    bool proper = false;
    int crhp_zeros = 0;
    int crhp_poles_nonorigin = 0;
    bool nyquist_clear = false;
    std::vector<double> crossing_frequencies;  // where the curve touches the forbidden axis
    bool verdict = false;
};

namespace detail {

inline Complex one_plus_four_m(const RationalTf& m, double omega) { return 1.0 + 4.0 * m(Complex(0.0, omega)); }

// True when the value lies on the non-positive real axis within tolerance.
inline bool on_forbidden_axis(Complex v, double im_tol) { return v.real() <= im_tol && std::abs(v.imag()) < im_tol; }

}  // namespace detail

inline StabilityReport check_wtf_stability(const RationalTf& m, const FreqGrid& grid = FreqGrid::log_default()) {
    constexpr double root_tol = 1e-8;
    constexpr double axis_tol = 1e-7;

    StabilityReport rep;
    rep.proper = m.is_proper();

    for (const Complex& z : m.num().roots())
        if (z.real() > -root_tol) ++rep.crhp_zeros;
    for (const Complex& p : m.den().roots())
        if (p.real() > -root_tol && std::abs(p) > root_tol) ++rep.crhp_poles_nonorigin;

    // Sweep 1 + 4M(jw). Between grid points, bracket sign changes of the
    // imaginary part to catch real-axis crossings the grid itself misses.
    rep.nyquist_clear = true;
    Complex prev;
    bool have_prev = false;
    double prev_w = 0.0;
    for (double w : grid.omegas) {
        Complex v;
        try {
            v = detail::one_plus_four_m(m, w);
        } catch (const PoleHit&) {
            continue;  // imaginary-axis pole shows up in the CRHP pole count
        }
        if (detail::on_forbidden_axis(v, axis_tol)) {
            rep.nyquist_clear = false;
            rep.crossing_frequencies.push_back(w);
        }
        if (have_prev && ((prev.imag() < 0.0) != (v.imag() < 0.0))) {
            try {
                double a = prev_w, b = w;
                Complex va = prev;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (a + b);
                    const Complex vm = detail::one_plus_four_m(m, mid);
                    if ((va.imag() < 0.0) != (vm.imag() < 0.0))
                        b = mid;
                    else {
                        a = mid;
                        va = vm;
                    }
                }
                const Complex vc = detail::one_plus_four_m(m, 0.5 * (a + b));
                if (vc.real() <= axis_tol) {
                    rep.nyquist_clear = false;
                    rep.crossing_frequencies.push_back(0.5 * (a + b));
                }
            } catch (const PoleHit&) {
                // imaginary-axis pole between grid points; already reflected
                // in the CRHP pole count
            }
        }
        prev = v;
        prev_w = w;
        have_prev = true;
    }

    rep.verdict = rep.proper && rep.crhp_zeros == 0 && rep.crhp_poles_nonorigin == 0 && rep.nyquist_clear;
    return rep;
}

}  // namespace wavechain
