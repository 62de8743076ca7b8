#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "wavechain/errors.hpp"
#include "wavechain/signal.hpp"

namespace wavechain {

using LaplaceFn = std::function<Complex(Complex)>;

/// Numerical Bromwich inversion by sampling the transform on the damped line
/// s = c + j*omega and inverse-FFT. Discretizing the line integral at spacing
/// 2*pi/T_w is exactly a periodization of f(t)*exp(-c*t) with period T_w, so
/// the dominant error is the wrapped tail exp(-c*(T_w - t)); generous padding
/// keeps it far below the 1e-3 target on the trusted window.
///
/// A 1/s-type head (a jump at t = 0) is split off analytically before the
/// FFT so the remaining integrand decays like 1/omega^2 and the edge of the
/// grid carries no weight.
struct IltOptions {
    double damping_scale = 2.0;     // c = damping_scale / horizon
    int min_samples = 1 << 16;      // lower bound on frequency samples
    double pad_factor = 8.0;        // window >= pad_factor * horizon
    int oversample = 4;             // internal step = dt / oversample (even)
    double edge_tolerance = 1e-3;   // max allowed |F| weight at the grid edge
    bool midpoint_sampling = true;  // sample returned values at (n + 1/2)*dt
};

/// Inverse-transform samples on the fine internal grid t_m = m * dt_int.
struct DenseIlt {
    double dt_int = 0.0;
    std::vector<double> values;
};

namespace detail {

inline int next_pow2(double x) {
    int k = 1;
    while (k < x && k < (1 << 28)) k <<= 1;
    return k;
}

struct JumpSplit {
    double f0 = 0.0;      // lim s*F(s); contributes f0*exp(-lambda*t)
    double lambda = 0.0;  // pole of the split-off term
};

// Estimate lim s*F(s) from two probes on the positive real axis; an
// inconsistent pair (delta content, slower-than-1/s decay) disables the split.
inline JumpSplit estimate_jump(const LaplaceFn& f, double horizon) {
    const double big = 1e8;
    const Complex a = f(Complex(big, 0.0)) * big;
    const Complex b = f(Complex(2.0 * big, 0.0)) * (2.0 * big);
    JumpSplit js;
    js.lambda = 4.0 / horizon;
    if (std::abs(a - b) <= 1e-4 * (std::abs(a) + std::abs(b)) + 1e-12 && std::abs(a.imag()) < 1e-9 * (1.0 + std::abs(a)))
        js.f0 = a.real();
    return js;
}

}  // namespace detail

inline DenseIlt ilt_dense(const LaplaceFn& f, double horizon, double dt_int, const IltOptions& opt = {}) {
    if (horizon <= 0.0 || dt_int <= 0.0) throw ValidationError("inversion: horizon and step must be positive");
    const int K = detail::next_pow2(std::max<double>(opt.min_samples, opt.pad_factor * horizon / dt_int));
    const double t_window = K * dt_int;
    const double c = opt.damping_scale / horizon;
    const double domega = 2.0 * M_PI / t_window;

    const detail::JumpSplit js = detail::estimate_jump(f, horizon);
    const auto f_reg = [&](Complex s) { return f(s) - js.f0 / (s + js.lambda); };

    std::vector<Complex> bins(static_cast<size_t>(K));
    double peak = 0.0;
    for (int k = 0; k <= K / 2; ++k) {
        const Complex v = f_reg(Complex(c, k * domega));
        bins[static_cast<size_t>(k)] = v;
        peak = std::max(peak, std::abs(v));
    }
    bins[static_cast<size_t>(K / 2)] = Complex(bins[static_cast<size_t>(K / 2)].real(), 0.0);
    for (int k = K / 2 + 1; k < K; ++k) bins[static_cast<size_t>(k)] = std::conj(bins[static_cast<size_t>(K - k)]);

    double edge = 0.0;
    const int edge_from = K / 2 - std::max(1, K / 200);
    for (int k = edge_from; k <= K / 2; ++k) edge += std::abs(bins[static_cast<size_t>(k)]);
    edge /= (K / 2 - edge_from + 1);
    if (edge > opt.edge_tolerance * peak)
        throw NonDecayingIntegrand("transform does not decay at the inversion grid edge");

    Eigen::FFT<double> fft;
    std::vector<Complex> time(static_cast<size_t>(K));
    fft.inv(time, bins);  // (1/K) * sum_k bins_k * exp(+2*pi*i*k*n/K)

    DenseIlt out;
    out.dt_int = dt_int;
    const int keep = std::min<int>(K, static_cast<int>(std::llround(horizon / dt_int)) + opt.oversample + 2);
    out.values.resize(static_cast<size_t>(keep));
    for (int m = 0; m < keep; ++m) {
        const double t = m * dt_int;
        out.values[static_cast<size_t>(m)] =
            time[static_cast<size_t>(m)].real() * std::exp(c * t) / dt_int + js.f0 * std::exp(-js.lambda * t);
    }
    return out;
}

/// Inverse transform of f over [0, t_final], sampled at (n + 1/2)*dt (or at
/// n*dt when midpoint sampling is off).
inline TimeSignal ilt_response(const LaplaceFn& f, double t_final, double dt, IltOptions opt = {}) {
    if (t_final <= 0.0 || dt <= 0.0) throw ValidationError("inversion: t_final and dt must be positive");
    const int q = std::max(2, opt.oversample - opt.oversample % 2);
    opt.oversample = q;
    const DenseIlt dense = ilt_dense(f, t_final, dt / q, opt);

    const int phase = opt.midpoint_sampling ? q / 2 : 0;
    const int n_out = (static_cast<int>(dense.values.size()) - 1 - phase) / q + 1;
    Eigen::MatrixXd samples(n_out, 1);
    for (int n = 0; n < n_out; ++n) samples(n, 0) = dense.values[static_cast<size_t>(q * n + phase)];
    return {phase * dense.dt_int, dt, std::move(samples)};
}

}  // namespace wavechain
