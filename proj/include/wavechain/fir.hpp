#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wavechain/errors.hpp"
#include "wavechain/laplace_inversion.hpp"
#include "wavechain/signal.hpp"

namespace wavechain {

/// Causal discrete realization of a frequency-domain block: a direct
/// feedthrough plus impulse-response taps. Tap j carries the integral of the
/// impulse response over the cell centred at j*dt, which keeps both the step
/// response and the frequency reading of the kernel free of half-sample bias.
struct FirKernel {
    double dt = 0.0;
    double direct = 0.0;
    std::vector<double> taps;
    double tail_energy_ratio = 0.0;  // L2 of the final tenth over total

    double dc_sum() const {
        double s = direct;
        for (double t : taps) s += t;
        return s;
    }

    /// Continuous-time reading of the kernel at s.
    Complex eval(Complex s) const {
        Complex acc(direct, 0.0);
        const Complex z = std::exp(-s * dt);
        Complex zk(1.0, 0.0);
        for (double t : taps) {
            acc += t * zk;
            zk *= z;
        }
        return acc;
    }
};

struct FirOptions {
    double tail_energy_bound = 1e-2;  // beyond this the horizon is too short
    double trim_rel = 1e-13;          // drop negligible trailing taps
    IltOptions ilt;
};

/// Sample a block's impulse response into taps over [0, horizon]. The
/// feedthrough (high-frequency limit) is separated first so that only the
/// decaying part goes through the inversion.
inline FirKernel make_fir_kernel(const LaplaceFn& f, double dt, double horizon, FirOptions opt = {}) {
    if (dt <= 0.0 || horizon <= dt) throw ValidationError("fir kernel: need horizon > dt > 0");

    const double big = 1e9;
    Complex d = f(Complex(big, 0.0));
    const Complex d2 = f(Complex(2.0 * big, 0.0));
    if (std::abs(d - d2) > 1e-6 * (std::abs(d) + std::abs(d2)) + 1e-12)
        throw NonDecayingIntegrand("fir kernel: block has no high-frequency limit");
    if (std::abs(d) < 1e-12) d = 0.0;

    const double direct = d.real();
    const LaplaceFn decaying = [&f, direct](Complex s) { return f(s) - direct; };

    IltOptions ilt = opt.ilt;
    const int q = std::max(2, ilt.oversample - ilt.oversample % 2);
    ilt.oversample = q;
    const DenseIlt h = ilt_dense(decaying, horizon, dt / q, ilt);
    const auto hv = [&](int m) { return m < static_cast<int>(h.values.size()) ? h.values[static_cast<size_t>(m)] : 0.0; };

    // Composite trapezoid over the cell [(j-1/2)dt, (j+1/2)dt].
    const int nj = static_cast<int>(std::llround(horizon / dt));
    std::vector<double> taps(static_cast<size_t>(nj), 0.0);
    for (int j = 0; j < nj; ++j) {
        const int lo = std::max(0, q * j - q / 2), hi = q * j + q / 2;
        double acc = 0.5 * (hv(lo) + hv(hi));
        for (int m = lo + 1; m < hi; ++m) acc += hv(m);
        taps[static_cast<size_t>(j)] = acc * h.dt_int;
    }

    double total = 0.0, tail = 0.0;
    const int tail_from = static_cast<int>(0.9 * nj);
    for (int j = 0; j < nj; ++j) {
        const double e = taps[static_cast<size_t>(j)] * taps[static_cast<size_t>(j)];
        total += e;
        if (j >= tail_from) tail += e;
    }
    FirKernel k;
    k.dt = dt;
    k.direct = direct;
    k.tail_energy_ratio = total > 0.0 ? std::sqrt(tail / total) : 0.0;
    if (k.tail_energy_ratio > opt.tail_energy_bound)
        throw TruncationTooCoarse("fir kernel: impulse response has not decayed within the horizon");

    // Trim the negligible tail; keeps long-horizon kernels cheap to apply.
    double peak = 0.0;
    for (double t : taps) peak = std::max(peak, std::abs(t));
    int last = nj - 1;
    while (last > 0 && std::abs(taps[static_cast<size_t>(last)]) < opt.trim_rel * peak) --last;
    taps.resize(static_cast<size_t>(last + 1));
    k.taps = std::move(taps);
    return k;
}

/// Causal convolution, channel by channel.
inline TimeSignal apply_fir(const FirKernel& k, const TimeSignal& u) {
    if (std::abs(k.dt - u.dt) > 1e-12 * u.dt) throw ValidationError("apply_fir: kernel and signal steps differ");
    const int nt = u.length(), nc = u.channels();
    const int nj = static_cast<int>(k.taps.size());
    Eigen::MatrixXd y = k.direct * u.samples;
    for (int c = 0; c < nc; ++c) {
        for (int n = 0; n < nt; ++n) {
            double acc = 0.0;
            const int jmax = std::min(n + 1, nj);
            for (int j = 0; j < jmax; ++j) acc += k.taps[static_cast<size_t>(j)] * u.samples(n - j, c);
            y(n, c) += acc;
        }
    }
    return {u.t0, u.dt, std::move(y)};
}

}  // namespace wavechain
