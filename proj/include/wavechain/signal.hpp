#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wavechain/errors.hpp"

namespace wavechain {

/// Uniformly sampled multi-channel signal; row n holds all channels at
/// t = t0 + n*dt.
struct TimeSignal {
    double t0 = 0.0;
    double dt = 0.0;          // seconds
    Eigen::MatrixXd samples;  // (time x channels)

    TimeSignal() = default;
    TimeSignal(double t0_, double dt_, Eigen::MatrixXd s) : t0(t0_), dt(dt_), samples(std::move(s)) {
        if (dt <= 0.0) throw ValidationError("time signal: dt must be positive");
    }

    int length() const { return static_cast<int>(samples.rows()); }
    int channels() const { return static_cast<int>(samples.cols()); }
    double time(int n) const { return t0 + dt * n; }
    double t_final() const { return length() > 0 ? time(length() - 1) : t0; }

    static TimeSignal step(double amplitude, double dt, int n, int channels = 1) {
        return {0.0, dt, Eigen::MatrixXd::Constant(n, channels, amplitude)};
    }

    static TimeSignal ramp(double slope, double dt, int n) {
        Eigen::MatrixXd s(n, 1);
        for (int k = 0; k < n; ++k) s(k, 0) = slope * dt * k;
        return {0.0, dt, std::move(s)};
    }
};

/// Strictly ascending positive angular frequencies in rad/s.
struct FreqGrid {
    std::vector<double> omegas;

    FreqGrid() = default;
    explicit FreqGrid(std::vector<double> w) : omegas(std::move(w)) {
        for (size_t i = 0; i < omegas.size(); ++i) {
            if (omegas[i] <= 0.0) throw ValidationError("frequency grid: omegas must be positive");
            if (i > 0 && omegas[i] <= omegas[i - 1]) throw ValidationError("frequency grid: omegas must ascend");
        }
    }

    static FreqGrid log_spaced(int n, double lo, double hi) {
        std::vector<double> w(static_cast<size_t>(n));
        const double llo = std::log10(lo), lhi = std::log10(hi);
        for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
        return FreqGrid(std::move(w));
    }

    // 1024 points across [1e-3, 1e3] rad/s.
    static FreqGrid log_default() { return log_spaced(1024, 1e-3, 1e3); }

    FreqGrid doubled() const {
        std::vector<double> w;
        w.reserve(omegas.size() * 2 - 1);
        for (size_t i = 0; i + 1 < omegas.size(); ++i) {
            w.push_back(omegas[i]);
            w.push_back(std::sqrt(omegas[i] * omegas[i + 1]));  // log midpoint
        }
        w.push_back(omegas.back());
        return FreqGrid(std::move(w));
    }

    int size() const { return static_cast<int>(omegas.size()); }
};

/// Complex response values per channel over a frequency grid.
struct FreqResponse {
    FreqGrid grid;
    Eigen::MatrixXcd values;  // (omega x channels)

    int channels() const { return static_cast<int>(values.cols()); }
};

}  // namespace wavechain
