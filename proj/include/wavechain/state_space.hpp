#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "wavechain/errors.hpp"
#include "wavechain/rational.hpp"
#include "wavechain/signal.hpp"

namespace wavechain {

struct StateSpace {
    Eigen::MatrixXd A, B, C, D;

    StateSpace() = default;
    StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
        if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.cols() || D.rows() != C.rows() ||
            D.cols() != B.cols())
            throw ValidationError("state space: inconsistent matrix dimensions");
    }

    int order() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
    int outputs() const { return static_cast<int>(C.rows()); }

    /// Transfer matrix C (sI - A)^-1 B + D at a single point.
    Eigen::MatrixXcd eval(Complex s) const {
        const int n = order();
        if (n == 0) return D.cast<Complex>();
        Eigen::MatrixXcd sIA = -A.cast<Complex>();
        sIA.diagonal().array() += s;
        Eigen::MatrixXcd x = sIA.partialPivLu().solve(B.cast<Complex>());
        return C.cast<Complex>() * x + D.cast<Complex>();
    }
};

/// Controllable-canonical realization of a proper rational transfer function.
inline StateSpace to_state_space(const RationalTf& g) {
    if (!g.is_proper()) throw ImproperTf("state-space realization requires a proper transfer function");
    const int n = g.den().degree();
    // den is monic; direct feedthrough is the coefficient of s^n in num.
    const double d = g.num()[n];
    if (n == 0) {
        return {Eigen::MatrixXd::Zero(0, 0), Eigen::MatrixXd::Zero(0, 1), Eigen::MatrixXd::Zero(1, 0),
                Eigen::MatrixXd::Constant(1, 1, d)};
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) A(n - 1, j) = -g.den()[j];
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 1);
    B(n - 1, 0) = 1.0;
    Eigen::MatrixXd C(1, n);
    for (int j = 0; j < n; ++j) C(0, j) = g.num()[j] - d * g.den()[j];
    return {std::move(A), std::move(B), std::move(C), Eigen::MatrixXd::Constant(1, 1, d)};
}

struct ZohSystem {
    Eigen::MatrixXd Ad, Bd;
    double dt = 0.0;
};

/// Exact zero-order-hold discretization through the matrix exponential of
/// the augmented [A B; 0 0] block.
inline ZohSystem discretize_zoh(const StateSpace& ss, double dt) {
    if (dt <= 0.0) throw ValidationError("discretization step must be positive");
    const int n = ss.order(), m = ss.inputs();
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = ss.A * dt;
    aug.topRightCorner(n, m) = ss.B * dt;
    const Eigen::MatrixXd e = aug.exp();
    return {e.topLeftCorner(n, n), e.topRightCorner(n, m), dt};
}

/// Zero-initial-condition simulation under zero-order-hold inputs.
/// Deterministic; flags divergence instead of propagating non-finite state.
inline TimeSignal ss_simulate(const StateSpace& ss, const TimeSignal& u, bool* diverged = nullptr) {
    if (u.channels() != ss.inputs()) throw ValidationError("simulation: input channel count mismatch");
    const ZohSystem d = discretize_zoh(ss, u.dt);
    const int nt = u.length();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.order());
    Eigen::MatrixXd y(nt, ss.outputs());
    bool bad = false;
    for (int k = 0; k < nt; ++k) {
        const Eigen::VectorXd uk = u.samples.row(k).transpose();
        y.row(k) = (ss.C * x + ss.D * uk).transpose();
        x = d.Ad * x + d.Bd * uk;
        if (!x.allFinite()) {
            bad = true;
            for (int j = k + 1; j < nt; ++j) y.row(j).setConstant(std::nan(""));
            break;
        }
    }
    if (diverged) *diverged = bad;
    return {u.t0, u.dt, std::move(y)};
}

/// Frequency response of a SIMO/MIMO realization over a grid; returns one
/// (outputs x inputs) page per frequency evaluated at s = j*omega.
inline std::vector<Eigen::MatrixXcd> freq_response(const StateSpace& ss, const FreqGrid& grid) {
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(grid.omegas.size());
    for (double w : grid.omegas) out.push_back(ss.eval(Complex(0.0, w)));
    return out;
}

inline FreqResponse freq_response_siso(const StateSpace& ss, const FreqGrid& grid, int output = 0, int input = 0) {
    FreqResponse fr;
    fr.grid = grid;
    fr.values.resize(grid.size(), 1);
    for (int i = 0; i < grid.size(); ++i) fr.values(i, 0) = ss.eval(Complex(0.0, grid.omegas[static_cast<size_t>(i)]))(output, input);
    return fr;
}

}  // namespace wavechain
