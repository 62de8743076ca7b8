#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "wavechain/chain.hpp"
#include "wavechain/errors.hpp"
#include "wavechain/signal.hpp"
#include "wavechain/wave_tf.hpp"

namespace wavechain {

// ---------------------------------------------------------------------------
// Splitting recorded outputs into forward and backward travelling parts.
//
// Within a homogeneous run the outputs are spanned by the two wave modes, so
// two neighbouring outputs determine both components:
//   from the left pair:  A_i = G/(1-G^2) X_{i-1} - G^2/(1-G^2) X_i
//                        B_i = -G/(1-G^2) X_{i-1} + 1/(1-G^2) X_i
//   from the right pair: B_i = H/(1-H^2) X_{i+1} - H^2/(1-H^2) X_i
//                        A_i = 1/(1-H^2) X_i - H/(1-H^2) X_{i+1}
// The filters run offline on damped spectra: the shift c > 0 regularizes the
// 1/(1-G^2) singularity at DC and confines wrap-around to the padded tail.
// ---------------------------------------------------------------------------

struct DecompositionOptions {
    double pad_factor = 4.0;        // FFT window as a multiple of the record
    double damping_scale = 2.0;     // c = damping_scale / record length
    double trusted_fraction = 0.8;  // residuals quoted on [0, fraction * T]
};

struct HardPairTraces {
    int agent = 0;
    Eigen::VectorXd a_left, b_left, a_right, b_right;
};

struct Decomposition {
    TimeSignal a, b;      // per-agent components (hard agents carry the left pair)
    TimeSignal agent0;    // columns: x_0 (= leader input), a_0 (= reference part), b_0
    std::vector<HardPairTraces> hard;
    Eigen::VectorXd residual_rel_l2;  // per agent, on the trusted window
    double trusted_t = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

class DampedSpectra {
public:
    DampedSpectra(const Eigen::MatrixXd& x, const Eigen::VectorXd& leader_input, double dt, double pad_factor,
                  double damping_scale)
        : dt_(dt), nt_(static_cast<int>(x.rows())) {
        k_ = next_pow2(pad_factor * nt_);
        c_ = damping_scale / (nt_ * dt);
        domega_ = 2.0 * M_PI / (k_ * dt);
        const int nc = static_cast<int>(x.cols());
        spectra_.resize(static_cast<size_t>(nc) + 1);
        for (int ch = -1; ch < nc; ++ch) {
            std::vector<Complex> z(static_cast<size_t>(k_));
            for (int n = 0; n < k_; ++n) {
                const double v = ch < 0 ? (n < nt_ ? leader_input(n) : leader_input(nt_ - 1))
                                        : (n < nt_ ? x(n, ch) : x(nt_ - 1, ch));
                z[static_cast<size_t>(n)] = v * std::exp(-c_ * n * dt);
            }
            std::vector<Complex> zz(static_cast<size_t>(k_));
            fft_.fwd(zz, z);
            spectra_[static_cast<size_t>(ch + 1)] = std::move(zz);
        }
    }

    /// s value of frequency bin k (conjugate half implied).
    Complex s_of(int k) const { return {c_, k * domega_}; }
    int bins() const { return k_; }
    int length() const { return nt_; }
    double dt() const { return dt_; }

    /// channel index: -1 is the leader-input trace, 0.. are agent outputs
    const std::vector<Complex>& spectrum(int ch) const { return spectra_[static_cast<size_t>(ch + 1)]; }

    /// y(t) with spectrum sum_j filter_j(s) * X_j(s); filters given per bin
    /// on the upper half, mirrored by conjugation.
    Eigen::VectorXd synthesize(const std::vector<std::pair<int, std::vector<Complex>>>& terms) {
        std::vector<Complex> acc(static_cast<size_t>(k_), Complex(0.0, 0.0));
        for (const auto& [ch, filt] : terms) {
            const auto& sp = spectrum(ch);
            for (int k = 0; k <= k_ / 2; ++k) acc[static_cast<size_t>(k)] += filt[static_cast<size_t>(k)] * sp[static_cast<size_t>(k)];
        }
        for (int k = k_ / 2 + 1; k < k_; ++k) acc[static_cast<size_t>(k)] = std::conj(acc[static_cast<size_t>(k_ - k)]);
        std::vector<Complex> time(static_cast<size_t>(k_));
        fft_.inv(time, acc);
        Eigen::VectorXd out(nt_);
        for (int n = 0; n < nt_; ++n) out(n) = time[static_cast<size_t>(n)].real() * std::exp(c_ * n * dt_);
        return out;
    }

    std::vector<Complex> filter_samples(const std::function<Complex(Complex)>& f) const {
        std::vector<Complex> out(static_cast<size_t>(k_ / 2 + 1));
        for (int k = 0; k <= k_ / 2; ++k) out[static_cast<size_t>(k)] = f(s_of(k));
        return out;
    }

private:
    static int next_pow2(double x) {
        int k = 1;
        while (k < x && k < (1 << 28)) k <<= 1;
        return k;
    }

    Eigen::FFT<double> fft_;
    double dt_ = 0.0, c_ = 0.0, domega_ = 0.0;
    int nt_ = 0, k_ = 0;
    std::vector<std::vector<Complex>> spectra_;
};

}  // namespace detail

/// Decompose recorded outputs into travelling components. leader_input is
/// the trace actually fed into the front of agent 1 (reference, or the
/// leader absorber output when one is active); it acts as a virtual output
/// X_0 so the first agent uses the same left-pair filters as the interior.
inline Decomposition wave_decompose(const TimeSignal& x, const Eigen::VectorXd& leader_input, const ChainSpec& chain,
                                    DecompositionOptions opt = {}) {
    const int n = chain.n();
    if (x.channels() != n) throw ValidationError("decomposition: trace channel count differs from the chain");
    if (leader_input.size() != x.length()) throw ValidationError("decomposition: leader input length mismatch");

    const auto segments = chain_segments(chain);
    detail::DampedSpectra spectra(x.samples, leader_input, x.dt, opt.pad_factor, opt.damping_scale);

    Decomposition out;
    const int nt = x.length();
    out.a = TimeSignal{0.0, x.dt, Eigen::MatrixXd::Zero(nt, n)};
    out.b = TimeSignal{0.0, x.dt, Eigen::MatrixXd::Zero(nt, n)};
    out.trusted_t = opt.trusted_fraction * (nt - 1) * x.dt;

    // shared per-segment wave values on the bin grid
    std::vector<std::vector<Complex>> gvals(segments.size());
    for (size_t si = 0; si < segments.size(); ++si) {
        const WaveTf g(segments[si].model);
        gvals[si] = spectra.filter_samples([&](Complex s) { return g(s); });
    }
    auto seg_index = [&](int agent) -> int {
        for (size_t si = 0; si < segments.size(); ++si)
            if (agent >= segments[si].first && agent <= segments[si].last) return static_cast<int>(si);
        return -1;
    };

    const int nb = spectra.bins() / 2 + 1;
    auto left_pair = [&](int i, const std::vector<Complex>& g, Eigen::VectorXd& ai, Eigen::VectorXd& bi) {
        // channels: X_{i-1} is channel i-2 (or the virtual -1 for i = 1)
        std::vector<Complex> fa_l(nb), fa_r(nb), fb_l(nb), fb_r(nb);
        for (int k = 0; k < nb; ++k) {
            const Complex gv = g[static_cast<size_t>(k)];
            const Complex den = 1.0 - gv * gv;
            fa_l[static_cast<size_t>(k)] = gv / den;
            fa_r[static_cast<size_t>(k)] = -gv * gv / den;
            fb_l[static_cast<size_t>(k)] = -gv / den;
            fb_r[static_cast<size_t>(k)] = 1.0 / den;
        }
        ai = spectra.synthesize({{i - 2, fa_l}, {i - 1, fa_r}});
        bi = spectra.synthesize({{i - 2, fb_l}, {i - 1, fb_r}});
    };
    auto right_pair = [&](int i, const std::vector<Complex>& h, Eigen::VectorXd& ai, Eigen::VectorXd& bi) {
        std::vector<Complex> fb_c(nb), fb_r(nb), fa_c(nb), fa_r(nb);
        for (int k = 0; k < nb; ++k) {
            const Complex hv = h[static_cast<size_t>(k)];
            const Complex den = 1.0 - hv * hv;
            fb_c[static_cast<size_t>(k)] = -hv * hv / den;
            fb_r[static_cast<size_t>(k)] = hv / den;
            fa_c[static_cast<size_t>(k)] = 1.0 / den;
            fa_r[static_cast<size_t>(k)] = -hv / den;
        }
        bi = spectra.synthesize({{i - 1, fb_c}, {i, fb_r}});
        ai = spectra.synthesize({{i - 1, fa_c}, {i, fa_r}});
    };

    for (int i = 1; i <= n; ++i) {
        const int si = seg_index(i);
        Eigen::VectorXd ai, bi;
        if (si >= 0) {
            const Segment& seg = segments[static_cast<size_t>(si)];
            const bool left_ok = (i > seg.first) || (i == 1);  // virtual X_0 backs agent 1
            if (left_ok)
                left_pair(i, gvals[static_cast<size_t>(si)], ai, bi);
            else if (i < seg.last || (i < n && seg_index(i + 1) == si))
                right_pair(i, gvals[static_cast<size_t>(si)], ai, bi);
            else {
                out.warnings.push_back("agent " + std::to_string(i) + ": isolated segment, components unavailable");
                ai = Eigen::VectorXd::Constant(nt, std::nan(""));
                bi = ai;
            }
            out.a.samples.col(i - 1) = ai;
            out.b.samples.col(i - 1) = bi;
        } else {
            // hard-interface agent: both side views
            const int sl = seg_index(i - 1), sr = seg_index(i + 1);
            if (sl < 0 || sr < 0) {
                out.warnings.push_back("agent " + std::to_string(i) + ": hard interface without homogeneous sides");
                out.a.samples.col(i - 1).setConstant(std::nan(""));
                out.b.samples.col(i - 1).setConstant(std::nan(""));
                continue;
            }
            HardPairTraces hp;
            hp.agent = i;
            left_pair(i, gvals[static_cast<size_t>(sl)], hp.a_left, hp.b_left);
            right_pair(i, gvals[static_cast<size_t>(sr)], hp.a_right, hp.b_right);
            out.a.samples.col(i - 1) = hp.a_left;
            out.b.samples.col(i - 1) = hp.b_left;
            out.hard.push_back(std::move(hp));
        }
    }

    // virtual agent 0: backward component crosses the front interface as
    // B_0 = G * B_1; the remainder of the leader input is the forward part.
    {
        const int si0 = seg_index(1);
        Eigen::MatrixXd a0(nt, 3);
        for (int nn = 0; nn < nt; ++nn) a0(nn, 0) = leader_input(nn);
        if (si0 >= 0) {
            std::vector<Complex> fb0(static_cast<size_t>(nb)), fb1(static_cast<size_t>(nb)), fb2(static_cast<size_t>(nb));
            const auto& g = gvals[static_cast<size_t>(si0)];
            for (int k = 0; k < nb; ++k) {
                const Complex gv = g[static_cast<size_t>(k)];
                const Complex den = 1.0 - gv * gv;
                // B_0 = G * B_1 with B_1 from the left pair of agent 1
                fb0[static_cast<size_t>(k)] = gv * (-gv / den);  // on X_0
                fb1[static_cast<size_t>(k)] = gv * (1.0 / den);  // on X_1
            }
            const Eigen::VectorXd b0 = spectra.synthesize({{-1, fb0}, {0, fb1}});
            a0.col(2) = b0;
            a0.col(1) = a0.col(0) - b0;
        } else {
            a0.col(1).setConstant(std::nan(""));
            a0.col(2).setConstant(std::nan(""));
        }
        out.agent0 = TimeSignal{0.0, x.dt, std::move(a0)};
    }

    // reconstruction residuals on the trusted window
    out.residual_rel_l2.resize(n);
    const int n_trust = std::max(1, static_cast<int>(opt.trusted_fraction * nt));
    for (int i = 0; i < n; ++i) {
        double num = 0.0, den = 0.0;
        for (int k = 0; k < n_trust; ++k) {
            const double r = x.samples(k, i) - out.a.samples(k, i) - out.b.samples(k, i);
            num += r * r;
            den += x.samples(k, i) * x.samples(k, i);
        }
        out.residual_rel_l2(i) = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    }
    return out;
}

}  // namespace wavechain
