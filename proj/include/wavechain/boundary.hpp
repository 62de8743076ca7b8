#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "wavechain/errors.hpp"
#include "wavechain/rational.hpp"
#include "wavechain/signal.hpp"
#include "wavechain/wave_tf.hpp"

namespace wavechain {

// ---------------------------------------------------------------------------
// Boundary transfer functions
//
// An interface between two homogeneous runs of agents partially transmits and
// partially reflects a travelling wave. With g the wave transfer value on the
// incoming side and h on the outgoing side, the four responses of a soft
// interface (between two agents) and of a hard interface (at one agent) are
// rational in (g, h).
// ---------------------------------------------------------------------------

struct SoftBtfValues {
    Complex taa, tab, tba, tbb;
};

struct HardBtfValues {
    Complex tAA, tAB, tBA, tBB;
};

namespace detail {
inline Complex btf_den(Complex g, Complex h) {
    const Complex d = 1.0 - h * g;
    if (std::abs(d) < 1e-12 * (1.0 + std::abs(h * g)))
        throw SingularDenominator("boundary response singular: 1 - H*G vanishes");
    return d;
}
}  // namespace detail

/// Transmission (taa, tbb) and reflection (tab, tba) of a soft interface.
inline SoftBtfValues soft_btf_values(Complex g, Complex h) {
    const Complex d = detail::btf_den(g, h);
    SoftBtfValues v;
    v.taa = (h - h * g * g) / d;
    v.tba = (h * g - h * h) / d;
    v.tbb = (g - h * h * g) / d;
    v.tab = (h * g - g * g) / d;
    return v;
}

/// Transmission (tAA, tBB) and reflection (tAB, tBA) of a hard interface.
inline HardBtfValues hard_btf_values(Complex g, Complex h) {
    const Complex d = detail::btf_den(g, h);
    HardBtfValues v;
    v.tAA = (1.0 + g) * (1.0 - h) / d;
    v.tBA = (h - g) / d;
    v.tBB = (1.0 + h) * (1.0 - g) / d;
    v.tAB = (g - h) / d;
    return v;
}

enum class BoundaryKind { soft, hard };

/// Four boundary responses sampled on a frequency grid (s = j*omega).
/// Grid points where 1 - H*G vanishes are masked rather than fatal.
struct BoundaryTfSet {
    BoundaryKind kind = BoundaryKind::soft;
    FreqGrid grid;
    std::vector<Complex> t_transmit_fwd;  // taa / tAA
    std::vector<Complex> t_reflect_fwd;   // tab / tAB
    std::vector<Complex> t_reflect_bwd;   // tba / tBA
    std::vector<Complex> t_transmit_bwd;  // tbb / tBB
    std::vector<int> masked;              // indices of singular grid points
    WaveTf g, h;
};

inline BoundaryTfSet soft_btfs(const WaveTf& g, const WaveTf& h, const FreqGrid& grid) {
    BoundaryTfSet set;
    set.kind = BoundaryKind::soft;
    set.grid = grid;
    set.g = g;
    set.h = h;
    const int n = grid.size();
    set.t_transmit_fwd.resize(n);
    set.t_reflect_fwd.resize(n);
    set.t_reflect_bwd.resize(n);
    set.t_transmit_bwd.resize(n);
    for (int i = 0; i < n; ++i) {
        const Complex s(0.0, grid.omegas[static_cast<size_t>(i)]);
        try {
            const SoftBtfValues v = soft_btf_values(g(s), h(s));
            set.t_transmit_fwd[static_cast<size_t>(i)] = v.taa;
            set.t_reflect_fwd[static_cast<size_t>(i)] = v.tab;
            set.t_reflect_bwd[static_cast<size_t>(i)] = v.tba;
            set.t_transmit_bwd[static_cast<size_t>(i)] = v.tbb;
        } catch (const SingularDenominator&) {
            const Complex nan(std::nan(""), std::nan(""));
            set.t_transmit_fwd[static_cast<size_t>(i)] = nan;
            set.t_reflect_fwd[static_cast<size_t>(i)] = nan;
            set.t_reflect_bwd[static_cast<size_t>(i)] = nan;
            set.t_transmit_bwd[static_cast<size_t>(i)] = nan;
            set.masked.push_back(i);
        }
    }
    return set;
}

inline BoundaryTfSet hard_btfs(const WaveTf& g, const WaveTf& h, const FreqGrid& grid) {
    BoundaryTfSet set;
    set.kind = BoundaryKind::hard;
    set.grid = grid;
    set.g = g;
    set.h = h;
    const int n = grid.size();
    set.t_transmit_fwd.resize(n);
    set.t_reflect_fwd.resize(n);
    set.t_reflect_bwd.resize(n);
    set.t_transmit_bwd.resize(n);
    for (int i = 0; i < n; ++i) {
        const Complex s(0.0, grid.omegas[static_cast<size_t>(i)]);
        try {
            const HardBtfValues v = hard_btf_values(g(s), h(s));
            set.t_transmit_fwd[static_cast<size_t>(i)] = v.tAA;
            set.t_reflect_fwd[static_cast<size_t>(i)] = v.tAB;
            set.t_reflect_bwd[static_cast<size_t>(i)] = v.tBA;
            set.t_transmit_bwd[static_cast<size_t>(i)] = v.tBB;
        } catch (const SingularDenominator&) {
            const Complex nan(std::nan(""), std::nan(""));
            set.t_transmit_fwd[static_cast<size_t>(i)] = nan;
            set.t_reflect_fwd[static_cast<size_t>(i)] = nan;
            set.t_reflect_bwd[static_cast<size_t>(i)] = nan;
            set.t_transmit_bwd[static_cast<size_t>(i)] = nan;
            set.masked.push_back(i);
        }
    }
    return set;
}

/// Split gains of a single agent towards its neighbours:
/// X = T_L*X_left + T_R*X_right with T_L = Mf/(1+Mf+Mr), T_R = Mr/(1+Mf+Mr).
inline std::pair<Complex, Complex> tl_tr_of(const RationalTf& mf, const RationalTf& mr, Complex s) {
    const Complex vf = mf(s), vr = mr(s);
    const Complex den = 1.0 + vf + vr;
    if (std::abs(den) < 1e-12 * (1.0 + std::abs(vf) + std::abs(vr)))
        throw SingularDenominator("agent split gains singular: 1 + Mf + Mr vanishes");
    return {vf / den, vr / den};
}

// ---------------------------------------------------------------------------
// Zero-frequency gains
// ---------------------------------------------------------------------------

/// DC gains of the boundary responses plus the integrator data they derive
/// from. Soft and hard gains are tied by kappa_aa = kappa_BB etc.
struct DcGainRecord {
    double kaa = 0, kab = 0, kba = 0, kbb = 0;
    double kAA = 0, kAB = 0, kBA = 0, kBB = 0;
    int nu_left = 0, nu_right = 0;       // integrators in the two side models
    double limit_left = 0, limit_right = 0;  // lim s^nu * M for each side
};

/// Closed-form DC gains for the interface between a left model (wave
/// transfer G) and right model (wave transfer H). For a soft interface pass
/// (M_r of agent sigma, M_f of agent sigma+1); for a hard one
/// (M_f, M_r) of the boundary agent. Requires an integrator on both sides.
inline DcGainRecord boundary_dc_gains(const RationalTf& left_m, const RationalTf& right_m) {
    DcGainRecord r;
    r.nu_left = left_m.integrator_count();
    r.nu_right = right_m.integrator_count();
    if (r.nu_left < 1 || r.nu_right < 1)
        throw NoIntegrator("boundary DC gains require at least one integrator on each side");
    r.limit_left = left_m.integrator_limit();
    r.limit_right = right_m.integrator_limit();

    if (r.nu_right == r.nu_left) {
        const double ratio = r.limit_left / r.limit_right;
        r.kaa = 2.0 / (std::sqrt(ratio) + 1.0);
        r.kbb = 2.0 / (std::sqrt(1.0 / ratio) + 1.0);
    } else if (r.nu_right < r.nu_left) {
        r.kaa = 0.0;
        r.kbb = 2.0;
    } else {
        r.kaa = 2.0;
        r.kbb = 0.0;
    }
    r.kab = r.kaa - 1.0;
    r.kba = r.kbb - 1.0;
    r.kBB = r.kaa;
    r.kAA = r.kbb;
    r.kAB = r.kba;
    r.kBA = r.kab;
    return r;
}

inline DcGainRecord soft_dc_gains(const RationalTf& mr_sigma, const RationalTf& mf_sigma_plus_1) {
    return boundary_dc_gains(mr_sigma, mf_sigma_plus_1);
}

/// Numeric DC limit of a boundary response by Richardson extrapolation along
/// the positive real axis from s = 1e-7 to s = 1e-8; the leading correction
/// scales like s^(min(nu)/2).
inline double numeric_dc_limit(const std::function<Complex(Complex)>& response, int nu_min) {
    const double h1 = 1e-8, h2 = 1e-7;
    const double v1 = response(Complex(h1, 0.0)).real();
    const double v2 = response(Complex(h2, 0.0)).real();
    const double beta = 0.5 * nu_min;
    const double factor = std::pow(h2 / h1, beta);
    return v1 - (v2 - v1) / (factor - 1.0);
}

}  // namespace wavechain
