#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "wavechain/absorbers.hpp"
#include "wavechain/chain.hpp"
#include "wavechain/errors.hpp"

namespace wavechain {

namespace detail {

inline Complex ipow(Complex base, int e) {
    Complex acc(1.0, 0.0);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace detail

/// A chain reduced to wave terms: one homogeneous run (sigma = N) or two
/// runs split by a single soft interface at sigma. Anything else has no
/// closed-form response here.
struct ChainWaveView {
    int n = 0;
    int sigma = 0;
    WaveTf g, h;
    bool has_soft = false;
};

inline ChainWaveView chain_wave_view(const ChainSpec& chain) {
    const auto boundaries = detect_boundaries(chain);
    for (const auto& b : boundaries)
        if (b.kind == BoundaryKind::hard)
            throw UnsupportedTopology("no closed-form chain response across hard interfaces");
    int soft_count = 0, sigma = chain.n();
    for (const auto& b : boundaries)
        if (b.kind == BoundaryKind::soft) {
            ++soft_count;
            sigma = b.index;
        }
    if (soft_count > 1) throw UnsupportedTopology("closed forms cover at most one soft interface");
    ChainWaveView v;
    v.n = chain.n();
    v.sigma = sigma;
    v.has_soft = soft_count == 1;
    const auto segments = chain_segments(chain);
    v.g = WaveTf(segment_of(segments, 1)->model);
    v.h = v.has_soft ? WaveTf(segment_of(segments, sigma + 1)->model) : v.g;
    return v;
}

/// Closed-form X_p / X_ref for the supported absorber layouts. When a soft
/// interface exists its absorber pair must be active; the ends decide the
/// shape of the reflection series:
///   - rear (or both ends) absorbed: pure transmission G^p, G^sigma H^(p-sigma)
///   - leader only: one free-end reflection survives
///   - no end absorber: two-sided geometric reflection series
inline LaplaceFn closed_form_chain(const ChainSpec& chain, int p) {
    if (p < 1 || p > chain.n()) throw ValidationError("agent index out of range");
    const ChainWaveView v = chain_wave_view(chain);

    bool leader = false, rear = false, soft = false;
    for (const auto& a : chain.absorbers) {
        leader = leader || a.kind == AbsorberPlacement::Kind::leader;
        rear = rear || a.kind == AbsorberPlacement::Kind::rear;
        soft = soft || (a.kind == AbsorberPlacement::Kind::soft_pair && a.index == v.sigma);
    }
    if (v.has_soft && !soft)
        throw UnsupportedTopology("closed forms need the soft interface pair to be absorbed");
    if (!v.has_soft && soft) throw UnsupportedTopology("soft pair declared without an interface");

    const int n = v.n, sigma = v.sigma;
    const WaveTf g = v.g, h = v.h;

    if (rear) {
        // transmission only
        return [g, h, sigma, p](Complex s) {
            const Complex gv = g(s);
            if (p <= sigma) return detail::ipow(gv, p);
            return detail::ipow(gv, sigma) * detail::ipow(h(s), p - sigma);
        };
    }
    if (leader) {
        // free-end reflection only
        return [g, h, sigma, n, p](Complex s) {
            const Complex gv = g(s), hv = h(s);
            if (p <= sigma)
                return detail::ipow(gv, p) + detail::ipow(gv, 2 * sigma + 1 - p) * detail::ipow(hv, 2 * (n - sigma));
            return detail::ipow(gv, sigma) * detail::ipow(hv, p - sigma) +
                   detail::ipow(gv, sigma) * detail::ipow(hv, 2 * n + 1 - sigma - p);
        };
    }
    // reflections at both ends feed a geometric series
    return [g, h, sigma, n, p](Complex s) {
        const Complex gv = g(s), hv = h(s);
        const Complex den = 1.0 + detail::ipow(gv, 2 * sigma + 1) * detail::ipow(hv, 2 * (n - sigma));
        if (p <= sigma)
            return (detail::ipow(gv, p) + detail::ipow(gv, 2 * sigma + 1 - p) * detail::ipow(hv, 2 * (n - sigma))) / den;
        return (detail::ipow(gv, sigma) * detail::ipow(hv, p - sigma) +
                detail::ipow(gv, sigma) * detail::ipow(hv, 2 * n - sigma - p + 1)) /
               den;
    };
}

// ---------------------------------------------------------------------------
// Direct per-frequency solution of the chain equations with absorber laws in
// the loop. Independent of both the closed forms and the state-space path:
// it solves the N coupled agent equations as written.
// ---------------------------------------------------------------------------

enum class PrefilterMode { exact, fir };

/// X(s) for X_ref = 1 at a single point s. Laws enter through their
/// prefilters, either evaluated exactly or read off their FIR kernels.
inline Eigen::VectorXcd chain_solve_at(const ChainSpec& chain, const std::vector<RealizedLaw>& laws, Complex s,
                                       PrefilterMode mode) {
    const int n = chain.n();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);

    std::vector<Complex> mf(static_cast<size_t>(n)), mr(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        mf[static_cast<size_t>(i - 1)] = chain.agent(i).mf()(s);
        mr[static_cast<size_t>(i - 1)] = i < n ? chain.agent(i).mr()(s) : Complex(0.0, 0.0);
    }

    for (int i = 1; i <= n; ++i) {
        const Complex f = mf[static_cast<size_t>(i - 1)], r = mr[static_cast<size_t>(i - 1)];
        A(i - 1, i - 1) = 1.0 + f + (i < n ? r : Complex(0.0, 0.0));
        if (i > 1) A(i - 1, i - 2) -= f;
        if (i < n) A(i - 1, i) -= r;
    }

    bool leader_law = false;
    for (const auto& rl : laws) {
        const int i = rl.law.channel.agent;
        const Complex gain = rl.law.channel.side == Side::front ? mf[static_cast<size_t>(i - 1)] : mr[static_cast<size_t>(i - 1)];
        if (rl.law.channel.agent == 1 && rl.law.channel.side == Side::front) leader_law = true;
        for (size_t t = 0; t < rl.law.terms.size(); ++t) {
            const auto& term = rl.law.terms[t];
            const Complex block = mode == PrefilterMode::exact ? term.block(s) : rl.kernels[t].eval(s);
            if (term.tap.is_reference)
                b(i - 1) += gain * block;
            else
                A(i - 1, term.tap.agent - 1) -= gain * block;
        }
    }
    if (!leader_law) b(0) += mf[0];  // plain reference entry through the front of agent 1

    return A.partialPivLu().solve(b);
}

inline Eigen::MatrixXcd chain_freq_solve(const ChainSpec& chain, const std::vector<RealizedLaw>& laws,
                                         const FreqGrid& grid, PrefilterMode mode) {
    Eigen::MatrixXcd out(grid.size(), chain.n());
    for (int k = 0; k < grid.size(); ++k)
        out.row(k) = chain_solve_at(chain, laws, Complex(0.0, grid.omegas[static_cast<size_t>(k)]), mode).transpose();
    return out;
}

/// Laws with empty kernel slots for exact-mode frequency work.
inline std::vector<RealizedLaw> unrealized(const std::vector<AbsorberLaw>& laws) {
    std::vector<RealizedLaw> out;
    out.reserve(laws.size());
    for (const auto& l : laws) out.push_back({l, {}});
    return out;
}

/// Reference-to-agent frequency response: exact rational interconnection
/// when no absorbers are declared, closed wave forms otherwise.
inline FreqResponse closed_loop_tf(const ChainSpec& chain, int agent, const FreqGrid& grid) {
    FreqResponse fr;
    fr.grid = grid;
    fr.values.resize(grid.size(), 1);
    if (chain.absorbers.empty()) {
        const AssembledChain ac = assemble_chain(chain);
        for (int k = 0; k < grid.size(); ++k)
            fr.values(k, 0) = ac.ss.eval(Complex(0.0, grid.omegas[static_cast<size_t>(k)]))(agent - 1, 0);
    } else {
        const LaplaceFn f = closed_form_chain(chain, agent);
        for (int k = 0; k < grid.size(); ++k) fr.values(k, 0) = f(Complex(0.0, grid.omegas[static_cast<size_t>(k)]));
    }
    return fr;
}

}  // namespace wavechain
