#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wavechain/chain.hpp"
#include "wavechain/errors.hpp"
#include "wavechain/fir.hpp"
#include "wavechain/wave_tf.hpp"

namespace wavechain {

// ---------------------------------------------------------------------------
// Wave-absorbing feedback laws.
//
// Each law injects into one agent channel a filtered combination of agent
// outputs (and possibly the raw reference). The filters are irrational in
// the wave transfer functions; they are evaluated exactly for frequency-
// domain work and realized as FIR kernels for time simulation.
// ---------------------------------------------------------------------------

struct LawTap {
    bool is_reference = false;
    int agent = 0;  // 1-based, used when is_reference == false

    static LawTap reference() { return {true, 0}; }
    static LawTap output(int agent) { return {false, agent}; }
};

struct LawTerm {
    LawTap tap;
    LaplaceFn block;
    std::string note;
};

struct AbsorberLaw {
    InjectionChannel channel;
    std::vector<LawTerm> terms;
    std::string name;

    Complex eval_on(Complex s, const std::function<Complex(const LawTap&)>& tap_value) const {
        Complex acc(0.0, 0.0);
        for (const auto& t : terms) acc += t.block(s) * tap_value(t.tap);
        return acc;
    }
};

/// Incident-wave estimate at the first agent turned into a feed: the front
/// input becomes G*X_1 + (1 - G^2)*X_ref, which swallows the returning wave
/// while preserving the reference at DC (G(0) = 1).
inline AbsorberLaw leader_absorber(const WaveTf& g) {
    AbsorberLaw law;
    law.channel = {1, Side::front};
    law.name = "leader";
    law.terms.push_back({LawTap::output(1), [g](Complex s) { return g(s); }, "G on X_1"});
    law.terms.push_back({LawTap::reference(), [g](Complex s) { const Complex v = g(s); return 1.0 - v * v; }, "1 - G^2 on ref"});
    return law;
}

/// Rear-end counterpart: cancels the free-end reflection of the last agent
/// so the chain ends as if it continued forever.
inline AbsorberLaw rear_absorber(const WaveTf& g, int n) {
    AbsorberLaw law;
    law.channel = {n, Side::front};
    law.name = "rear";
    law.terms.push_back({LawTap::output(n - 1), [g](Complex s) { const Complex v = g(s); return -v / (1.0 + v); }, "-G/(1+G) on X_{N-1}"});
    law.terms.push_back({LawTap::output(n), [g](Complex s) { const Complex v = g(s); return v * v / (1.0 + v); }, "G^2/(1+G) on X_N"});
    return law;
}

/// Pair of laws around a soft interface at sigma: the left one removes the
/// reflection of forward-travelling waves, the right one of backward ones.
/// The prefilter gain is (G - H) applied to the incident-wave estimate
/// G/(1 - G^2) * (X_{sigma-1} - G*X_sigma), and mirrored on the right side.
inline std::pair<AbsorberLaw, AbsorberLaw> soft_absorber_pair(const WaveTf& g, const WaveTf& h, int sigma) {
    AbsorberLaw left;
    left.channel = {sigma, Side::rear};
    left.name = "soft-left@" + std::to_string(sigma);
    left.terms.push_back({LawTap::output(sigma - 1),
                          [g, h](Complex s) {
                              const Complex gv = g(s), hv = h(s);
                              return gv * (gv - hv) / (1.0 - gv * gv);
                          },
                          "G(G-H)/(1-G^2) on X_{sigma-1}"});
    left.terms.push_back({LawTap::output(sigma),
                          [g, h](Complex s) {
                              const Complex gv = g(s), hv = h(s);
                              return -gv * gv * (gv - hv) / (1.0 - gv * gv);
                          },
                          "-G^2(G-H)/(1-G^2) on X_sigma"});

    AbsorberLaw right;
    right.channel = {sigma + 1, Side::front};
    right.name = "soft-right@" + std::to_string(sigma);
    right.terms.push_back({LawTap::output(sigma + 1),
                           [g, h](Complex s) {
                               const Complex gv = g(s), hv = h(s);
                               return hv * (hv - gv) / (1.0 - hv * hv);
                           },
                           "H(H-G)/(1-H^2) on X_{sigma+1}"});
    right.terms.push_back({LawTap::output(sigma),
                           [g, h](Complex s) {
                               const Complex gv = g(s), hv = h(s);
                               return -hv * hv * (hv - gv) / (1.0 - hv * hv);
                           },
                           "-H^2(H-G)/(1-H^2) on X_sigma"});
    return {std::move(left), std::move(right)};
}

/// Both-side laws for a hard interface at eta; together they make the agent
/// transparent: the transmitted components coincide on both sides.
inline std::pair<AbsorberLaw, AbsorberLaw> hard_absorber_pair(const WaveTf& g, const WaveTf& h, int eta) {
    AbsorberLaw left;
    left.channel = {eta, Side::front};
    left.name = "hard-left@" + std::to_string(eta);
    left.terms.push_back({LawTap::output(eta - 1),
                          [g, h](Complex s) {
                              const Complex gv = g(s), hv = h(s);
                              return (hv - gv) / ((1.0 + gv) * (1.0 - hv));
                          },
                          "(H-G)/((1+G)(1-H)) on X_{eta-1}"});
    left.terms.push_back({LawTap::output(eta),
                          [g, h](Complex s) {
                              const Complex gv = g(s), hv = h(s);
                              return -gv * (hv - gv) / ((1.0 + gv) * (1.0 - hv));
                          },
                          "-G(H-G)/((1+G)(1-H)) on X_eta"});

    AbsorberLaw right;
    right.channel = {eta, Side::rear};
    right.name = "hard-right@" + std::to_string(eta);
    right.terms.push_back({LawTap::output(eta + 1),
                           [g, h](Complex s) {
                               const Complex gv = g(s), hv = h(s);
                               return (gv - hv) / ((1.0 + hv) * (1.0 - gv));
                           },
                           "(G-H)/((1+H)(1-G)) on X_{eta+1}"});
    right.terms.push_back({LawTap::output(eta),
                           [g, h](Complex s) {
                               const Complex gv = g(s), hv = h(s);
                               return -hv * (gv - hv) / ((1.0 + hv) * (1.0 - gv));
                           },
                           "-H(G-H)/((1+H)(1-G)) on X_eta"});
    return {std::move(left), std::move(right)};
}

/// Expand the chain's absorber placements into laws, validating each site
/// against the detected boundaries. neighbor_model_scale != 1 perturbs the
/// model of the opposite side used in the synthesis (robustness probing).
inline std::vector<AbsorberLaw> synthesize_absorbers(const ChainSpec& chain) {
    const int n = chain.n();
    const auto boundaries = detect_boundaries(chain);
    const auto segments = chain_segments(chain);
    const double scale = chain.neighbor_model_scale;

    auto has_boundary = [&](BoundaryKind kind, int index) {
        for (const auto& b : boundaries)
            if (b.kind == kind && b.index == index) return true;
        return false;
    };
    auto segment_model = [&](int agent) -> RationalTf {
        const Segment* s = segment_of(segments, agent);
        if (!s) throw ValidationError("agent " + std::to_string(agent) + " sits on a hard interface; no segment model");
        return s->model;
    };

    std::vector<AbsorberLaw> laws;
    for (const auto& p : chain.absorbers) {
        switch (p.kind) {
            case AbsorberPlacement::Kind::leader:
                laws.push_back(leader_absorber(WaveTf(segment_model(1))));
                break;
            case AbsorberPlacement::Kind::rear:
                laws.push_back(rear_absorber(WaveTf(segment_model(n)), n));
                break;
            case AbsorberPlacement::Kind::soft_pair:
            case AbsorberPlacement::Kind::soft_left:
            case AbsorberPlacement::Kind::soft_right: {
                const int sigma = p.index;
                const bool homogeneous_site = sigma >= 1 && sigma < n && !has_boundary(BoundaryKind::soft, sigma);
                if (homogeneous_site)
                    throw ValidationError("soft absorber declared at sigma = " + std::to_string(sigma) +
                                          " but the interface there is homogeneous");
                if (sigma < 1 || sigma >= n)
                    throw ValidationError("soft absorber site out of range: " + std::to_string(sigma));
                const WaveTf g_own(segment_model(sigma));
                const WaveTf h_own(segment_model(sigma + 1));
                const WaveTf g_seen(segment_model(sigma) * scale);
                const WaveTf h_seen(segment_model(sigma + 1) * scale);
                auto [left, right] = soft_absorber_pair(g_own, h_seen, sigma);
                auto [left2, right2] = soft_absorber_pair(g_seen, h_own, sigma);
                if (p.kind != AbsorberPlacement::Kind::soft_right) laws.push_back(left);
                if (p.kind != AbsorberPlacement::Kind::soft_left) laws.push_back(right2);
                break;
            }
            case AbsorberPlacement::Kind::hard_pair: {
                const int eta = p.index;
                if (!has_boundary(BoundaryKind::hard, eta))
                    throw ValidationError("hard absorber declared at eta = " + std::to_string(eta) +
                                          " but agent dynamics there are symmetric");
                const WaveTf g_own(chain.agent(eta).mf());
                const WaveTf h_own(chain.agent(eta).mr());
                const WaveTf g_seen(chain.agent(eta).mf() * scale);
                const WaveTf h_seen(chain.agent(eta).mr() * scale);
                auto [left, right] = hard_absorber_pair(g_own, h_seen, eta);
                auto [left2, right2] = hard_absorber_pair(g_seen, h_own, eta);
                laws.push_back(left);
                laws.push_back(right2);
                break;
            }
        }
    }
    return laws;
}

/// FIR realizations of the law prefilters, parallel to law.terms.
struct RealizedLaw {
    AbsorberLaw law;
    std::vector<FirKernel> kernels;
};

inline std::vector<RealizedLaw> realize_laws(const std::vector<AbsorberLaw>& laws, double dt, double horizon,
                                             FirOptions opt = {}) {
    std::vector<RealizedLaw> out;
    out.reserve(laws.size());
    for (const auto& law : laws) {
        RealizedLaw r{law, {}};
        for (const auto& term : law.terms) r.kernels.push_back(make_fir_kernel(term.block, dt, horizon, opt));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace wavechain
