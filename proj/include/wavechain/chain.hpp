#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wavechain/boundary.hpp"
#include "wavechain/errors.hpp"
#include "wavechain/rational.hpp"
#include "wavechain/state_space.hpp"
#include "wavechain/wave_tf.hpp"

namespace wavechain {

// ---------------------------------------------------------------------------
// Agent and chain description. Agent indices are 1-based throughout the
// public surface, matching the math; the first agent is driven through its
// front channel by the reference, the last agent has no rear coupling.
// ---------------------------------------------------------------------------

struct AgentSpec {
    RationalTf plant = RationalTf::identity();
    RationalTf cf;  // front controller
    RationalTf cr;  // rear controller (unused on the last agent)
    bool split = false;  // true when the plant/controller factorization is physical

    RationalTf mf() const { return plant * cf; }
    RationalTf mr() const { return plant * cr; }

    static AgentSpec from_open_loops(RationalTf mf, RationalTf mr) {
        AgentSpec a;
        a.plant = RationalTf::identity();
        a.cf = std::move(mf);
        a.cr = std::move(mr);
        a.split = false;
        return a;
    }

    static AgentSpec from_controllers(RationalTf plant, RationalTf cf, RationalTf cr) {
        AgentSpec a;
        a.plant = std::move(plant);
        a.cf = std::move(cf);
        a.cr = std::move(cr);
        a.split = true;
        return a;
    }
};

struct AbsorberPlacement {
    enum class Kind { leader, rear, soft_pair, soft_left, soft_right, hard_pair };
    Kind kind = Kind::leader;
    int index = 0;  // sigma for soft (interface between index and index+1), eta for hard
};

struct ReferenceSignal {
    enum class Type { step, ramp, custom };
    Type type = Type::step;
    double amplitude = 1.0;
    std::vector<double> custom;  // used when type == custom, sampled at the run dt

    double value(int k, double dt) const {
        switch (type) {
            case Type::step: return amplitude;
            case Type::ramp: return amplitude * dt * k;
            case Type::custom: return k < static_cast<int>(custom.size()) ? custom[static_cast<size_t>(k)] : (custom.empty() ? 0.0 : custom.back());
        }
        return 0.0;
    }
};

enum class HardLawForm { relative, printed };

struct ChainSpec {
    std::vector<AgentSpec> agents;
    std::vector<AbsorberPlacement> absorbers;
    ReferenceSignal reference;
    HardLawForm hard_law_form = HardLawForm::relative;
    double neighbor_model_scale = 1.0;  // perturbs the neighbour model used in synthesis

    int n() const { return static_cast<int>(agents.size()); }
    const AgentSpec& agent(int i) const { return agents[static_cast<size_t>(i - 1)]; }
};

struct BoundaryLocation {
    BoundaryKind kind = BoundaryKind::soft;
    int index = 0;  // soft: between index and index+1; hard: at index
};

inline std::vector<BoundaryLocation> detect_boundaries(const ChainSpec& chain) {
    std::vector<BoundaryLocation> out;
    const int n = chain.n();
    for (int sigma = 1; sigma <= n - 1; ++sigma)
        if (!tf_equal(chain.agent(sigma).mr(), chain.agent(sigma + 1).mf()))
            out.push_back({BoundaryKind::soft, sigma});
    for (int eta = 2; eta <= n - 1; ++eta)
        if (!tf_equal(chain.agent(eta).mf(), chain.agent(eta).mr())) out.push_back({BoundaryKind::hard, eta});
    return out;
}

/// Adjacent soft and hard sites make a combined interface, which this
/// toolbox deliberately does not model; flag them.
inline std::vector<std::string> boundary_diagnostics(const std::vector<BoundaryLocation>& boundaries) {
    std::vector<std::string> out;
    for (const auto& hb : boundaries) {
        if (hb.kind != BoundaryKind::hard) continue;
        for (const auto& sb : boundaries) {
            if (sb.kind != BoundaryKind::soft) continue;
            if (sb.index == hb.index || sb.index == hb.index - 1)
                out.push_back("combined boundary around agent " + std::to_string(hb.index) +
                              " (soft at " + std::to_string(sb.index) + "); responses for this case are not modelled");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Homogeneous segments; each carries the wave transfer function its agents
// share. Hard-boundary agents separate segments and belong to none.
// ---------------------------------------------------------------------------

struct Segment {
    int first = 0, last = 0;  // 1-based inclusive
    RationalTf model;
};

inline std::vector<Segment> chain_segments(const ChainSpec& chain) {
    const int n = chain.n();
    std::vector<Segment> segs;
    auto model_of = [&](int i) -> std::optional<RationalTf> {
        const AgentSpec& a = chain.agent(i);
        if (i == n) return a.mf();  // no rear coupling on the last agent
        if (tf_equal(a.mf(), a.mr())) return a.mf();
        return std::nullopt;  // hard-boundary agent
    };
    for (int i = 1; i <= n; ++i) {
        auto m = model_of(i);
        if (!m) continue;
        if (!segs.empty() && segs.back().last == i - 1 && tf_equal(segs.back().model, *m))
            segs.back().last = i;
        else
            segs.push_back({i, i, *m});
    }
    return segs;
}

inline const Segment* segment_of(const std::vector<Segment>& segs, int agent) {
    for (const auto& s : segs)
        if (agent >= s.first && agent <= s.last) return &s;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Exact interconnection into one state-space realization
// ---------------------------------------------------------------------------

enum class Side { front, rear };

struct InjectionChannel {
    int agent = 1;
    Side side = Side::front;
    bool operator==(const InjectionChannel&) const = default;
};

/// One realization of the whole chain. Input 0 is the front channel of the
/// first agent (the reference enters there); further inputs are the
/// requested injection channels. Outputs are X_1..X_N then U_1..U_N.
struct AssembledChain {
    StateSpace ss;
    std::vector<InjectionChannel> channels;
    int n_agents = 0;
};

namespace detail {

struct SignalExpr {
    Eigen::RowVectorXd base;   // coefficients over [states; inputs]
    Eigen::RowVectorXd on_x;   // coefficients over the agent outputs X
};

}  // namespace detail

inline AssembledChain assemble_chain(const ChainSpec& chain, std::vector<InjectionChannel> extra_channels = {},
                                     const std::set<int>& printed_front_agents = {}) {
    const int n = chain.n();
    if (n < 1) throw ValidationError("chain must contain at least one agent");

    std::vector<InjectionChannel> channels{{1, Side::front}};
    for (const auto& ch : extra_channels) {
        if (ch.agent < 1 || ch.agent > n) throw ValidationError("injection channel outside the chain");
        if (ch.agent == n && ch.side == Side::rear)
            throw ValidationError("the last agent has no rear coupling to inject into");
        bool dup = false;
        for (const auto& c : channels) dup = dup || c == ch;
        if (!dup) channels.push_back(ch);
    }
    const int m = static_cast<int>(channels.size());
    auto channel_index = [&](int agent, Side side) -> int {
        for (int c = 0; c < m; ++c)
            if (channels[static_cast<size_t>(c)].agent == agent && channels[static_cast<size_t>(c)].side == side) return c;
        return -1;
    };

    // Realize the blocks and lay out the global state.
    struct Block {
        StateSpace ss;
        int x0 = 0;
    };
    std::vector<Block> plants(static_cast<size_t>(n)), fronts(static_cast<size_t>(n)), rears(static_cast<size_t>(n));
    std::vector<bool> has_rear(static_cast<size_t>(n), false);
    int nx = 0;
    for (int i = 1; i <= n; ++i) {
        const AgentSpec& a = chain.agent(i);
        if (!a.mf().is_proper())
            throw ImproperTf("agent " + std::to_string(i) + ": front open loop is improper");
        if (i < n && !a.mr().is_proper())
            throw ImproperTf("agent " + std::to_string(i) + ": rear open loop is improper");
        auto realize = [&](const RationalTf& g, const char* what) {
            try {
                return to_state_space(g);
            } catch (const ImproperTf&) {
                throw ImproperTf("agent " + std::to_string(i) + ": " + what + " is improper");
            }
        };
        Block pb{realize(a.plant, "plant"), nx};
        nx += pb.ss.order();
        plants[static_cast<size_t>(i - 1)] = std::move(pb);
        Block fb{realize(a.cf, "front controller"), nx};
        nx += fb.ss.order();
        fronts[static_cast<size_t>(i - 1)] = std::move(fb);
        if (i < n) {
            Block rb{realize(a.cr, "rear controller"), nx};
            nx += rb.ss.order();
            rears[static_cast<size_t>(i - 1)] = std::move(rb);
            has_rear[static_cast<size_t>(i - 1)] = true;
        }
    }

    const int nb = nx + m;
    auto zero_expr = [&] {
        detail::SignalExpr e;
        e.base = Eigen::RowVectorXd::Zero(nb);
        e.on_x = Eigen::RowVectorXd::Zero(n);
        return e;
    };
    auto state_row = [&](const Block& b, const Eigen::RowVectorXd& c) {
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(nb);
        r.segment(b.x0, b.ss.order()) = c;
        return r;
    };

    // Controller inputs in terms of (states, inputs, X).
    std::vector<detail::SignalExpr> vf(static_cast<size_t>(n)), vr(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        detail::SignalExpr e = zero_expr();
        if (i > 1) e.on_x(i - 2) += 1.0;  // X_{i-1}
        e.on_x(i - 1) += printed_front_agents.count(i) ? 1.0 : -1.0;
        const int ch = channel_index(i, Side::front);
        if (ch >= 0) e.base(nx + ch) += 1.0;
        vf[static_cast<size_t>(i - 1)] = e;
        if (has_rear[static_cast<size_t>(i - 1)]) {
            detail::SignalExpr r = zero_expr();
            r.on_x(i) += 1.0;  // X_{i+1}
            r.on_x(i - 1) -= 1.0;
            const int chr = channel_index(i, Side::rear);
            if (chr >= 0) r.base(nx + chr) += 1.0;
            vr[static_cast<size_t>(i - 1)] = r;
        }
    }

    // Plant inputs U_i = front controller output + rear controller output.
    auto block_output = [&](const Block& b, const detail::SignalExpr& v) {
        detail::SignalExpr y;
        y.base = state_row(b, b.ss.C.row(0)) + b.ss.D(0, 0) * v.base;
        y.on_x = b.ss.D(0, 0) * v.on_x;
        return y;
    };
    std::vector<detail::SignalExpr> u_plant(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        detail::SignalExpr u = block_output(fronts[static_cast<size_t>(i - 1)], vf[static_cast<size_t>(i - 1)]);
        if (has_rear[static_cast<size_t>(i - 1)]) {
            const detail::SignalExpr yr = block_output(rears[static_cast<size_t>(i - 1)], vr[static_cast<size_t>(i - 1)]);
            u.base += yr.base;
            u.on_x += yr.on_x;
        }
        u_plant[static_cast<size_t>(i - 1)] = u;
    }

    // Agent outputs: X_i = Cp xi_p + Dp U_i, still entangled through X.
    Eigen::MatrixXd lambda(n, n), rhs(n, nb);
    for (int i = 1; i <= n; ++i) {
        const detail::SignalExpr x = block_output(plants[static_cast<size_t>(i - 1)], u_plant[static_cast<size_t>(i - 1)]);
        lambda.row(i - 1) = x.on_x;
        rhs.row(i - 1) = x.base;
    }
    Eigen::MatrixXd loop = Eigen::MatrixXd::Identity(n, n) - lambda;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(loop);
    if (!lu.isInvertible()) throw ValidationError("chain interconnection is not well posed (algebraic loop)");
    const Eigen::MatrixXd x_rows = lu.solve(rhs);  // (n x nb)

    auto reduce = [&](const detail::SignalExpr& e) -> Eigen::RowVectorXd { return e.base + e.on_x * x_rows; };

    // Assemble global dynamics.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nx, nx), B = Eigen::MatrixXd::Zero(nx, m);
    auto wire_block = [&](const Block& b, const Eigen::RowVectorXd& v_red) {
        const int o = b.ss.order();
        if (o == 0) return;
        A.block(b.x0, b.x0, o, o) += b.ss.A;
        A.block(b.x0, 0, o, nx) += b.ss.B * v_red.head(nx);
        B.block(b.x0, 0, o, m) += b.ss.B * v_red.tail(m);
    };
    std::vector<Eigen::RowVectorXd> u_red(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        wire_block(fronts[static_cast<size_t>(i - 1)], reduce(vf[static_cast<size_t>(i - 1)]));
        if (has_rear[static_cast<size_t>(i - 1)]) wire_block(rears[static_cast<size_t>(i - 1)], reduce(vr[static_cast<size_t>(i - 1)]));
        u_red[static_cast<size_t>(i - 1)] = reduce(u_plant[static_cast<size_t>(i - 1)]);
        wire_block(plants[static_cast<size_t>(i - 1)], u_red[static_cast<size_t>(i - 1)]);
    }

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * n, nx), D = Eigen::MatrixXd::Zero(2 * n, m);
    for (int i = 0; i < n; ++i) {
        C.row(i) = x_rows.row(i).head(nx);
        D.row(i) = x_rows.row(i).tail(m);
        C.row(n + i) = u_red[static_cast<size_t>(i)].head(nx);
        D.row(n + i) = u_red[static_cast<size_t>(i)].tail(m);
    }

    AssembledChain out;
    out.ss = StateSpace(std::move(A), std::move(B), std::move(C), std::move(D));
    out.channels = std::move(channels);
    out.n_agents = n;
    return out;
}

}  // namespace wavechain
