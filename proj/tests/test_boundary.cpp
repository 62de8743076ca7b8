#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_models.hpp"
#include "wavechain/boundary.hpp"

using namespace wavechain;
using Catch::Approx;

namespace {

std::vector<Complex> imaginary_axis(const FreqGrid& g) {
    std::vector<Complex> s;
    for (double w : g.omegas) s.emplace_back(0.0, w);
    return s;
}

}  // namespace

TEST_CASE("soft interface with identical sides only transmits", "[boundary]") {
    const WaveTf g(testmodels::m1());
    for (double w : {0.01, 0.4, 5.0}) {
        const Complex gv = g(Complex(0, w));
        const SoftBtfValues v = soft_btf_values(gv, gv);
        CHECK(std::abs(v.tab) < 1e-12);
        CHECK(std::abs(v.tba) < 1e-12);
        CHECK(std::abs(v.taa - gv) < 1e-12);
        CHECK(std::abs(v.tbb - gv) < 1e-12);
    }
}

TEST_CASE("soft interface against a dead side", "[boundary]") {
    const WaveTf h(testmodels::m2());
    for (double w : {0.05, 1.0}) {
        const Complex hv = h(Complex(0, w));
        const SoftBtfValues v = soft_btf_values(Complex(0, 0), hv);
        CHECK(std::abs(v.taa - hv) < 1e-12);
        CHECK(std::abs(v.tba + hv * hv) < 1e-12);
        CHECK(std::abs(v.tbb) < 1e-12);
        CHECK(std::abs(v.tab) < 1e-12);
    }
}

TEST_CASE("hard interface degenerate cases", "[boundary]") {
    const WaveTf g(testmodels::m1());
    for (double w : {0.05, 1.0}) {
        const Complex gv = g(Complex(0, w));
        // dead rear side: both transmissions collapse to g
        const HardBtfValues free_end = hard_btf_values(gv, Complex(0, 0));
        CHECK(std::abs(free_end.tAA - gv) < 1e-12);
        CHECK(std::abs(free_end.tBB - gv) < 1e-12);
        CHECK(std::abs(free_end.tAB) < 1e-12);
        CHECK(std::abs(free_end.tBA) < 1e-12);
        // identical sides: transparent agent
        const HardBtfValues same = hard_btf_values(gv, gv);
        CHECK(std::abs(same.tAA - 1.0) < 1e-12);
        CHECK(std::abs(same.tBB - 1.0) < 1e-12);
        CHECK(std::abs(same.tAB) < 1e-12);
    }
}

TEST_CASE("hard transmissions always sum to two", "[boundary][property]") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const WaveTf g(testmodels::random_stable_open_loop(rng, 1 + trial % 2));
        const WaveTf h(testmodels::random_stable_open_loop(rng, 1 + (trial + 1) % 2));
        for (Complex s : imaginary_axis(FreqGrid::log_spaced(64, 1e-3, 1e3))) {
            const HardBtfValues v = hard_btf_values(g(s), h(s));
            CHECK(std::abs(v.tAA + v.tBB - 2.0) < 1e-9);
            CHECK(std::abs(v.tAB + v.tBA) < 1e-9);
        }
    }
}

TEST_CASE("soft and hard responses are tied pointwise", "[boundary][property]") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        const WaveTf g(testmodels::random_stable_open_loop(rng, 1 + trial % 2));
        const WaveTf h(testmodels::random_stable_open_loop(rng, 2 - trial % 2));
        for (Complex s : imaginary_axis(FreqGrid::log_spaced(64, 1e-3, 1e3))) {
            const Complex gv = g(s), hv = h(s);
            const SoftBtfValues sv = soft_btf_values(gv, hv);
            const HardBtfValues hvv = hard_btf_values(gv, hv);
            const double scale = 1.0 + std::abs(hvv.tAA) + std::abs(hvv.tBB);
            CHECK(std::abs(sv.taa - (hvv.tBB + gv - 1.0)) < 1e-9 * scale);
            CHECK(std::abs(sv.tba - hv * hvv.tAB) < 1e-9 * scale);
            CHECK(std::abs(sv.tbb - (hvv.tAA + hv - 1.0)) < 1e-9 * scale);
            CHECK(std::abs(sv.tab - gv * hvv.tBA) < 1e-9 * scale);
            CHECK(std::abs(hvv.tAA - (1.0 + hvv.tAB)) < 1e-9 * scale);
            CHECK(std::abs(hvv.tBB - (1.0 + hvv.tBA)) < 1e-9 * scale);
        }
    }
}

TEST_CASE("grid sets sample the interface responses", "[boundary]") {
    const WaveTf g(testmodels::m1()), h(testmodels::m2());
    const FreqGrid grid = FreqGrid::log_spaced(128, 1e-3, 1e3);
    const BoundaryTfSet soft = soft_btfs(g, h, grid);
    CHECK(soft.masked.empty());
    const BoundaryTfSet hard = hard_btfs(g, h, grid);
    for (int i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(soft.t_transmit_fwd[static_cast<size_t>(i)] -
                       (hard.t_transmit_bwd[static_cast<size_t>(i)] +
                        g(Complex(0, grid.omegas[static_cast<size_t>(i)])) - 1.0)) < 1e-9);
    }
}

TEST_CASE("split gains of a symmetric agent", "[boundary]") {
    const RationalTf m = testmodels::m1();
    const Complex s(0, 0.7);
    const auto [tl, tr] = tl_tr_of(m, m, s);
    const Complex expect = m(s) / (1.0 + 2.0 * m(s));
    CHECK(std::abs(tl - expect) < 1e-12);
    CHECK(std::abs(tr - expect) < 1e-12);
}

TEST_CASE("split gains vanish with the rear loop", "[boundary]") {
    const auto [tl, tr] = tl_tr_of(testmodels::m1(), RationalTf{{0}, {1}}, Complex(0, 0.3));
    CHECK(std::abs(tr) < 1e-15);
    CHECK(std::abs(tl) > 0.0);
}

TEST_CASE("hard responses satisfy the split-gain balance", "[boundary][oracle]") {
    // Reconstruct the four wave components from the transmitted/reflected
    // responses and check they balance the single-agent relation
    // A_L(1 - T_L/G) + B_L(1 - T_L*G) = B_R*T_R/H + A_R*T_R*H.
    const RationalTf mf = testmodels::m1(), mr = testmodels::m2();
    const WaveTf g(mf), h(mr);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> logw(-2, 2), amp(-1, 1);
    for (int k = 0; k < 50; ++k) {
        const Complex s(0.0, std::pow(10.0, logw(rng)));
        const Complex gv = g(s), hv = h(s);
        const HardBtfValues v = hard_btf_values(gv, hv);
        const auto [tl, tr] = tl_tr_of(mf, mr, s);
        const Complex al(1.0, 0.0);
        const Complex br(amp(rng), amp(rng));
        const Complex ar = v.tAA * al + v.tBA * br;
        const Complex bl = v.tAB * al + v.tBB * br;
        const Complex lhs = al * (1.0 - tl / gv) + bl * (1.0 - tl * gv);
        const Complex rhs = br * tr / hv + ar * tr * hv;
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs)));
    }
}
