#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_models.hpp"
#include "wavechain/boundary.hpp"

using namespace wavechain;
using Catch::Approx;

TEST_CASE("study interface gains in closed form", "[dc_gains]") {
    const DcGainRecord r = soft_dc_gains(testmodels::m1(), testmodels::m2(1.0));
    CHECK(r.nu_left == 2);
    CHECK(r.nu_right == 2);
    CHECK(r.limit_left == Approx(1.0));
    CHECK(r.limit_right == Approx(1.0 / 3.0));
    CHECK(r.kaa == Approx(2.0 / (std::sqrt(3.0) + 1.0)).epsilon(1e-12));
    CHECK(r.kaa == Approx(0.7320508).epsilon(1e-6));
    CHECK(r.kab == Approx(r.kaa - 1.0));
    CHECK(r.kab < 0.0);  // reflection flips sign here
}

TEST_CASE("closed form against the numeric limit of the transmission", "[dc_gains][oracle]") {
    const RationalTf left = testmodels::m1(), right = testmodels::m2(1.0);
    const WaveTf g(left), h(right);
    const DcGainRecord r = soft_dc_gains(left, right);
    const auto taa = [&](Complex s) { return soft_btf_values(g(s), h(s)).taa; };
    const double numeric = numeric_dc_limit(taa, std::min(r.nu_left, r.nu_right));
    CHECK(std::abs(numeric - r.kaa) < 1e-4);
    const auto tab = [&](Complex s) { return soft_btf_values(g(s), h(s)).tab; };
    CHECK(std::abs(numeric_dc_limit(tab, 2) - r.kab) < 1e-4);
}

TEST_CASE("unequal integrator counts polarize the gains", "[dc_gains]") {
    // right side has fewer integrators than the left: nothing transmits at DC
    const RationalTf left{{1}, {0, 0, 1, 1}};   // 1/(s^2(s+1)), nu = 2
    const RationalTf right{{1}, {0, 1, 1}};     // 1/(s(s+1)),  nu = 1
    const DcGainRecord r = boundary_dc_gains(left, right);
    CHECK(r.kaa == 0.0);
    CHECK(r.kbb == 2.0);
    const DcGainRecord flipped = boundary_dc_gains(right, left);
    CHECK(flipped.kaa == 2.0);
    CHECK(flipped.kbb == 0.0);
}

TEST_CASE("identical models make the interface invisible", "[dc_gains]") {
    const DcGainRecord r = soft_dc_gains(testmodels::m1(), testmodels::m1());
    CHECK(r.kaa == Approx(1.0));
    CHECK(r.kbb == Approx(1.0));
    CHECK(r.kab == Approx(0.0).margin(1e-15));
}

TEST_CASE("gain identities and bounds for random pairs", "[dc_gains][property]") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const int nu_l = 1 + (trial % 2), nu_r = 1 + ((trial / 2) % 2);
        const RationalTf left = testmodels::random_stable_open_loop(rng, nu_l);
        const RationalTf right = testmodels::random_stable_open_loop(rng, nu_r);
        const DcGainRecord r = boundary_dc_gains(left, right);
        CHECK(r.kaa + r.kbb == Approx(2.0).margin(1e-9));
        CHECK(r.kab + r.kba == Approx(0.0).margin(1e-9));
        CHECK(r.kaa - r.kab == Approx(1.0).margin(1e-9));
        CHECK(r.kbb - r.kba == Approx(1.0).margin(1e-9));
        CHECK(r.kAA == r.kbb);
        CHECK(r.kBB == r.kaa);
        CHECK(r.kAB == r.kba);
        CHECK(r.kBA == r.kab);
        for (double k : {r.kab, r.kba, r.kAB, r.kBA}) {
            CHECK(k >= -1.0 - 1e-12);
            CHECK(k <= 1.0 + 1e-12);
        }
        for (double k : {r.kaa, r.kbb, r.kAA, r.kBB}) {
            CHECK(k >= -1e-12);
            CHECK(k <= 2.0 + 1e-12);
        }
    }
}

TEST_CASE("missing integrators are rejected", "[dc_gains]") {
    CHECK_THROWS_AS(boundary_dc_gains(RationalTf{{1, 1}, {2, 1}}, testmodels::m1()), NoIntegrator);
}

TEST_CASE("numeric limit needs the stabilized branch evaluation", "[dc_gains]") {
    // the transmission at s = 1e-8 sits deep in the cancellation zone of the
    // naive alpha^2 - 4 formula; the record and the limit must still agree
    const WaveTf g(testmodels::m2(4.0)), h(testmodels::m2(0.5));
    const DcGainRecord r = boundary_dc_gains(testmodels::m2(4.0), testmodels::m2(0.5));
    const auto taa = [&](Complex s) { return soft_btf_values(g(s), h(s)).taa; };
    CHECK(std::abs(numeric_dc_limit(taa, 2) - r.kaa) < 1e-4);
}
