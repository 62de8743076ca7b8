#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_models.hpp"
#include "wavechain/wave_tf.hpp"

using namespace wavechain;
using Catch::Approx;

TEST_CASE("alpha of a constant open loop", "[wave_tf]") {
    const RationalTf m = RationalTf::constant(1.0);
    CHECK(alpha_of(m, Complex(0.7, 2.0)) == Complex(3.0, 0.0));
}

TEST_CASE("alpha by hand at s = j", "[wave_tf]") {
    const Complex j(0, 1);
    // 2 + s^2 (s+4) / (4s+4) evaluated independently
    const Complex expect = 2.0 + (j * j) * (j + 4.0) / (4.0 * j + 4.0);
    CHECK(std::abs(alpha_of(testmodels::m1(), j) - expect) < 1e-14);
}

TEST_CASE("alpha tends to 2 towards DC with integrators", "[wave_tf]") {
    CHECK(std::abs(alpha_of(testmodels::m1(), Complex(1e-6, 0)) - 2.0) < 1e-10);
}

TEST_CASE("alpha rejects zeros of M", "[wave_tf]") {
    CHECK_THROWS_AS(alpha_of(testmodels::m1(), Complex(-1.0, 0.0)), ZeroOfM);
}

TEST_CASE("contractive branch and defining identity", "[wave_tf][property]") {
    const WaveTf g(testmodels::m1());
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> logw(-3, 3);
    for (int k = 0; k < 100; ++k) {
        const Complex s(0.0, std::pow(10.0, logw(rng)));
        const Complex gv = g(s);
        const Complex a = g.alpha(s);
        CHECK(std::abs(gv) <= 1.0 + 1e-9);
        // defining identity G + 1/G = alpha
        CHECK(std::abs(gv + 1.0 / gv - a) < 1e-9 * (1.0 + std::abs(a)));
        // quadratic residual
        CHECK(std::abs(gv * gv - a * gv + 1.0) <= 1e-9 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("branch stays contractive off the axis", "[wave_tf][property]") {
    const WaveTf g(testmodels::m2());
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> re(0.01, 3.0), logw(-2, 2);
    for (int k = 0; k < 100; ++k) {
        const Complex s(re(rng), std::pow(10.0, logw(rng)));
        CHECK(std::abs(g(s)) <= 1.0 + 1e-9);
        CHECK(std::abs(g(s) * g.inverse(s) - 1.0) < 1e-9);
    }
}

TEST_CASE("limits of the wave transfer", "[wave_tf]") {
    const WaveTf g(testmodels::m1());
    // two integrators keep the DC gain at one
    CHECK(g.dc_gain() == 1.0);
    CHECK(std::abs(g(Complex(1e-8, 0)) - 1.0) < 1e-3);
    // high frequency: M -> 0 forces G -> 0
    CHECK(std::abs(g(Complex(0, 1e5))) < 1e-4);
    // precision near the branch point: G ~ 1 - s for this model
    const Complex near = g(Complex(1e-8, 0));
    CHECK(std::abs(near - (1.0 - 1e-8)) < 1e-12);
}

TEST_CASE("DC gain without an integrator solves the quadratic", "[wave_tf]") {
    const WaveTf g(RationalTf::constant(1.0));
    // smaller root of G^2 - 3G + 1 = 0
    CHECK(g.dc_gain() == Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-7));
}

TEST_CASE("wavefront delay per hop", "[wave_tf]") {
    CHECK(WaveTf(testmodels::m1()).front_delay() == Approx(1.0).epsilon(1e-3));
    CHECK(WaveTf(testmodels::m2(1.0)).front_delay() == Approx(std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("grid evaluation applies continuity at magnitude ties", "[wave_tf]") {
    const WaveTf g(testmodels::m1());
    std::vector<Complex> path;
    for (int i = 0; i < 200; ++i) path.emplace_back(0.0, 1e-3 * std::pow(10.0, 6.0 * i / 199.0));
    const auto vals = g.eval_grid(path);
    for (size_t i = 1; i < vals.size(); ++i) CHECK(std::abs(vals[i] - vals[i - 1]) < 0.2);
}
