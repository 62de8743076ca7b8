#include <catch2/catch_amalgamated.hpp>

#include "test_models.hpp"
#include "wavechain/rational.hpp"

using namespace wavechain;
using Catch::Approx;

TEST_CASE("open loop value at s = 1", "[rational]") {
    // (4*1 + 4) / (1 * (1 + 4)) by hand
    CHECK(std::abs(testmodels::m1()(Complex(1, 0)) - Complex(8.0 / 5.0, 0.0)) < 1e-14);
}

TEST_CASE("double integrator divergence towards DC", "[rational]") {
    const RationalTf m = testmodels::m1();
    const double v1 = std::abs(m(Complex(1e-3, 0)));
    const double v2 = std::abs(m(Complex(1e-4, 0)));
    CHECK(v2 / v1 == Approx(100.0).epsilon(1e-2));  // 1/s^2 growth
}

TEST_CASE("identity transfer function", "[rational]") {
    const RationalTf one = RationalTf::identity();
    CHECK(one(Complex(0.3, -2.0)) == Complex(1.0, 0.0));
}

TEST_CASE("pole hit is reported", "[rational]") {
    RationalTf g{{1}, {0, 1}};  // 1/s
    CHECK_THROWS_AS(g(Complex(0.0, 0.0)), PoleHit);
}

TEST_CASE("integrator counting", "[rational]") {
    CHECK(count_integrators(testmodels::m1()) == 2);
    CHECK(count_integrators(testmodels::m2()) == 2);
    CHECK(count_integrators(RationalTf{{1, 1}, {2, 1}}) == 0);
    // numerator zero at the origin cancels one
    CHECK(count_integrators(RationalTf{{0, 1}, {0, 0, 1, 1}}) == 1);
}

TEST_CASE("integrator limit", "[rational]") {
    CHECK(testmodels::m1().integrator_limit() == Approx(1.0));           // lim s^2 M1 = 4/4
    CHECK(testmodels::m2(1.0).integrator_limit() == Approx(1.0 / 3.0));  // 1/3
    CHECK(testmodels::m2(4.0).integrator_limit() == Approx(4.0 / 3.0));
}

TEST_CASE("normalized equality with tolerance", "[rational]") {
    RationalTf a{{4, 4}, {0, 0, 4, 1}};
    RationalTf b{{8, 8}, {0, 0, 8, 2}};  // same after normalization
    CHECK(tf_equal(a, b));
    RationalTf c{{4, 4 + 1e-14}, {0, 0, 4, 1}};
    CHECK(tf_equal(a, c));  // coefficient noise below tolerance
    CHECK_FALSE(tf_equal(a, testmodels::m2()));
}

TEST_CASE("product forms open loops without cancellation", "[rational]") {
    const AgentSpec a = testmodels::agent_m1();
    CHECK(tf_equal(a.mf(), testmodels::m1()));
    CHECK(tf_equal(a.mr(), testmodels::m1()));
}
