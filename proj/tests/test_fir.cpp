#include <catch2/catch_amalgamated.hpp>

#include "test_models.hpp"
#include "wavechain/fir.hpp"
#include "wavechain/wave_tf.hpp"

using namespace wavechain;
using Catch::Approx;

TEST_CASE("constant block reduces to its feedthrough", "[fir]") {
    const FirKernel k = make_fir_kernel([](Complex) { return Complex(2.5, 0.0); }, 0.01, 5.0);
    CHECK(k.direct == Approx(2.5));
    CHECK(std::abs(k.dc_sum() - 2.5) < 1e-9);
    const TimeSignal u = TimeSignal::step(1.0, 0.01, 100);
    const TimeSignal y = apply_fir(k, u);
    CHECK(y.samples(50, 0) == Approx(2.5).margin(1e-9));
}

TEST_CASE("wave kernel sums to the unit DC gain", "[fir]") {
    const WaveTf g(testmodels::m1());
    const FirKernel k = make_fir_kernel([&](Complex s) { return g(s); }, 0.01, 60.0);
    CHECK(k.direct == 0.0);
    CHECK(std::abs(k.dc_sum() - 1.0) < 5e-3);
    CHECK(k.tail_energy_ratio < 1e-6);
}

TEST_CASE("convolution with a step reproduces the inverted step response", "[fir]") {
    const WaveTf g(testmodels::m1());
    const auto gs = [&](Complex s) { return g(s); };
    const double dt = 0.01;
    const FirKernel k = make_fir_kernel(gs, dt, 40.0);
    const TimeSignal u = TimeSignal::step(1.0, dt, 3000);
    const TimeSignal conv = apply_fir(k, u);
    // step response from direct inversion of G/s, midpoint sampled like the
    // cumulative tap sums
    const TimeSignal direct = ilt_response([&](Complex s) { return g(s) / s; }, 30.0, dt);
    double err = 0.0;
    for (int n = 0; n < direct.length(); ++n) err = std::max(err, std::abs(conv.samples(n, 0) - direct.samples(n, 0)));
    CHECK(err < 1e-3);
}

TEST_CASE("kernel frequency reading matches the block", "[fir]") {
    const WaveTf g(testmodels::m2());
    const FirKernel k = make_fir_kernel([&](Complex s) { return g(s); }, 0.01, 60.0);
    for (double w : {0.05, 0.2, 1.0, 3.0}) {
        const Complex want = g(Complex(0, w));
        CHECK(std::abs(k.eval(Complex(0, w)) - want) < 2e-4);
    }
}

TEST_CASE("fir application matches frequency-domain multiplication", "[fir][property]") {
    // band-limited input: sum of low-frequency sines, compared in L2
    const WaveTf g(testmodels::m1());
    const double dt = 0.01;
    const int nt = 4000;
    Eigen::MatrixXd u(nt, 1);
    for (int n = 0; n < nt; ++n) {
        const double t = n * dt;
        u(n, 0) = std::sin(0.4 * t) + 0.5 * std::sin(1.1 * t + 0.3);
    }
    const FirKernel k = make_fir_kernel([&](Complex s) { return g(s); }, dt, 40.0);
    const TimeSignal y = apply_fir(k, {0.0, dt, u});

    // frequency route: filter each sine through G(j*omega) in steady state;
    // compare over the second half of the window where transients died out
    const Complex g1 = g(Complex(0, 0.4)), g2 = g(Complex(0, 1.1));
    double num = 0.0, den = 0.0;
    for (int n = nt / 2; n < nt; ++n) {
        const double t = n * dt;
        const double want = std::abs(g1) * std::sin(0.4 * t + std::arg(g1)) +
                            0.5 * std::abs(g2) * std::sin(1.1 * t + 0.3 + std::arg(g2));
        num += (y.samples(n, 0) - want) * (y.samples(n, 0) - want);
        den += want * want;
    }
    CHECK(std::sqrt(num / den) < 1e-2);
}

TEST_CASE("too short a horizon is flagged", "[fir]") {
    const WaveTf g(testmodels::m1());
    CHECK_THROWS_AS(make_fir_kernel([&](Complex s) { return g(s); }, 0.01, 2.0), TruncationTooCoarse);
}
