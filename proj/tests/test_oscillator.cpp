#include <doctest.h>

#include <cmath>
#include <limits>

#include "moltrap/oscillator.hpp"

using namespace moltrap;
using namespace moltrap::osc;

namespace {

// Ion-trap scale oscillator used throughout: nu_z = 318 kHz.
const double kNuZ = 318e3;
const double kMass = 1.67e-24;
const double kSpring = kMass * kTwoPi * kNuZ * kTwoPi * kNuZ;
const OscillatorParams kIon{kMass, kSpring};
const double kForce = 5.05e-25;
const double kA0 = 4.17e-6;
const double kDt = 1.0 / (200.0 * kNuZ);

DriveWaveform square_drive(double phase) {
    return {DriveKind::square, kForce, kNuZ, phase, 0.0};
}

}  // namespace

TEST_CASE("natural frequency") {
    CHECK(natural_frequency(kIon) == doctest::Approx(318e3).epsilon(1e-12));
    CHECK(natural_frequency({1.67e-24, 6.67e-12}) == doctest::Approx(3.18e5).epsilon(1e-3));
    CHECK(natural_frequency({2e-16, 2e-16}) == doctest::Approx(0.159).epsilon(1e-3));
    // quadrupling k doubles the frequency
    CHECK(natural_frequency({kMass, 4.0 * kSpring}) ==
          doctest::Approx(2.0 * natural_frequency(kIon)).epsilon(1e-12));
}

TEST_CASE("undriven energy conservation over 1e6 steps") {
    const DriveWaveform none{DriveKind::static_force, 0.0, 0.0, 0.0, 0.0};
    const double t_end = 1e6 * kDt;
    const auto traj = integrate(kIon, {0.0, kA0, 0.0}, none, t_end, kDt);
    REQUIRE(traj.size() == 1000001);
    const double e0 = energy(kIon, traj.front());
    double worst = 0;
    for (const auto& st : traj) worst = std::max(worst, std::abs(energy(kIon, st) - e0) / e0);
    CHECK(worst <= 1e-9);
}

TEST_CASE("resonant square drive matches the 4 f nu / k growth slope") {
    const double cycles = 2000;
    const double t_end = cycles / kNuZ;
    const auto traj = integrate(kIon, {0.0, kA0, 0.0}, square_drive(0.0), t_end, kDt);
    const double gain = amplitude(kIon, traj.back()) - kA0;
    const double expected = 4.0 * kForce * kNuZ / kSpring * t_end;
    CHECK(gain == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("phase pi drive removes what phase 0 adds") {
    const double cycles = 2000;
    const double t_end = cycles / kNuZ;
    const auto up = integrate(kIon, {0.0, kA0, 0.0}, square_drive(0.0), t_end, kDt);
    const auto down = integrate(kIon, {0.0, kA0, 0.0}, square_drive(kPi), t_end, kDt);
    const double gain = amplitude(kIon, up.back()) - kA0;
    const double loss = kA0 - amplitude(kIon, down.back());
    CHECK(gain == doctest::Approx(loss).epsilon(1e-3));
}

TEST_CASE("analytic envelope examples") {
    const auto drive = square_drive(0.0);
    CHECK(analytic_envelope(kIon, kA0, drive, 0.0) == kA0);
    const double a30 = analytic_envelope(kIon, kA0, drive, 30.0);
    CHECK(a30 - kA0 == doctest::Approx(2.89e-6).epsilon(2e-3));
    CHECK(a30 - kA0 == doctest::Approx(3e-6).epsilon(0.05));  // the 1-sig-fig headline
    // phase pi shrinks and clamps at zero
    CHECK(analytic_envelope(kIon, kA0, square_drive(kPi), 30.0) ==
          doctest::Approx(kA0 - 2.89e-6).epsilon(2e-3));
    CHECK(analytic_envelope(kIon, kA0, square_drive(kPi), 1e4) == 0.0);
}

TEST_CASE("analytic envelope rejects off-resonant drives") {
    DriveWaveform off = square_drive(0.0);
    off.frequency = kNuZ * (1.0 + 1e-4);
    CHECK_THROWS_AS(analytic_envelope(kIon, kA0, off, 1.0), OffResonance);
}

TEST_CASE("sine drive matches the f/(2 M omega) slope") {
    const DriveWaveform sine{DriveKind::sine, kForce, kNuZ, 0.0, 0.0};
    const double cycles = 2000;
    const double t_end = cycles / kNuZ;
    const auto traj = integrate(kIon, {0.0, kA0, 0.0}, sine, t_end, kDt);
    const double gain = amplitude(kIon, traj.back()) - kA0;
    const double expected = kForce / (2.0 * kMass * kTwoPi * kNuZ) * t_end;
    CHECK(gain == doctest::Approx(expected).epsilon(1e-3));
    CHECK(analytic_envelope(kIon, kA0, sine, t_end) - kA0 ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("readout classification") {
    const double cycles = 2000;
    const double t_end = cycles / kNuZ;
    const double gain = 4.0 * kForce * kNuZ / kSpring * t_end;
    const double threshold = gain / 2;

    const auto up = integrate(kIon, {0.0, kA0, 0.0}, square_drive(0.0), t_end, kDt);
    CHECK(classify_readout(kIon, up, kA0, threshold) == Readout::SpinUp);

    const auto down = integrate(kIon, {0.0, kA0, 0.0}, square_drive(kPi), t_end, kDt);
    CHECK(classify_readout(kIon, down, kA0, threshold) == Readout::SpinDown);

    const DriveWaveform none{DriveKind::static_force, 0.0, 0.0, 0.0, 0.0};
    const auto idle = integrate(kIon, {0.0, kA0, 0.0}, none, t_end, kDt);
    CHECK(classify_readout(kIon, idle, kA0, threshold) == Readout::Indeterminate);
}

TEST_CASE("static deflection") {
    CHECK(static_deflection({1.67e-24, 6.68e-12}, 5.05e-25) ==
          doctest::Approx(7.56e-14).epsilon(1e-3));
    CHECK(static_deflection({2e-16, 2e-16}, 7.05e-24) ==
          doctest::Approx(3.53e-8).epsilon(2e-3));
    CHECK(static_deflection(kIon, 0.0) == 0.0);
}

TEST_CASE("step size precondition") {
    const DriveWaveform none{DriveKind::static_force, 0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(integrate(kIon, {0.0, kA0, 0.0}, none, 1e-4, 1.0 / (30.0 * kNuZ)),
                    StepTooLarge);
}

TEST_CASE("non-finite states are reported") {
    const DriveWaveform none{DriveKind::static_force, 0.0, 0.0, 0.0, 0.0};
    const OscillatorState bad{0.0, std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(integrate(kIon, bad, none, 100.0 * kDt, kDt), NonFinite);
}

TEST_CASE("finite Q: resonant sine drive saturates at Q f / k") {
    const DriveWaveform sine{DriveKind::sine, kForce, kNuZ, 0.0, 0.0};
    SUBCASE("Q = 1e3, relax from rest") {
        const OscillatorParams p{kMass, kSpring, 1e3};
        const double a_ss = p.quality_Q * kForce / kSpring;
        const double t_end = 2500.0 / kNuZ;  // ~8 amplitude time constants
        const auto traj = integrate(p, {0.0, 0.0, 0.0}, sine, t_end, kDt);
        CHECK(amplitude(p, traj.back()) == doctest::Approx(a_ss).epsilon(0.05));
    }
    SUBCASE("Q = 1e6, steady state is stationary") {
        const OscillatorParams p{kMass, kSpring, 1e6};
        const double a_ss = p.quality_Q * kForce / kSpring;
        const double t_end = 2000.0 / kNuZ;
        const auto traj = integrate(p, {0.0, a_ss, 0.0}, sine, t_end, kDt);
        CHECK(amplitude(p, traj.back()) == doctest::Approx(a_ss).epsilon(0.05));
    }
}
