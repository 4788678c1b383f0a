#ifndef MOLTRAP_OSCILLATOR_HPP
#define MOLTRAP_OSCILLATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "moltrap/constants.hpp"
#include "moltrap/errors.hpp"

namespace moltrap::osc {

struct OscillatorParams {
    double mass_M = 0;    // kg
    double spring_k = 0;  // N/m
    double quality_Q = std::numeric_limits<double>::infinity();
};

struct OscillatorState {
    double time = 0;        // s
    double position_z = 0;  // m
    double velocity_vz = 0; // m/s
};

enum class DriveKind { square, sine, static_force };

/// Spin-dependent drive force on the axial oscillator.
///
/// Phase convention: phase_offset 0 means the force is aligned with the
/// oscillator velocity (energy flows in), pi means anti-aligned (energy flows
/// out). The square drive locks to the instantaneous velocity sign, which is
/// what a spin flipping once per half-cycle produces. The sine drive is an
/// explicit waveform -f*sin(2*pi*frequency*t) for phase 0; with the initial
/// condition z0 = A, v0 = 0 that is exactly velocity-aligned.
///
/// envelope_nu_flip > 0 superimposes a slow 50%-duty sign modulation p(t),
/// +1 on the first half-period of 1/nu_flip.
struct DriveWaveform {
    DriveKind kind = DriveKind::square;
    double force_amplitude_f = 0;  // N, sign = spin orientation
    double frequency = 0;          // Hz
    double phase_offset = 0;       // 0 or pi
    double envelope_nu_flip = 0;   // Hz, 0 = no modulation
};

inline double natural_frequency(const OscillatorParams& p) {
    return std::sqrt(p.spring_k / p.mass_M) / kTwoPi;
}

inline double energy(const OscillatorParams& p, const OscillatorState& s) {
    return 0.5 * p.spring_k * s.position_z * s.position_z +
           0.5 * p.mass_M * s.velocity_vz * s.velocity_vz;
}

/// Amplitude from the instantaneous energy, A = sqrt(2E/k). Robust at few
/// samples per cycle, unlike peak-picking.
inline double amplitude(const OscillatorParams& p, const OscillatorState& s) {
    return std::sqrt(2.0 * energy(p, s) / p.spring_k);
}

inline double envelope_sign(const DriveWaveform& d, double t) {
    if (d.envelope_nu_flip <= 0) return 1.0;
    const double phase = t * d.envelope_nu_flip;
    return std::fmod(phase, 1.0) < 0.5 ? 1.0 : -1.0;
}

inline double drive_force(const DriveWaveform& d, const OscillatorState& s) {
    const double align = d.phase_offset == 0.0 ? 1.0 : -1.0;
    const double p = envelope_sign(d, s.time);
    switch (d.kind) {
        case DriveKind::static_force:
            return d.force_amplitude_f * p;
        case DriveKind::square: {
            // Lock to the velocity sign; at a turning point take the sign the
            // velocity is about to acquire.
            double sv = s.velocity_vz > 0 ? 1.0 : (s.velocity_vz < 0 ? -1.0 : 0.0);
            if (sv == 0.0) sv = s.position_z > 0 ? -1.0 : (s.position_z < 0 ? 1.0 : 0.0);
            return align * p * d.force_amplitude_f * sv;
        }
        case DriveKind::sine:
            return -align * p * d.force_amplitude_f * std::sin(kTwoPi * d.frequency * s.time);
    }
    return 0.0;
}

/// Fixed-step integrator for z'' = (F(t,z,v) - k z)/M - gamma v, with
/// gamma = 2*pi*nu_z/Q (zero at infinite Q).
///
/// Scheme: Strang splitting of the flow into (half drive kick + half damping)
/// o (exact harmonic rotation over dt) o (half damping + half drive kick).
/// Second order in the drive; the undriven, undamped flow is the exact
/// phase-space rotation, so energy is conserved to rounding over arbitrarily
/// many steps.
///
/// Returns states at steps 0..ceil(t_end/dt).
inline std::vector<OscillatorState> integrate(const OscillatorParams& p,
                                              const OscillatorState& state0,
                                              const DriveWaveform& drive, double t_end,
                                              double dt) {
    const double nu0 = natural_frequency(p);
    if (dt > 1.0 / (50.0 * nu0)) {
        throw StepTooLarge("dt must be at most 1/(50*natural_frequency)");
    }
    const double omega = kTwoPi * nu0;
    const double theta = omega * dt;
    const double c = std::cos(theta), s = std::sin(theta);
    const double gamma = std::isinf(p.quality_Q) ? 0.0 : omega / p.quality_Q;
    const double damp = gamma == 0.0 ? 1.0 : std::exp(-0.5 * gamma * dt);
    const double inv_m = 1.0 / p.mass_M;

    const long n_steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    std::vector<OscillatorState> traj;
    traj.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.push_back(state0);

    OscillatorState st = state0;
    for (long i = 0; i < n_steps; ++i) {
        st.velocity_vz += 0.5 * dt * inv_m * drive_force(drive, st);
        st.velocity_vz *= damp;
        const double z = st.position_z, v = st.velocity_vz;
        st.position_z = z * c + (v / omega) * s;
        st.velocity_vz = v * c - z * omega * s;
        st.velocity_vz *= damp;
        st.time = state0.time + static_cast<double>(i + 1) * dt;
        st.velocity_vz += 0.5 * dt * inv_m * drive_force(drive, st);
        traj.push_back(st);
    }
    if (!std::isfinite(st.position_z) || !std::isfinite(st.velocity_vz)) {
        throw NonFinite("oscillator state diverged");
    }
    return traj;
}

/// Closed-form amplitude envelope under a resonant drive at infinite Q.
/// Square drive: dA/dt = 4*f*nu/k (work 4fA per cycle). Sine drive:
/// dA/dt = f/(2*M*omega), equivalently pi*f*nu/k. Clamped at zero.
inline double analytic_envelope(const OscillatorParams& p, double a0,
                                const DriveWaveform& drive, double t) {
    const double nu0 = natural_frequency(p);
    if (std::abs(drive.frequency - nu0) > 1e-6 * nu0) {
        throw OffResonance("drive frequency must match the natural frequency");
    }
    const double f = std::abs(drive.force_amplitude_f);
    const double sign = drive.phase_offset == 0.0 ? 1.0 : -1.0;
    double slope = 0;
    switch (drive.kind) {
        case DriveKind::square: slope = 4.0 * f * nu0 / p.spring_k; break;
        case DriveKind::sine: slope = f / (2.0 * p.mass_M * kTwoPi * nu0); break;
        case DriveKind::static_force: slope = 0; break;
    }
    return std::max(0.0, a0 + sign * slope * t);
}

inline double static_deflection(const OscillatorParams& p, double net_force) {
    return net_force / p.spring_k;
}

enum class Readout { SpinUp, SpinDown, Indeterminate };

inline const char* to_string(Readout r) {
    switch (r) {
        case Readout::SpinUp: return "SpinUp";
        case Readout::SpinDown: return "SpinDown";
        case Readout::Indeterminate: return "Indeterminate";
    }
    return "?";
}

/// Classify a trajectory as enhanced or suppressed oscillation relative to
/// the starting amplitude a0.
inline Readout classify_readout(const OscillatorParams& p,
                                const std::vector<OscillatorState>& traj, double a0,
                                double threshold) {
    const double a = amplitude(p, traj.back());
    if (a >= a0 + threshold) return Readout::SpinUp;
    if (a <= a0 - threshold) return Readout::SpinDown;
    return Readout::Indeterminate;
}

/// Delimited-text trajectory export: header row, then one line per state
/// with 13 significant digits.
inline void write_trajectory(std::ostream& os, const OscillatorParams& p,
                             const std::vector<OscillatorState>& traj) {
    os << "time_s\tz_m\tvz_m_per_s\tenergy_J\n";
    char buf[128];
    for (const auto& st : traj) {
        std::snprintf(buf, sizeof buf, "%.12e\t%.12e\t%.12e\t%.12e\n", st.time,
                      st.position_z, st.velocity_vz, energy(p, st));
        os << buf;
    }
}

}  // namespace moltrap::osc

#endif  // MOLTRAP_OSCILLATOR_HPP
