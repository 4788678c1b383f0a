#ifndef MOLTRAP_SPIN_PROTOCOL_HPP
#define MOLTRAP_SPIN_PROTOCOL_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "moltrap/constants.hpp"
#include "moltrap/errors.hpp"
#include "moltrap/oscillator.hpp"

namespace moltrap::protocol {

/// One spin in the molecular lattice, seen by the oscillator as a force
/// source moment*s*dB/dz.
struct SpinSite {
    int index = 0;
    double moment = 0;      // J/T, species magnitude
    std::string gyro_tag;   // gyromagnetic species label
    int state_s = +1;       // +1 or -1
    bool is_port = false;   // the uniquely addressable read/write spin
};

enum class Carrier { static_field, oscillating_at_nu_z };

/// Field-gradient drive schedule. With inversion_frequency_nu_flip > 0 the
/// gradient sign is inverted every half-period (50% duty) and the target
/// spin is flipped at the same instants, so the target drive keeps constant
/// sign while every background contribution alternates.
struct GradientSchedule {
    double base_gradient_G = 0;  // T/m
    Carrier carrier = Carrier::oscillating_at_nu_z;
    double inversion_frequency_nu_flip = 0;  // Hz, 0 = no inversion
};

struct ProtocolResult {
    double target_work_J = 0;
    double background_work_J = 0;
    double amplitude_gain_m = 0;
    double cancellation_ratio = 0;  // |background| / |target|
    bool no_cancellation = false;   // nu_flip = 0: background is simply static
    double background_static_deflection_m = 0;  // only meaningful when no_cancellation
};

/// True iff the RF frequency hits this site's Larmor line 2*|moment|*B/h
/// within tolerance.
inline bool resonance_check(const SpinSite& site, double rf_frequency, double field_B,
                            double tolerance) {
    const double larmor = 2.0 * std::abs(site.moment) * field_B / constants().planck_h;
    return std::abs(larmor - rf_frequency) <= tolerance;
}

/// Net static force of all non-port sites in a uniform gradient.
inline double net_static_force(const std::vector<SpinSite>& sites, double gradient) {
    double f = 0;
    for (const auto& s : sites) {
        if (!s.is_port) f += static_cast<double>(s.state_s) * s.moment * gradient;
    }
    return f;
}

inline const SpinSite& find_port(const std::vector<SpinSite>& sites) {
    const SpinSite* port = nullptr;
    for (const auto& s : sites) {
        if (s.is_port) {
            if (port) throw InconsistentSpec("register must have exactly one port site");
            port = &s;
        }
    }
    if (!port) throw InconsistentSpec("register must have exactly one port site");
    return *port;
}

/// Time for the resonant amplitude change (4f/k)*nu_z*t to reach the given
/// displacement resolution.
inline double detection_time(const osc::OscillatorParams& oscp, double f,
                             double resolution) {
    return resolution * oscp.spring_k / (4.0 * f * osc::natural_frequency(oscp));
}

/// Run the gradient-inversion protocol over [0, t_end] and account the work
/// done on the oscillator by the target and by the background spins.
///
/// Work integrals are first-order closed-form sums along the reference
/// oscillation of amplitude A0: a velocity-locked drive of magnitude f does
/// work 4*f*A0 per carrier cycle. The target force s*mu*G*p(t)^2 keeps one
/// sign, so its work accumulates; each background force carries a single
/// p(t) factor and its per-half-period work alternates, summing to zero over
/// every full inversion period.
///
/// Preconditions: t_end is an integer number of inversion periods and the
/// inversion instants fall on carrier zero crossings (nu_z/(2*nu_flip)
/// integer), otherwise the leftover half-cycles would break cancellation by
/// construction rather than by physics.
inline ProtocolResult run_protocol(const std::vector<SpinSite>& sites,
                                   const GradientSchedule& schedule,
                                   const osc::OscillatorParams& oscp, double a0,
                                   double t_end) {
    const SpinSite& port = find_port(sites);
    const double nu_z = osc::natural_frequency(oscp);
    const double g = schedule.base_gradient_G;
    const double nu_flip = schedule.inversion_frequency_nu_flip;

    ProtocolResult r;
    const double f_target = std::abs(port.moment * g);

    if (nu_flip == 0 || schedule.carrier == Carrier::static_field) {
        // No inversion: the target still drives resonantly (RF flip at nu_z),
        // every other spin just shifts the equilibrium.
        r.no_cancellation = true;
        r.target_work_J = 4.0 * f_target * nu_z * a0 * t_end;
        r.amplitude_gain_m = r.target_work_J / (oscp.spring_k * a0);
        r.background_work_J = 0;
        r.cancellation_ratio = std::numeric_limits<double>::infinity();
        r.background_static_deflection_m = net_static_force(sites, g) / oscp.spring_k;
        return r;
    }

    if (nu_flip > nu_z / 10.0) {
        throw InconsistentSpec("gradient inversion must be slow: nu_flip <= nu_z/10");
    }
    const double period = 1.0 / nu_flip;
    const double n_periods_f = t_end / period;
    const double n_periods_round = std::round(n_periods_f);
    if (n_periods_round < 1 || std::abs(n_periods_f - n_periods_round) > 1e-9) {
        throw MisalignedWindow("t_end must be an integer number of inversion periods");
    }
    const double cycles_per_half = nu_z / (2.0 * nu_flip);
    if (std::abs(cycles_per_half - std::round(cycles_per_half)) > 1e-9) {
        throw MisalignedWindow(
            "inversion instants must fall on carrier zero crossings "
            "(nu_z/(2*nu_flip) must be an integer)");
    }
    const long n_periods = static_cast<long>(n_periods_round);
    const double half = 0.5 * period;

    r.target_work_J = 4.0 * f_target * nu_z * a0 * t_end;
    r.amplitude_gain_m = r.target_work_J / (oscp.spring_k * a0);

    // Per-half-period background work, summed in schedule order so the
    // pairwise cancellation happens exactly.
    double w_bg = 0;
    for (long j = 0; j < 2 * n_periods; ++j) {
        const double p = (j % 2 == 0) ? 1.0 : -1.0;
        double w_half = 0;
        for (const auto& s : sites) {
            if (s.is_port) continue;
            w_half += static_cast<double>(s.state_s) * s.moment * g;
        }
        w_bg += p * 4.0 * w_half * nu_z * a0 * half;
    }
    r.background_work_J = w_bg;
    r.cancellation_ratio = std::abs(w_bg) / std::abs(r.target_work_J);
    return r;
}

}  // namespace moltrap::protocol

#endif  // MOLTRAP_SPIN_PROTOCOL_HPP
