#ifndef MOLTRAP_TRAP_MODELS_HPP
#define MOLTRAP_TRAP_MODELS_HPP

#include <cmath>
#include <optional>

#include "moltrap/constants.hpp"
#include "moltrap/errors.hpp"

namespace moltrap::traps {

/// A singly charged molecule of N nuclei, modeled as a near-spherical blob:
/// mass 10*N*m_p, radius 2.52*N^(1/3)*a0.
struct MoleculeSpec {
    long nucleus_count_N = 100;
    double charge_q = constants().elementary_charge;  // C
    double sound_speed_C = 1e3;                       // m/s
    double temperature_T = 4.2;                       // K
};

struct IonTrapSpec {
    double field_B = 5.0;             // T
    double axial_frequency_nu_z = 0;  // Hz, calibration input from trap hardware
};

struct WeightCalibration {
    double weight_fraction = 0;  // force change as a fraction of the particle's weight
    double displacement = 0;     // m, resulting height change
};

/// Optically levitated particle. Supply the spring constant directly or via
/// a weight-fraction calibration point, never both.
struct OpticalTrapSpec {
    double particle_mass_M = 0;  // kg
    std::optional<double> stiffness_k;           // N/m
    std::optional<WeightCalibration> calibration;
};

/// Derived static parameters of one trap scenario. Fields that do not apply
/// to the trap kind (everything rotational/cyclotron for the optical trap)
/// stay unset.
struct TrapReport {
    double mass_M = 0;     // kg
    double spring_k = 0;   // N/m
    double nu_z = 0;       // Hz
    std::optional<double> radius_R;           // m
    std::optional<double> inertia_I;          // kg*m^2
    std::optional<double> nu_c;               // Hz
    std::optional<double> thermal_speed_v;    // m/s
    std::optional<double> axial_amplitude_A;  // m
    std::optional<double> orbit_diameter;     // m
    std::optional<double> rotation_omega;     // rad/s
    std::optional<double> phonon_nu_p;        // Hz
    std::optional<double> larmor_nu_s;        // Hz
    bool radial_confinement_warning = false;  // nu_c < nu_z: hybrid trap needed
};

inline double molecule_mass(const MoleculeSpec& spec) {
    return 10.0 * static_cast<double>(spec.nucleus_count_N) * constants().proton_mass;
}

inline double molecule_radius(const MoleculeSpec& spec) {
    return 2.52 * std::cbrt(static_cast<double>(spec.nucleus_count_N)) *
           constants().bohr_spacing_a0;
}

/// Rotational inertia of the molecular blob, 25.4*N^(5/3)*m_p*a0^2. The
/// coefficient is (2/5)*10*2.52^2 rounded; it agrees with (2/5)*M*R^2 to 0.02%.
inline double molecule_inertia(const MoleculeSpec& spec) {
    const double n = static_cast<double>(spec.nucleus_count_N);
    return 25.4 * std::pow(n, 5.0 / 3.0) * constants().proton_mass *
           constants().bohr_spacing_a0 * constants().bohr_spacing_a0;
}

inline double cyclotron_frequency(const MoleculeSpec& spec, const IonTrapSpec& trap) {
    if (spec.charge_q == 0.0) throw ZeroCharge{};
    return std::abs(spec.charge_q) * trap.field_B / (kTwoPi * molecule_mass(spec));
}

/// Signed force on a magnetic moment in a field gradient.
inline double spin_force(double moment, double gradient) { return moment * gradient; }

inline TrapReport derive_ion_trap(const MoleculeSpec& spec, const IonTrapSpec& trap) {
    const auto& c = constants();
    TrapReport r;
    r.mass_M = molecule_mass(spec);
    r.radius_R = molecule_radius(spec);
    r.inertia_I = molecule_inertia(spec);
    r.nu_c = cyclotron_frequency(spec, trap);
    r.nu_z = trap.axial_frequency_nu_z;
    r.spring_k = r.mass_M * (kTwoPi * r.nu_z) * (kTwoPi * r.nu_z);
    // Classical thermal kinematics: v from the two axial-plane quadratures,
    // omega likewise for rotation.
    const double e_th = 2.0 * c.boltzmann_kB * spec.temperature_T;
    r.thermal_speed_v = std::sqrt(e_th / r.mass_M);
    r.axial_amplitude_A = *r.thermal_speed_v / (kTwoPi * r.nu_z);
    r.orbit_diameter = *r.thermal_speed_v / (kPi * *r.nu_c);
    r.rotation_omega = std::sqrt(e_th / *r.inertia_I);
    r.phonon_nu_p = spec.sound_speed_C / *r.radius_R;
    r.larmor_nu_s = 2.0 * c.nuclear_magneton * trap.field_B / c.planck_h;
    r.radial_confinement_warning = *r.nu_c < r.nu_z;
    return r;
}

inline TrapReport derive_optical_trap(const OpticalTrapSpec& spec) {
    if (spec.stiffness_k.has_value() == spec.calibration.has_value()) {
        throw InconsistentSpec(
            "optical trap needs exactly one of stiffness_k or weight-fraction calibration");
    }
    TrapReport r;
    r.mass_M = spec.particle_mass_M;
    if (spec.stiffness_k) {
        r.spring_k = *spec.stiffness_k;
    } else {
        const auto& cal = *spec.calibration;
        r.spring_k = cal.weight_fraction * r.mass_M * constants().standard_gravity /
                     cal.displacement;
    }
    r.nu_z = std::sqrt(r.spring_k / r.mass_M) / kTwoPi;
    return r;
}

}  // namespace moltrap::traps

#endif  // MOLTRAP_TRAP_MODELS_HPP
