#ifndef MOLTRAP_CONSTANTS_HPP
#define MOLTRAP_CONSTANTS_HPP

#include <numbers>

namespace moltrap {

/// Physical constants, SI units throughout. These are pinned values: the
/// regression fixtures in tests/ and scenarios/ depend on them bit-for-bit,
/// so scenarios may not override them. m_p, mu_N and a0 are kept at three
/// significant figures; h, k_B, e, mu_p and g follow CODATA, so comparisons
/// against rounded literature numbers carry a 1-3% tolerance.
struct PhysicalConstants {
    double proton_mass;        // kg
    double nuclear_magneton;   // J/T
    double proton_moment;      // J/T
    double bohr_spacing_a0;    // m, quarter of the 2.12e-10 m internuclear spacing
    double planck_h;           // J*s
    double boltzmann_kB;       // J/K
    double elementary_charge;  // C
    double standard_gravity;   // m/s^2
};

constexpr PhysicalConstants kConstants{
    1.67e-27,
    5.05e-27,
    1.410e-26,
    2.12e-10 / 4.0,
    6.62607e-34,
    1.380649e-23,
    1.602e-19,
    9.8,
};

constexpr const PhysicalConstants& constants() { return kConstants; }

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace moltrap

#endif  // MOLTRAP_CONSTANTS_HPP
