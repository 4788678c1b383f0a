#ifndef MOLTRAP_QREGISTER_HPP
#define MOLTRAP_QREGISTER_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "moltrap/errors.hpp"

namespace moltrap::qreg {

using Amplitude = std::complex<double>;

/// State vector of an n-spin register (n <= 20). Qubit i is bit i of the
/// basis index (qubit 0 = LSB); configuration strings are written qubit 0
/// first. While gradient_on is true the register is under measurement and
/// coherent gates are refused.
struct RegisterState {
    int qubit_count_n = 1;
    std::vector<Amplitude> amplitudes;
    bool gradient_on = false;
    int port_index = 0;

    static RegisterState basis(int n, std::uint64_t configuration = 0, int port = 0) {
        if (n < 1 || n > 20) throw InconsistentSpec("qubit count must be in 1..20");
        RegisterState st;
        st.qubit_count_n = n;
        st.amplitudes.assign(std::size_t{1} << n, Amplitude{0, 0});
        st.amplitudes[configuration] = Amplitude{1, 0};
        st.port_index = port;
        return st;
    }

    double norm_sq() const {
        double s = 0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }

    /// Classical = exactly one basis amplitude with |a|^2 = 1.
    bool is_classical(std::uint64_t* config_out = nullptr) const {
        int hits = 0;
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < amplitudes.size(); ++i) {
            if (std::norm(amplitudes[i]) > 0.5) {
                ++hits;
                idx = i;
            }
        }
        if (hits != 1 || std::abs(norm_sq() - 1.0) > 1e-9) return false;
        if (config_out) *config_out = idx;
        return true;
    }
};

struct MeasurementRecord {
    std::string configuration;      // qubit 0 first
    std::string port_bit_sequence;  // bits in schedule order, read via the port
    std::uint64_t rng_seed = 0;
};

/// Deterministic RNG for measurement sampling: std::mt19937_64 seeded
/// directly, uniform doubles built as (x >> 11) * 2^-53 so the stream does
/// not depend on library distribution internals.
class MeasureRng {
public:
    explicit MeasureRng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

inline void check_qubit(const RegisterState& st, int q) {
    if (q < 0 || q >= st.qubit_count_n) throw InconsistentSpec("qubit index out of range");
}

inline RegisterState apply_phase(const RegisterState& st, int qubit, double theta) {
    if (st.gradient_on) throw GradientOn{};
    check_qubit(st, qubit);
    RegisterState out = st;
    const Amplitude phase = std::polar(1.0, theta);
    const std::uint64_t mask = std::uint64_t{1} << qubit;
    for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
        if (i & mask) out.amplitudes[i] *= phase;
    }
    return out;
}

/// |c,t> -> |c, t xor c>.
inline RegisterState apply_xor(const RegisterState& st, int control, int target) {
    if (st.gradient_on) throw GradientOn{};
    check_qubit(st, control);
    check_qubit(st, target);
    if (control == target) throw SameQubit{};
    RegisterState out = st;
    const std::uint64_t cmask = std::uint64_t{1} << control;
    const std::uint64_t tmask = std::uint64_t{1} << target;
    for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(out.amplitudes[i], out.amplitudes[i | tmask]);
    }
    return out;
}

/// SWAP as the three-XOR composition.
inline RegisterState apply_swap(const RegisterState& st, int a, int b) {
    if (st.gradient_on) throw GradientOn{};
    check_qubit(st, a);
    check_qubit(st, b);
    if (a == b) throw SameQubit{};
    return apply_xor(apply_xor(apply_xor(st, a, b), b, a), a, b);
}

inline std::string config_to_string(std::uint64_t config, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) {
        if (config & (std::uint64_t{1} << i)) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

inline std::uint64_t config_from_string(const std::string& bits) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') c |= std::uint64_t{1} << i;
        else if (bits[i] != '0') throw InconsistentSpec("configuration must be a bit string");
    }
    return c;
}

/// Switching on the inhomogeneous field projects the whole register onto a
/// basis configuration with Born probabilities. Deterministic given seed.
/// The returned state has gradient_on = true and stays classical until the
/// field is switched off.
inline std::pair<RegisterState, MeasurementRecord> project_all(const RegisterState& st,
                                                               std::uint64_t seed) {
    MeasureRng rng(seed);
    const double u = rng.uniform() * st.norm_sq();
    double acc = 0;
    std::uint64_t picked = st.amplitudes.size() - 1;
    for (std::size_t i = 0; i < st.amplitudes.size(); ++i) {
        acc += std::norm(st.amplitudes[i]);
        if (u < acc) {
            picked = i;
            break;
        }
    }
    RegisterState out = RegisterState::basis(st.qubit_count_n, picked, st.port_index);
    out.gradient_on = true;
    MeasurementRecord rec;
    rec.configuration = config_to_string(picked, st.qubit_count_n);
    rec.rng_seed = seed;
    return {out, rec};
}

/// Read the listed sites through the port: classically swap site and port,
/// read the port bit, swap back. Only valid on a post-projection state.
inline MeasurementRecord port_readout(const RegisterState& st,
                                      const std::vector<int>& schedule) {
    std::uint64_t config = 0;
    if (!st.is_classical(&config)) throw NotClassical{};
    MeasurementRecord rec;
    rec.configuration = config_to_string(config, st.qubit_count_n);
    std::uint64_t work = config;
    for (int site : schedule) {
        check_qubit(st, site);
        const int port = st.port_index;
        auto bit = [&](int q) { return (work >> q) & 1u; };
        auto set = [&](int q, std::uint64_t v) {
            work = (work & ~(std::uint64_t{1} << q)) | (v << q);
        };
        if (site != port) {  // swap in
            const auto bs = bit(site), bp = bit(port);
            set(site, bp);
            set(port, bs);
        }
        rec.port_bit_sequence.push_back(bit(port) ? '1' : '0');
        if (site != port) {  // swap back
            const auto bs = bit(site), bp = bit(port);
            set(site, bp);
            set(port, bs);
        }
    }
    return rec;
}

/// Measure the whole lattice, then classically flip bits until the register
/// holds the target configuration. Leaves the field off, ready for coherent
/// evolution.
inline RegisterState initialize(const RegisterState& st, const std::string& target_bits,
                                std::uint64_t seed) {
    if (static_cast<int>(target_bits.size()) != st.qubit_count_n) {
        throw InconsistentSpec("target configuration length must equal qubit count");
    }
    auto [projected, rec] = project_all(st, seed);
    (void)rec;
    RegisterState out = RegisterState::basis(st.qubit_count_n,
                                             config_from_string(target_bits),
                                             st.port_index);
    out.gradient_on = false;
    return out;
}

}  // namespace moltrap::qreg

#endif  // MOLTRAP_QREGISTER_HPP
