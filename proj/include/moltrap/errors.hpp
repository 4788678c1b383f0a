#ifndef MOLTRAP_ERRORS_HPP
#define MOLTRAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace moltrap {

/// Base class for all domain errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroCharge : Error {
    ZeroCharge() : Error("neutral species cannot be held in an ion trap (q = 0)") {}
};

struct InconsistentSpec : Error {
    explicit InconsistentSpec(const std::string& msg) : Error(msg) {}
};

struct StepTooLarge : Error {
    explicit StepTooLarge(const std::string& msg) : Error(msg) {}
};

struct NonFinite : Error {
    explicit NonFinite(const std::string& msg) : Error(msg) {}
};

struct OffResonance : Error {
    explicit OffResonance(const std::string& msg) : Error(msg) {}
};

struct MisalignedWindow : Error {
    explicit MisalignedWindow(const std::string& msg) : Error(msg) {}
};

struct GradientOn : Error {
    GradientOn() : Error("coherent gate applied while the measurement gradient is on") {}
};

struct SameQubit : Error {
    SameQubit() : Error("two-qubit gate requires distinct qubits") {}
};

struct NotClassical : Error {
    NotClassical() : Error("port readout requires a classical (post-projection) state") {}
};

struct KeyMismatch : Error {
    explicit KeyMismatch(const std::string& msg) : Error(msg) {}
};

}  // namespace moltrap

#endif  // MOLTRAP_ERRORS_HPP
