#ifndef MOLTRAP_CIRCUIT_HPP
#define MOLTRAP_CIRCUIT_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "moltrap/errors.hpp"
#include "moltrap/qregister.hpp"

namespace moltrap::qreg {

/// Line-oriented circuit grammar, one gate per line:
///   PHASE q theta
///   XOR c t
///   SWAP a b
///   MEASURE seed
///   INIT bits seed
/// '#' starts a comment; blank lines are ignored.
struct CircuitOp {
    enum Kind { Phase, Xor, Swap, Measure, Init } kind;
    int a = 0, b = 0;
    double theta = 0;
    std::uint64_t seed = 0;
    std::string bits;
};

struct CircuitParseError : Error {
    CircuitParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg) {}
};

inline std::vector<CircuitOp> parse_circuit(const std::string& text) {
    std::vector<CircuitOp> ops;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        CircuitOp op{};
        auto need = [&](auto& v, const char* what) {
            if (!(ls >> v)) throw CircuitParseError(lineno, std::string("expected ") + what);
        };
        if (word == "PHASE") {
            op.kind = CircuitOp::Phase;
            need(op.a, "qubit index");
            need(op.theta, "angle");
        } else if (word == "XOR") {
            op.kind = CircuitOp::Xor;
            need(op.a, "control index");
            need(op.b, "target index");
        } else if (word == "SWAP") {
            op.kind = CircuitOp::Swap;
            need(op.a, "qubit index");
            need(op.b, "qubit index");
        } else if (word == "MEASURE") {
            op.kind = CircuitOp::Measure;
            need(op.seed, "seed");
        } else if (word == "INIT") {
            op.kind = CircuitOp::Init;
            need(op.bits, "bit string");
            need(op.seed, "seed");
        } else {
            throw CircuitParseError(lineno, "unknown gate '" + word + "'");
        }
        std::string extra;
        if (ls >> extra) throw CircuitParseError(lineno, "trailing token '" + extra + "'");
        ops.push_back(op);
    }
    return ops;
}

struct CircuitResult {
    RegisterState state;
    std::vector<MeasurementRecord> records;
};

inline CircuitResult run_circuit(RegisterState state, const std::vector<CircuitOp>& ops) {
    CircuitResult res{std::move(state), {}};
    for (const auto& op : ops) {
        switch (op.kind) {
            case CircuitOp::Phase: res.state = apply_phase(res.state, op.a, op.theta); break;
            case CircuitOp::Xor: res.state = apply_xor(res.state, op.a, op.b); break;
            case CircuitOp::Swap: res.state = apply_swap(res.state, op.a, op.b); break;
            case CircuitOp::Measure: {
                auto [st, rec] = project_all(res.state, op.seed);
                res.state = std::move(st);
                res.records.push_back(std::move(rec));
                break;
            }
            case CircuitOp::Init:
                res.state = initialize(res.state, op.bits, op.seed);
                break;
        }
    }
    return res;
}

}  // namespace moltrap::qreg

#endif  // MOLTRAP_CIRCUIT_HPP
