// moltrap command-line front end: derive trap parameters, simulate readout
// and the gradient-inversion protocol, run register circuits, and check the
// shipped regression fixtures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "moltrap/scenario.hpp"

namespace fs = std::filesystem;
using namespace moltrap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitFixtureMismatch = 4;

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir;
    std::string format = "table";
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_scenario) {
    if (needs_scenario) {
        cmd->add_option("--scenario", o.scenario_path, "scenario file")->required();
    }
    cmd->add_option("--out", o.out_dir, "output directory for report and trajectories");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
    cmd->add_option("--seed", o.seed, "override the scenario seed");
}

int run_one(const std::vector<scenario::Kind>& allowed, const CommonOpts& o) {
    std::ifstream in(o.scenario_path);
    if (!in) {
        std::cerr << "error: cannot open scenario file: " << o.scenario_path << "\n";
        return kExitValidation;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto parsed = scenario::parse_scenario(ss.str());
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) {
            std::cerr << "error";
            if (e.line > 0) std::cerr << " (line " << e.line << ")";
            std::cerr << " [" << e.code << "]: " << e.message << "\n";
        }
        return kExitValidation;
    }
    auto sc = *parsed.scenario;
    if (std::find(allowed.begin(), allowed.end(), sc.kind) == allowed.end()) {
        std::cerr << "error [KindMismatch]: scenario kind " << kind_name(sc.kind)
                  << " does not belong to this subcommand\n";
        return kExitValidation;
    }
    if (o.seed) sc.seed = *o.seed;

    scenario::RunOptions opts;
    opts.base_dir = fs::path(o.scenario_path).parent_path();
    if (!o.out_dir.empty()) opts.out_dir = o.out_dir;

    scenario::RunResult res;
    try {
        res = scenario::run_scenario(sc, opts);
    } catch (const NonFinite& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    const std::string body =
        o.format == "json" ? res.rep.to_json() : res.rep.to_table();
    std::cout << body;
    if (!o.out_dir.empty()) {
        fs::create_directories(o.out_dir);
        const auto name = o.format == "json" ? "report.json" : "report.txt";
        std::ofstream rf(fs::path(o.out_dir) / name);
        rf << body;
    }
    return kExitOk;
}

int run_verify(const std::string& profile_name, const std::string& format) {
    const auto profile = profile_name == "strict" ? scenario::ToleranceProfile::strict
                                                  : scenario::ToleranceProfile::paper;
    const auto tables = scenario::verify_paper(profile);
    bool all_pass = true;
    if (format == "json") {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& t : tables) {
            j.push_back(report::comparison_to_json(t));
            all_pass = all_pass && t.all_pass();
        }
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& t : tables) {
            std::cout << report::comparison_to_table(t);
            all_pass = all_pass && t.all_pass();
        }
        std::cout << (all_pass ? "verify-paper: ALL PASS" : "verify-paper: FAIL") << "\n";
    }
    return all_pass ? kExitOk : kExitFixtureMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moltrap: trapped-molecule magnetic resonance simulator"};
    app.require_subcommand(1);

    CommonOpts derive_o, readout_o, protocol_o, circuit_o;
    auto* derive = app.add_subcommand("derive", "derive trap parameters (ion or optical)");
    add_common(derive, derive_o, true);
    auto* readout = app.add_subcommand("readout", "spin readout via resonant drive");
    add_common(readout, readout_o, true);
    auto* protocol =
        app.add_subcommand("protocol", "gradient-inversion background cancellation");
    add_common(protocol, protocol_o, true);
    auto* circuit = app.add_subcommand("circuit", "run a register circuit file");
    add_common(circuit, circuit_o, true);

    std::string profile = "paper", verify_format = "table";
    auto* verify = app.add_subcommand("verify-paper", "run all regression fixtures");
    verify->add_option("--tolerance-profile", profile, "tolerance profile")
        ->check(CLI::IsMember({"paper", "strict"}));
    verify->add_option("--format", verify_format, "output format")
        ->check(CLI::IsMember({"table", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (derive->parsed()) {
            return run_one({scenario::Kind::derive_ion, scenario::Kind::derive_optical},
                           derive_o);
        }
        if (readout->parsed()) return run_one({scenario::Kind::readout}, readout_o);
        if (protocol->parsed()) return run_one({scenario::Kind::protocol}, protocol_o);
        if (circuit->parsed()) return run_one({scenario::Kind::circuit}, circuit_o);
        if (verify->parsed()) return run_verify(profile, verify_format);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
