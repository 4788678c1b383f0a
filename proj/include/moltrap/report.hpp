#ifndef MOLTRAP_REPORT_HPP
#define MOLTRAP_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "moltrap/errors.hpp"

namespace moltrap::report {

/// Fixed number formatting so identical runs produce identical bytes.
inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

/// Ordered key -> (value, unit) document; values are numeric or plain text.
struct Entry {
    std::string key;
    std::optional<double> number;
    std::string text;  // used when number is absent
    std::string unit;  // empty = dimensionless
};

struct Report {
    std::vector<Entry> entries;
    std::vector<std::string> notes;

    void add(const std::string& key, double value, const std::string& unit) {
        entries.push_back({key, value, {}, unit});
    }
    void add_text(const std::string& key, const std::string& value) {
        entries.push_back({key, std::nullopt, value, {}});
    }
    void note(const std::string& n) { notes.push_back(n); }

    const Entry* find(const std::string& key) const {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    }

    double value(const std::string& key) const {
        const Entry* e = find(key);
        if (!e || !e->number) throw KeyMismatch("report has no numeric key '" + key + "'");
        return *e->number;
    }

    std::string to_table() const {
        std::size_t w = 0;
        for (const auto& e : entries) w = std::max(w, e.key.size());
        std::string out;
        for (const auto& e : entries) {
            out += e.key;
            out.append(w - e.key.size() + 2, ' ');
            out += e.number ? format_value(*e.number) : e.text;
            if (!e.unit.empty()) out += " " + e.unit;
            out += "\n";
        }
        for (const auto& n : notes) out += "# " + n + "\n";
        return out;
    }

    std::string to_json() const {
        nlohmann::ordered_json j;
        for (const auto& e : entries) {
            nlohmann::ordered_json item;
            if (e.number) item["value"] = format_value(*e.number);
            else item["value"] = e.text;
            item["unit"] = e.unit;
            j[e.key] = item;
        }
        if (!notes.empty()) j["_notes"] = notes;
        return j.dump(2) + "\n";
    }
};

/// One expected value with a relative tolerance.
struct FixtureEntry {
    std::string key;
    double expected;
    double rel_tolerance;
};

struct ComparisonRow {
    std::string key;
    double actual, expected, rel_tolerance, rel_error;
    bool pass;
};

struct ComparisonTable {
    std::string name;
    std::vector<ComparisonRow> rows;
    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

/// Per-key relative-error verdicts. Tolerances get a 1e-9 relative slack so
/// a fixture sitting exactly on its bound does not flap on rounding.
inline ComparisonTable compare_to_fixture(const Report& rep,
                                          const std::vector<FixtureEntry>& fixture,
                                          const std::string& name = {}) {
    ComparisonTable table;
    table.name = name;
    for (const auto& f : fixture) {
        const double actual = rep.value(f.key);
        const double rel = std::abs(actual - f.expected) / std::abs(f.expected);
        table.rows.push_back({f.key, actual, f.expected, f.rel_tolerance, rel,
                              rel <= f.rel_tolerance * (1.0 + 1e-9)});
    }
    return table;
}

inline std::string comparison_to_table(const ComparisonTable& t) {
    std::string out;
    if (!t.name.empty()) out += "[" + t.name + "]\n";
    char buf[256];
    for (const auto& r : t.rows) {
        std::snprintf(buf, sizeof buf, "%-24s actual=%.6e expected=%.6e rel_err=%.3e tol=%.3e %s\n",
                      r.key.c_str(), r.actual, r.expected, r.rel_error, r.rel_tolerance,
                      r.pass ? "PASS" : "FAIL");
        out += buf;
    }
    return out;
}

inline nlohmann::ordered_json comparison_to_json(const ComparisonTable& t) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"key", r.key},
                        {"actual", format_value(r.actual)},
                        {"expected", format_value(r.expected)},
                        {"rel_error", format_value(r.rel_error)},
                        {"rel_tolerance", format_value(r.rel_tolerance)},
                        {"pass", r.pass}});
    }
    return {{"fixture", t.name}, {"pass", t.all_pass()}, {"rows", rows}};
}

}  // namespace moltrap::report

#endif  // MOLTRAP_REPORT_HPP
