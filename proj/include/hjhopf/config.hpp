#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hjhopf/problem.hpp"

namespace hjhopf::cli {

/// Flat `key = value` text grouped under `[section]` headers. `#` and `;` start
/// comments. Keys are checked against a fixed schema; duplicates are rejected.
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");
    static ConfigFile load(const std::string& path);

    /// Sets or replaces a value; `section.key` form for command-line overrides.
    void set(const std::string& section, const std::string& key, const std::string& value);
    void set_dotted(const std::string& assignment);

    bool has(const std::string& section, const std::string& key) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;
    double number(const std::string& section, const std::string& key, double fallback) const;
    std::optional<double> number(const std::string& section, const std::string& key) const;
    int integer(const std::string& section, const std::string& key, int fallback) const;
    std::optional<Box> box(const std::string& section, const std::string& key) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const noexcept { return data_; }

private:
    std::map<std::string, std::map<std::string, std::string>> data_;
};

double parse_number(const std::string& text, const std::string& what);
/// "0.4" or "0.4, -1" (one coordinate per axis).
Vec parse_point(const std::string& text, const std::string& what);
/// "[-3,3]" or "[-3,3] x [-1,2]"; one bracket per axis.
Box parse_box(const std::string& text, const std::string& what);

struct ProblemSetup {
    std::shared_ptr<const HJProblem> problem;
    std::optional<Box> sample_box;  // catalog default or [verify] override
    std::string label;              // catalog name or inline name
    std::map<std::string, double> catalog_params;
};

/// Builds the problem from the [problem] section: `catalog = NAME` (with optional
/// T, q_lo, q_hi) or an inline definition (n, T, H, sigma, q_box, ...).
ProblemSetup build_problem(const ConfigFile& cfg);

}  // namespace hjhopf::cli
