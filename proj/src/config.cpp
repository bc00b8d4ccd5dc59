#include "hjhopf/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace hjhopf::cli {
namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"problem",
         {"catalog", "name", "n", "T", "H", "sigma", "sigma_star", "x_box", "q_box", "y_box", "a2", "a2_g", "a2_h",
          "a2_k", "lipschitz", "q_lo", "q_hi"}},
        {"grid", {"t_lo", "t_hi", "t_count", "x_box", "x_count"}},
        {"char", {"y", "samples"}},
        {"strip", {"t_levels", "x_grid", "x_box"}},
        {"trace", {"eps", "t_end"}},
        {"verify", {"samples", "x_box", "membership_points"}},
        {"check-a1", {"r", "samples"}},
        {"output", {"path", "format", "csv"}},
        {"run", {"seed", "strict"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void check_key(const std::string& section, const std::string& key, const std::string& where) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError(where + "unknown section [" + section + "]");
    if (!it->second.count(key)) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

}  // namespace

double parse_number(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    if (s.empty()) throw ConfigError(what + ": empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw ConfigError(what + ": '" + s + "' is not a finite number");
    return v;
}

Vec parse_point(const std::string& text, const std::string& what) {
    const auto parts = split(text, ',');
    if (parts.empty() || static_cast<int>(parts.size()) > kMaxDim)
        throw ConfigError(what + ": expected 1 to 3 comma-separated coordinates");
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(parse_number(p, what));
    return Vec(std::span<const double>(v));
}

Box parse_box(const std::string& text, const std::string& what) {
    std::vector<double> lo, hi;
    std::size_t pos = 0;
    const std::string s = trim(text);
    while (pos < s.size()) {
        const auto open = s.find('[', pos);
        if (open == std::string::npos) break;
        const auto close = s.find(']', open);
        if (close == std::string::npos) throw ConfigError(what + ": unbalanced '['");
        const std::string between = trim(s.substr(pos, open - pos));
        if (!lo.empty() ? (between != "x" && between != "*") : !between.empty())
            throw ConfigError(what + ": expected intervals like [lo,hi] x [lo,hi]");
        const auto parts = split(s.substr(open + 1, close - open - 1), ',');
        if (parts.size() != 2) throw ConfigError(what + ": each interval needs exactly lo,hi");
        lo.push_back(parse_number(parts[0], what));
        hi.push_back(parse_number(parts[1], what));
        pos = close + 1;
    }
    if (!trim(s.substr(std::min(pos, s.size()))).empty() || lo.empty())
        throw ConfigError(what + ": expected intervals like [lo,hi] x [lo,hi]");
    if (static_cast<int>(lo.size()) > kMaxDim) throw ConfigError(what + ": at most 3 axes");
    try {
        return Box(Vec(std::span<const double>(lo)), Vec(std::span<const double>(hi)));
    } catch (const Error& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section)) throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        check_key(section, key, where);
        if (cfg.has(section, key)) throw ConfigError(where + "duplicate key '" + key + "'");
        cfg.data_[section][key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
    check_key(section, key, "");
    data_[section][key] = value;
}

void ConfigFile::set_dotted(const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("override '" + assignment + "' must look like section.key=value");
    set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)), trim(assignment.substr(eq + 1)));
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto it = data_.find(section);
    return it != data_.end() && it->second.count(key);
}

std::optional<std::string> ConfigFile::get(const std::string& section, const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return data_.at(section).at(key);
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
    return get(section, key).value_or(fallback);
}

std::optional<double> ConfigFile::number(const std::string& section, const std::string& key) const {
    const auto v = get(section, key);
    if (!v) return std::nullopt;
    return parse_number(*v, section + "." + key);
}

double ConfigFile::number(const std::string& section, const std::string& key, double fallback) const {
    return number(section, key).value_or(fallback);
}

int ConfigFile::integer(const std::string& section, const std::string& key, int fallback) const {
    const auto v = number(section, key);
    if (!v) return fallback;
    if (*v != std::floor(*v) || std::abs(*v) > 1e9) throw ConfigError(section + "." + key + " must be an integer");
    return static_cast<int>(*v);
}

std::optional<Box> ConfigFile::box(const std::string& section, const std::string& key) const {
    const auto v = get(section, key);
    if (!v) return std::nullopt;
    return parse_box(*v, section + "." + key);
}

ProblemSetup build_problem(const ConfigFile& cfg) {
    ProblemSetup out;
    if (const auto name = cfg.get("problem", "catalog")) {
        for (const char* key : {"n", "H", "sigma", "sigma_star", "x_box", "q_box", "y_box", "a2", "a2_g", "a2_h", "a2_k",
                                "lipschitz", "name"})
            if (cfg.has("problem", key))
                throw ConfigError(std::string("problem.") + key + " cannot be combined with a catalog problem");
        for (const char* key : {"T", "q_lo", "q_hi"})
            if (const auto v = cfg.number("problem", key)) out.catalog_params[key] = *v;
        CatalogEntry e = catalog(*name, out.catalog_params);
        out.problem = e.problem;
        out.sample_box = e.sample_box;
        out.label = *name;
        return out;
    }

    const auto need = [&](const char* key) {
        const auto v = cfg.get("problem", key);
        if (!v) throw ConfigError(std::string("problem.") + key + " is required for an inline problem");
        return *v;
    };
    const int n = cfg.integer("problem", "n", 1);
    if (n < 1 || n > kMaxDim) throw ConfigError("problem.n must be 1, 2 or 3");
    ProblemSpec s;
    s.name = cfg.get_or("problem", "name", "inline");
    s.T = parse_number(need("T"), "problem.T");
    s.H = expr::Expr::parse(need("H"), n);
    s.q_box = parse_box(need("q_box"), "problem.q_box");
    const Box x_box = cfg.box("problem", "x_box").value_or(Box::cube(n, -20, 20));
    std::optional<expr::Expr> star;
    if (const auto v = cfg.get("problem", "sigma_star")) star = expr::Expr::parse(*v, n);
    s.sigma = std::make_shared<const ConvexData>(expr::Expr::parse(need("sigma"), n), x_box, star,
                                                 cfg.number("problem", "lipschitz"));
    s.sigma_star = star;
    s.y_box = cfg.box("problem", "y_box");
    s.a2.kind = a2_kind_from_string(cfg.get_or("problem", "a2", "unclassified"));
    if (s.a2.kind == A2Kind::Separable)
        s.a2.parts = SeparableParts{expr::Expr::parse(need("a2_g"), n), expr::Expr::parse(need("a2_h"), n),
                                    expr::Expr::parse(cfg.get_or("problem", "a2_k", "0"), n)};
    if (s.q_box.dim() != n || x_box.dim() != n) throw ConfigError("box dimensions must match problem.n");
    out.label = s.name;
    out.problem = std::make_shared<const HJProblem>(std::move(s));
    return out;
}

}  // namespace hjhopf::cli
