#include "hjhopf/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "hjhopf/output.hpp"
#include "hjhopf/parallel.hpp"
#include "hjhopf/quadrature.hpp"
#include "hjhopf/regularity.hpp"

namespace hjhopf::cli {
namespace {

struct Outcome {
    Json record;
    std::optional<CsvTable> table;
    bool inconclusive = false;
};

struct Context {
    const Invocation& inv;
    ProblemSetup setup;
    const HJProblem& prob;
    std::uint64_t seed;
    Json grids = Json::object();
};

Json jpoint(const Vec& v) {
    if (v.size() == 1) return json_number(v[0]);
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(json_number(v[i]));
    return a;
}

Json jbox(const Box& b) {
    Json a = Json::array();
    for (int i = 0; i < b.dim(); ++i) a.push_back(Json::array({json_number(b.lo[i]), json_number(b.hi[i])}));
    return a;
}

Json jgradient(const GradientPair& g) { return Json{{"u_t", json_number(g.p)}, {"u_x", jpoint(g.q)}}; }

Json jset(const MaximizerSet& ms) {
    Json pts = Json::array(), vals = Json::array();
    for (const Vec& p : ms.points) pts.push_back(jpoint(p));
    for (double v : ms.values) vals.push_back(json_number(v));
    Json j{{"u", json_number(ms.value)}, {"ell", pts}, {"values", vals}, {"cluster_count", ms.cluster_count},
           {"boundary_contact", ms.boundary_contact}};
    j["runner_up"] = ms.runner_up ? json_number(*ms.runner_up) : Json(nullptr);
    return j;
}

std::vector<std::string> point_columns(const char* prefix, int n) {
    std::vector<std::string> cols;
    if (n == 1) {
        cols.emplace_back(prefix);
    } else {
        for (int i = 1; i <= n; ++i) cols.push_back(prefix + std::to_string(i));
    }
    return cols;
}

void append_point(std::vector<std::string>& row, const Vec& v) {
    for (int i = 0; i < v.size(); ++i) row.push_back(CsvTable::field(v[i]));
}

const std::string& arg(const Context& c, std::size_t i, const char* name) {
    if (i >= c.inv.args.size()) throw ConfigError(c.inv.command + ": missing argument <" + name + ">");
    return c.inv.args[i];
}

void expect_args(const Context& c, std::size_t count) {
    if (c.inv.args.size() > count) throw ConfigError(c.inv.command + ": too many arguments");
}

double arg_time(const Context& c, std::size_t i) { return parse_number(arg(c, i, "t"), "t"); }

Vec arg_point(const Context& c, std::size_t i, const char* name) {
    const Vec v = parse_point(arg(c, i, name), name);
    if (v.size() != c.prob.dim()) throw ConfigError(std::string(name) + " must have " + std::to_string(c.prob.dim()) + " coordinates");
    return v;
}

Box sample_box(const Context& c, const char* section) {
    if (auto b = c.inv.config.box(section, "x_box")) {
        if (b->dim() != c.prob.dim()) throw ConfigError(std::string(section) + ".x_box dimension mismatch");
        return *b;
    }
    return c.setup.sample_box.value_or(Box::cube(c.prob.dim(), -1, 1));
}

int positive(const ConfigFile& cfg, const char* section, const char* key, int fallback, int minimum = 1) {
    const int v = cfg.integer(section, key, fallback);
    if (v < minimum) throw ConfigError(std::string(section) + "." + key + " must be at least " + std::to_string(minimum));
    return v;
}

Outcome cmd_eval(Context& c) {
    expect_args(c, 2);
    const double t = arg_time(c, 0);
    const Vec x = arg_point(c, 1, "x");
    const PointReport r = classify_from(c.prob, t, x, evaluate(c.prob, t, x));
    Outcome o;
    o.record = {{"t", json_number(t)}, {"x", jpoint(x)}};
    o.record.update(jset(r.ell));
    o.record["verdict"] = to_string(r.verdict);
    o.record["gradient"] = r.gradient ? jgradient(*r.gradient) : Json(nullptr);
    Json reach = Json::array();
    for (const auto& g : r.reachable) reach.push_back(jgradient(g));
    o.record["reachable"] = reach;
    o.record["value_tolerance"] = json_number(r.ell.value_tolerance);
    o.inconclusive = r.verdict == PointVerdict::Borderline;
    return o;
}

Outcome cmd_grid(Context& c) {
    expect_args(c, 0);
    const ConfigFile& cfg = c.inv.config;
    const double T = c.prob.horizon();
    const double t_lo = cfg.number("grid", "t_lo", T / 10), t_hi = cfg.number("grid", "t_hi", T);
    if (!(t_lo >= 0 && t_hi <= T && t_lo <= t_hi)) throw ConfigError("grid time range must satisfy 0 <= t_lo <= t_hi <= T");
    const int t_count = positive(cfg, "grid", "t_count", 10);
    const int x_count = positive(cfg, "grid", "x_count", 21, 2);
    const Box box = sample_box(c, "grid");
    c.grids["t_count"] = t_count;
    c.grids["x_count"] = x_count;
    const std::vector<double> ts = t_count == 1 ? std::vector<double>{t_lo} : linspace(t_lo, t_hi, t_count);
    const std::vector<Vec> xs = tensor_grid(box, x_count);
    const int n = c.prob.dim();
    std::vector<std::string> header{"t"};
    for (auto& col : point_columns("x", n)) header.push_back(col);
    for (const char* col : {"u", "cluster_count", "verdict"}) header.emplace_back(col);
    Outcome o;
    o.table.emplace(header);
    Json rows = Json::array();
    int counts[3] = {0, 0, 0};
    for (double t : ts) {
        const auto reports = parallel_map(xs.size(), [&](std::size_t i) {
            return classify_from(c.prob, t, xs[i], evaluate(c.prob, t, xs[i]));
        });
        for (const PointReport& r : reports) {
            std::vector<std::string> row{CsvTable::field(t)};
            append_point(row, r.x);
            row.push_back(CsvTable::field(r.u));
            row.push_back(CsvTable::field(static_cast<long long>(r.ell.cluster_count)));
            row.push_back(to_string(r.verdict));
            o.table->add_row(std::move(row));
            rows.push_back({{"t", json_number(t)}, {"x", jpoint(r.x)}, {"u", json_number(r.u)},
                            {"cluster_count", r.ell.cluster_count}, {"verdict", to_string(r.verdict)}});
            ++counts[static_cast<int>(r.verdict)];
        }
    }
    o.record = {{"x_box", jbox(box)},
                {"t_range", Json::array({json_number(t_lo), json_number(t_hi)})},
                {"regular", counts[0]},
                {"singular", counts[1]},
                {"borderline", counts[2]},
                {"rows", rows}};
    return o;
}

Outcome cmd_char(Context& c) {
    expect_args(c, 0);
    const auto ytext = c.inv.config.get("char", "y");
    if (!ytext) throw ConfigError("char: --y is required");
    const Vec y = parse_point(*ytext, "y");
    if (y.size() != c.prob.dim()) throw ConfigError("y has the wrong dimension");
    const int samples = positive(c.inv.config, "char", "samples", 65, 2);
    c.grids["samples"] = samples;
    const Characteristic ch = make_characteristic(c.prob, y);
    const int n = c.prob.dim();
    std::vector<std::string> header{"t"};
    for (auto& col : point_columns("x", n)) header.push_back(col);
    header.emplace_back("v");
    Outcome o;
    o.table.emplace(header);
    Json pts = Json::array();
    for (double t : linspace(0.0, c.prob.horizon(), samples)) {
        const Vec x = curve_point(c.prob, y, t);
        const double v = classical_value(c.prob, y, t);
        std::vector<std::string> row{CsvTable::field(t)};
        append_point(row, x);
        row.push_back(CsvTable::field(v));
        o.table->add_row(std::move(row));
        pts.push_back({{"t", json_number(t)}, {"x", jpoint(x)}, {"v", json_number(v)}});
    }
    o.record = {{"y", jpoint(y)}, {"p", jpoint(ch.p)}, {"samples", pts}};
    return o;
}

Outcome cmd_lstar(Context& c) {
    expect_args(c, 2);
    const double t = arg_time(c, 0);
    const Vec x = arg_point(c, 1, "x");
    const InitialPoints ip = ell_star(c.prob, t, x);
    const MaximizerSet ell = evaluate(c.prob, t, x);
    c.grids["lstar_seeds"] = ip.seeds;
    const int n = c.prob.dim();
    std::vector<std::string> header = point_columns("y", n);
    for (const char* col : {"residual", "type", "distance", "borderline"}) header.emplace_back(col);
    Outcome o;
    o.table.emplace(header);
    Json roots = Json::array();
    for (std::size_t i = 0; i < ip.roots.size(); ++i) {
        const CharClassification cc = classify_char(c.prob, t, x, ip.roots[i], ell);
        roots.push_back({{"y", jpoint(ip.roots[i])},
                         {"residual", json_number(ip.residuals[i])},
                         {"type", to_string(cc.kind)},
                         {"distance", json_number(cc.distance)},
                         {"borderline", cc.borderline}});
        std::vector<std::string> row;
        append_point(row, ip.roots[i]);
        row.push_back(CsvTable::field(ip.residuals[i]));
        row.push_back(to_string(cc.kind));
        row.push_back(CsvTable::field(cc.distance));
        row.push_back(cc.borderline ? "true" : "false");
        o.table->add_row(std::move(row));
        o.inconclusive = o.inconclusive || cc.borderline;
    }
    o.record = {{"t", json_number(t)}, {"x", jpoint(x)}, {"best_effort", ip.best_effort}, {"roots", roots}};
    o.record["ell"] = jset(ell)["ell"];
    return o;
}

Outcome cmd_theta(Context& c) {
    expect_args(c, 3);
    const double t = arg_time(c, 0);
    const Vec x = arg_point(c, 1, "x");
    const Vec y0 = arg_point(c, 2, "y0");
    const ThetaResult th = transition_theta(c.prob, t, x, y0);
    Json probes = Json::array();
    for (const auto& [s, v] : th.probes) probes.push_back({{"s", json_number(s)}, {"sole_maximizer", v}});
    Outcome o;
    o.record = {{"t", json_number(t)},          {"x", jpoint(x)},
                {"y0", jpoint(y0)},             {"theta", json_number(0.5 * (th.lo + th.hi))},
                {"lo", json_number(th.lo)},     {"hi", json_number(th.hi)},
                {"width", json_number(th.hi - th.lo)}, {"probes", probes}};
    return o;
}

Outcome cmd_strip(Context& c) {
    expect_args(c, 0);
    const int levels = positive(c.inv.config, "strip", "t_levels", 64, 2);
    const int x_grid = positive(c.inv.config, "strip", "x_grid", 128, 2);
    const Box box = sample_box(c, "strip");
    const StripReport s = strip_scan(c.prob, box, levels, x_grid);
    c.grids["t_levels"] = s.t_levels;
    c.grids["x_grid"] = s.x_grid;
    c.grids["curve_nodes"] = s.curve_nodes;
    Outcome o;
    o.table.emplace(std::vector<std::string>{"t", "singleton_ok", "injective_ok", "all_type1_ok"});
    Json lv = Json::array();
    const auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    for (const StripLevel& l : s.levels) {
        lv.push_back({{"t", json_number(l.t)},
                      {"singleton_ok", l.singleton_ok},
                      {"injective_ok", l.injective_ok},
                      {"all_type1_ok", l.all_type1_ok}});
        o.table->add_row({CsvTable::field(l.t), b(l.singleton_ok), b(l.injective_ok), b(l.all_type1_ok)});
    }
    o.record = {{"t_star", json_number(s.t_star)},
                {"x_box", jbox(box)},
                {"resolution", {{"t_levels", s.t_levels}, {"x_grid", s.x_grid}, {"curve_nodes", s.curve_nodes},
                                {"crossing_evaluations", s.refinements}}},
                {"levels", lv}};
    return o;
}

Outcome cmd_trace(Context& c) {
    expect_args(c, 2);
    const double t = arg_time(c, 0);
    const Vec x = arg_point(c, 1, "x");
    const auto eps = c.inv.config.number("trace", "eps");
    if (!eps) throw ConfigError("trace: --eps is required");
    const double t_end = c.inv.config.number("trace", "t_end", c.prob.horizon());
    const SingularTrace tr = trace_singularities(c.prob, t, x, *eps, t_end);
    c.grids["ball_grid"] = tr.ball_grid;
    const int n = c.prob.dim();
    std::vector<std::string> header{"t"};
    for (auto& col : point_columns("x", n)) header.push_back(col);
    header.emplace_back("clusters");
    Outcome o;
    o.table.emplace(header);
    Json steps = Json::array();
    for (const TraceStep& s : tr.steps) {
        Json js{{"t", json_number(s.t)}, {"x", jpoint(s.x)}};
        js["ell"] = jset(s.ell)["ell"];
        js["u"] = json_number(s.ell.value);
        steps.push_back(js);
        std::vector<std::string> row{CsvTable::field(s.t)};
        append_point(row, s.x);
        row.push_back(CsvTable::field(static_cast<long long>(s.ell.points.size())));
        o.table->add_row(std::move(row));
    }
    o.record = {{"seed", {{"t", json_number(tr.t0)}, {"x", jpoint(tr.x0)}}},
                {"epsilon", json_number(tr.epsilon)},
                {"delta", json_number(tr.delta)},
                {"t_end", json_number(tr.t_end)},
                {"terminated", to_string(tr.terminated)},
                {"gap_time", tr.gap_time ? json_number(*tr.gap_time) : Json(nullptr)},
                {"ball_grid", tr.ball_grid},
                {"steps", steps}};
    o.inconclusive = tr.terminated == TraceEnd::Gap;
    return o;
}

Outcome cmd_verify(Context& c) {
    expect_args(c, 0);
    const int samples = positive(c.inv.config, "verify", "samples", 50);
    const int membership_points = positive(c.inv.config, "verify", "membership_points", 3, 0);
    const Box box = sample_box(c, "verify");
    const HJProblem& prob = c.prob;
    const int n = prob.dim();
    const double T = prob.horizon();
    const double h = 1e-5;
    const int brute_grid = n == 1 ? 4096 : (n == 2 ? 256 : 32);
    c.grids["samples"] = samples;
    c.grids["brute"] = brute_grid;

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, Vec>> pts;
    for (int i = 0; i < samples; ++i) {
        const double t = T * (0.02 + 0.96 * unit(rng));
        Vec x(n);
        for (int k = 0; k < n; ++k) x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * unit(rng);
        pts.emplace_back(t, x);
    }

    struct Sample {
        PointVerdict verdict = PointVerdict::Singular;
        double residual = -1;
        double gradient_gap = -1;
        double oracle_gap = 0;
    };
    const auto results = parallel_map(pts.size(), [&](std::size_t i) {
        const auto& [t, x] = pts[i];
        Sample s;
        const PointReport r = classify_point(prob, t, x);
        s.verdict = r.verdict;
        s.oracle_gap = std::abs(r.u - argmax_brute(prob, t, x, brute_grid).value);
        if (r.verdict == PointVerdict::Regular) {
            s.residual = pde_residual(prob, t, x, h);
            if (const auto g = fd_gradient(prob, t, x, h))
                s.gradient_gap = std::hypot(g->p - r.gradient->p, distance(g->q, r.gradient->q));
        }
        return s;
    });

    int counts[3] = {0, 0, 0};
    double max_res = 0, max_grad = 0, max_oracle = 0;
    int res_checked = 0, grad_checked = 0, grad_viol = 0;
    const double grad_tol = std::max(1e-3, 10 * h);
    for (const Sample& s : results) {
        ++counts[static_cast<int>(s.verdict)];
        max_oracle = std::max(max_oracle, s.oracle_gap);
        if (s.residual >= 0) {
            ++res_checked;
            max_res = std::max(max_res, s.residual);
        }
        if (s.gradient_gap >= 0) {
            ++grad_checked;
            max_grad = std::max(max_grad, s.gradient_gap);
            if (s.gradient_gap > grad_tol) ++grad_viol;
        }
    }

    int mem_checked = 0, mem_coherent = 0, mem_inconclusive = 0;
    for (std::size_t i = 0; i < pts.size() && mem_checked < membership_points; ++i) {
        if (results[i].verdict != PointVerdict::Regular) continue;
        const auto& [t, x] = pts[i];
        const PointReport r = classify_point(prob, t, x);
        const auto sup = membership_halfdiff(prob, t, x, r.gradient->p, r.gradient->q, Side::Super, c.seed);
        const auto sub = membership_halfdiff(prob, t, x, r.gradient->p, r.gradient->q, Side::Sub, c.seed);
        ++mem_checked;
        if (sup.verdict == Membership::Inconclusive || sub.verdict == Membership::Inconclusive) ++mem_inconclusive;
        else if (sup.verdict == Membership::Member && sub.verdict == Membership::Member) ++mem_coherent;
    }

    const bool passed = max_res <= 1e-3 && grad_viol == 0 && max_oracle <= 1e-6 &&
                        mem_coherent + mem_inconclusive == mem_checked;
    Outcome o;
    o.record = {{"x_box", jbox(box)},
                {"samples", samples},
                {"regular", counts[0]},
                {"singular", counts[1]},
                {"borderline", counts[2]},
                {"pde_residual", {{"h", json_number(h)}, {"checked", res_checked}, {"max", json_number(max_res)},
                                  {"bound", json_number(1e-3)}}},
                {"gradient_consistency", {{"checked", grad_checked}, {"max_deviation", json_number(max_grad)},
                                          {"tolerance", json_number(grad_tol)}, {"violations", grad_viol}}},
                {"membership", {{"checked", mem_checked}, {"coherent", mem_coherent},
                                {"inconclusive", mem_inconclusive}}},
                {"oracle", {{"grid", brute_grid}, {"max_value_gap", json_number(max_oracle)},
                            {"bound", json_number(1e-6)}}},
                {"passed", passed}};
    o.inconclusive = mem_inconclusive > 0;
    return o;
}

Outcome cmd_conjugate(Context& c) {
    expect_args(c, 1);
    const Vec q = arg_point(c, 0, "q");
    const double value = c.prob.sigma_star(q);
    const ConjugatePoint num = conjugate_numeric(c.prob.sigma(), q);
    Outcome o;
    o.record = {{"q", jpoint(q)},
                {"value", json_number(value)},
                {"in_domain", std::isfinite(value)},
                {"source", c.prob.sigma_star_override() ? "closed-form" : "numeric"},
                {"numeric", {{"value", json_number(num.value)},
                             {"argmax", std::isfinite(num.value) ? jpoint(num.argmax) : Json(nullptr)},
                             {"boundary", num.boundary}}}};
    return o;
}

Outcome cmd_check_a1(Context& c) {
    expect_args(c, 2);
    const double t = arg_time(c, 0);
    const Vec x = arg_point(c, 1, "x");
    const auto r = c.inv.config.number("check-a1", "r");
    if (!r) throw ConfigError("check-a1: --r is required");
    const int samples = positive(c.inv.config, "check-a1", "samples", 64);
    c.grids["samples"] = samples;
    const A1Report rep = check_A1(c.prob, t, x, *r, samples, c.seed);
    Outcome o;
    o.record = {{"t", json_number(t)},
                {"x", jpoint(x)},
                {"r", json_number(*r)},
                {"verdict", to_string(rep.verdict)},
                {"samples", rep.samples},
                {"min_boundary_distance", json_number(rep.min_boundary_distance)},
                {"margin", json_number(0.01 * c.prob.q_box().diameter())}};
    o.record["witness"] = rep.witness
                              ? Json{{"t", json_number(rep.witness->first)}, {"x", jpoint(rep.witness->second)}}
                              : Json(nullptr);
    o.inconclusive = rep.verdict == Verdict::Inconclusive;
    return o;
}

using Handler = std::function<Outcome(Context&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"eval", cmd_eval},   {"grid", cmd_grid},   {"char", cmd_char},     {"lstar", cmd_lstar},
        {"theta", cmd_theta}, {"strip", cmd_strip}, {"trace", cmd_trace},   {"verify", cmd_verify},
        {"conjugate", cmd_conjugate}, {"check-a1", cmd_check_a1},
    };
    return h;
}

Json problem_json(const ProblemSetup& s) {
    const HJProblem& p = *s.problem;
    Json j{{"name", s.label}, {"n", p.dim()}, {"T", json_number(p.horizon())},
           {"H", p.hamiltonian().to_string()}, {"sigma", p.sigma().sigma().to_string()},
           {"q_box", jbox(p.q_box())}, {"a2", to_string(p.a2().kind)}};
    if (!s.catalog_params.empty()) {
        Json params = Json::object();
        for (const auto& [k, v] : s.catalog_params) params[k] = json_number(v);
        j["params"] = params;
    }
    return j;
}

Json meta_json(const Context& c) {
    const int n = c.prob.dim();
    Json grids{{"evaluate", evaluate_grid(n)}, {"conjugate", n == 3 ? 24 : 64}};
    for (auto it = c.grids.begin(); it != c.grids.end(); ++it) grids[it.key()] = it.value();
    return {{"quadrature_tol", json_number(kQuadratureTol)},
            {"cluster_radius", json_number(c.prob.cluster_radius())},
            {"value_tolerance", "1e-9*(1+|u|)"},
            {"match_tolerance", json_number(c.prob.match_tolerance())},
            {"grids", grids},
            {"seed", c.seed}};
}

std::uint64_t parse_seed(const ConfigFile& cfg) {
    const auto s = cfg.get("run", "seed");
    if (!s) return 1;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(*s, &used);
        if (used != s->size()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("run.seed must be a non-negative integer");
    }
}

bool parse_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(what + " must be true or false");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"eval",  "grid",   "char",   "lstar",     "theta",
                                                "strip", "trace",  "verify", "conjugate", "check-a1"};
    return names;
}

int report_error(const std::string& command, const std::string& kind, const std::string& message, int code,
                 std::ostream& out, std::ostream& err) {
    Json rec{{"command", command}, {"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}};
    out << dump_json(rec);
    err << "hjhopf" << (command.empty() ? "" : " " + command) << ": " << message << "\n";
    return code;
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
    const auto fail = [&](const char* kind, const std::string& message, int code) {
        return report_error(inv.command, kind, message, code, out, err);
    };
    try {
        const auto it = handlers().find(inv.command);
        if (it == handlers().end()) throw ConfigError("unknown command '" + inv.command + "'");
        const std::string format = inv.config.get_or("output", "format", "json");
        if (format != "json" && format != "csv") throw ConfigError("output.format must be json or csv");
        const bool strict = parse_bool(inv.config.get_or("run", "strict", "false"), "run.strict");
        ProblemSetup setup = build_problem(inv.config);
        const HJProblem& prob = *setup.problem;
        Context ctx{inv, std::move(setup), prob, parse_seed(inv.config)};

        Outcome o = it->second(ctx);
        Json record{{"command", inv.command}, {"problem", problem_json(ctx.setup)}, {"meta", meta_json(ctx)}};
        record["result"] = o.record;
        record["inconclusive"] = o.inconclusive;

        std::string primary;
        if (format == "csv") {
            if (!o.table) throw ConfigError(inv.command + " has no CSV form");
            std::ostringstream ss;
            o.table->write(ss);
            primary = ss.str();
        } else {
            primary = dump_json(record);
        }
        if (const auto csv = inv.config.get("output", "csv")) {
            if (!o.table) throw ConfigError(inv.command + " has no CSV form");
            std::ostringstream ss;
            o.table->write(ss);
            write_text(*csv, ss.str());
        }
        if (const auto path = inv.config.get("output", "path")) write_text(*path, primary);
        else out << primary;
        return strict && o.inconclusive ? kExitInconclusive : kExitOk;
    } catch (const ConfigError& e) {
        return fail("config", e.what(), kExitConfig);
    } catch (const PreconditionError& e) {
        return fail("precondition", e.what(), kExitConfig);
    } catch (const NumericError& e) {
        return fail("numeric", e.what(), kExitNumeric);
    } catch (const DomainError& e) {
        return fail("domain", e.what(), kExitNumeric);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kExitNumeric);
    }
}

}  // namespace hjhopf::cli
