#include "boutroux/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include "boutroux/errors.hpp"
#include "json.hpp"

namespace boutroux {

using json = nlohmann::ordered_json;

namespace {

std::string normalize(std::string s) {
    // unicode minus sign
    for (std::size_t p; (p = s.find("\xE2\x88\x92")) != std::string::npos;) s.replace(p, 3, "-");
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
}

double parse_double(const std::string& s, const std::string& field) {
    if (s.empty()) throw ConfigError(field + ": empty number");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(field + ": cannot parse number '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(field + ": trailing characters in '" + s + "'");
    return v;
}

cplx parse_complex_literal(const std::string& s, const std::string& field) {
    if (s.empty()) throw ConfigError(field + ": empty item");
    const char last = s.back();
    if (last != 'i' && last != 'j') return {parse_double(s, field), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : parse_double(re, field), parse_double(im, field)};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

cplx pair_from_json(const json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(field + ": expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> complex_list(const json& j, const std::string& field, bool phi) {
    if (j.is_string()) return phi ? parse_phi(j.get<std::string>()) : parse_points(j.get<std::string>());
    if (!j.is_array()) throw ConfigError(field + ": expected a list of [re, im] pairs or a string");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(pair_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (const cplx& z : v) a.push_back(to_json(z));
    return a;
}

json poly_json(const ComplexPoly& p) {
    json a = json::array();
    for (int k = 0; k <= p.degree(); ++k) a.push_back(to_json(p[k]));
    return a;
}

template <class T>
T get_field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(key) + ": wrong type");
    }
}

RunMode parse_mode(const std::string& m) {
    if (m == "solve") return RunMode::Solve;
    if (m == "trace-only") return RunMode::TraceOnly;
    throw ConfigError("mode: expected 'solve' or 'trace-only', got '" + m + "'");
}

const char* mode_name(RunMode m) { return m == RunMode::Solve ? "solve" : "trace-only"; }

json config_json(const RunConfig& c) {
    json j;
    j["points"] = to_json(c.spec.e_points);
    j["phi"] = to_json(c.spec.phi);
    j["t0"] = c.spec.t0;
    j["L"] = c.spec.L;
    j["seed"] = c.seed;
    j["seeds"] = c.seeds;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["dt0"] = c.dt0;
    j["quad_order"] = c.quad_order;
    j["mode"] = mode_name(c.mode);
    return j;
}

void apply_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    static const std::vector<std::string> known{"points", "phi",  "t0",        "L",   "seed",
                                                "seeds",  "tol",  "max_iter",  "dt0", "quad_order",
                                                "out",    "svg",  "mode",      "s_roots", "delta_roots"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("unknown config field '" + it.key() + "'");
    if (j.contains("points")) c.spec.e_points = complex_list(j["points"], "points", false);
    if (j.contains("phi")) c.spec.phi = complex_list(j["phi"], "phi", true);
    if (j.contains("t0")) c.spec.t0 = get_field<double>(j, "t0");
    if (j.contains("L")) c.spec.L = get_field<int>(j, "L");
    if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("seeds")) c.seeds = get_field<int>(j, "seeds");
    if (j.contains("tol")) c.tol = get_field<double>(j, "tol");
    if (j.contains("max_iter")) c.max_iter = get_field<int>(j, "max_iter");
    if (j.contains("dt0")) c.dt0 = get_field<double>(j, "dt0");
    if (j.contains("quad_order")) c.quad_order = get_field<int>(j, "quad_order");
    if (j.contains("out")) c.out = get_field<std::string>(j, "out");
    if (j.contains("svg")) c.svg = get_field<std::string>(j, "svg");
    if (j.contains("mode")) c.mode = parse_mode(get_field<std::string>(j, "mode"));
    if (j.contains("s_roots")) c.s_roots = complex_list(j["s_roots"], "s_roots", false);
    if (j.contains("delta_roots")) c.delta_roots = complex_list(j["delta_roots"], "delta_roots", false);
}

// A result file carries its config under "config" and the final roots.
json config_object(const json& doc) {
    if (!doc.is_object() || !doc.contains("schema")) return doc;
    json c = doc.at("config");
    if (doc.contains("S") && doc["S"].contains("roots")) c["s_roots"] = doc["S"]["roots"];
    if (doc.contains("Delta") && doc["Delta"].contains("roots")) c["delta_roots"] = doc["Delta"]["roots"];
    return c;
}

}  // namespace

std::vector<cplx> parse_points(const std::string& text) {
    const std::string s = normalize(text);
    if (s.empty()) throw ConfigError("points: empty list");
    std::vector<cplx> out;
    if (s.find(';') != std::string::npos) {
        for (const std::string& item : split(s, ';')) {
            const auto parts = split(item, ',');
            if (parts.size() != 2) throw ConfigError("points: item '" + item + "' is not 're,im'");
            out.emplace_back(parse_double(parts[0], "points"), parse_double(parts[1], "points"));
        }
    } else {
        for (const std::string& item : split(s, ',')) out.push_back(parse_complex_literal(item, "points"));
    }
    return out;
}

std::vector<cplx> parse_phi(const std::string& text) {
    const std::string s = normalize(text);
    std::vector<cplx> out;
    if (s.empty()) return out;
    for (const std::string& item : split(s, ';')) {
        if (item.size() < 2 || item.front() != '[' || item.back() != ']')
            throw ConfigError("phi: item '" + item + "' is not '[re,im]'");
        const auto parts = split(item.substr(1, item.size() - 2), ',');
        if (parts.size() != 2) throw ConfigError("phi: item '" + item + "' is not '[re,im]'");
        out.emplace_back(parse_double(parts[0], "phi"), parse_double(parts[1], "phi"));
    }
    return out;
}

DescentOptions RunConfig::descent_options() const {
    DescentOptions o;
    o.f_exit = tol;
    o.max_iter = max_iter;
    o.dt0 = dt0;
    o.quadrature.order = quad_order;
    return o;
}

void RunConfig::validate() const {
    spec.validate();
    if (!(tol > 0.0)) throw ConfigError("tol: must be positive");
    if (max_iter <= 0) throw ConfigError("max_iter: must be positive");
    if (!(dt0 > 0.0)) throw ConfigError("dt0: must be positive");
    if (quad_order < 2) throw ConfigError("quad_order: must be at least 2");
    if (seeds < 1) throw ConfigError("seeds: must be at least 1");
    if (mode == RunMode::TraceOnly) {
        const int lhs = 2 * static_cast<int>(s_roots.size()) + static_cast<int>(delta_roots.size());
        if (lhs != 2 * spec.R() - 2 + spec.N())
            throw ConfigError("trace-only: s_roots/delta_roots counts do not satisfy 2L + M - N = 2(R - 1)");
    }
}

RunConfig config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig c;
    apply_json(c, config_object(doc));
    return c;
}

RunConfig parse_config(const std::optional<std::string>& path, const ConfigOverrides& f) {
    RunConfig c;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw IoError("cannot read config file '" + *path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        c = config_from_json_text(ss.str());
    }
    if (f.points) c.spec.e_points = parse_points(*f.points);
    if (f.phi) c.spec.phi = parse_phi(*f.phi);
    if (f.t0) c.spec.t0 = *f.t0;
    if (f.L) c.spec.L = *f.L;
    if (f.seed) c.seed = *f.seed;
    if (f.seeds) c.seeds = *f.seeds;
    if (f.tol) c.tol = *f.tol;
    if (f.max_iter) c.max_iter = *f.max_iter;
    if (f.dt0) c.dt0 = *f.dt0;
    if (f.out) c.out = *f.out;
    if (f.svg) c.svg = *f.svg;
    if (f.mode) c.mode = parse_mode(*f.mode);
    c.validate();
    return c;
}

double root_set_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    if (a.empty()) return 0.0;
    std::vector<std::size_t> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    if (a.size() <= 8) {
        double best = std::numeric_limits<double>::infinity();
        do {
            double worst = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
            best = std::min(best, worst);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const cplx& z : a) {
        std::size_t k = 0;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(z - b[j]) < d) {
                d = std::abs(z - b[j]);
                k = j;
            }
        used[k] = true;
        worst = std::max(worst, d);
    }
    return worst;
}

MultiSeedResult run_seeds(const ProblemSpec& spec, std::uint64_t seed, int count, const DescentOptions& opts) {
    std::vector<std::future<DescentReport>> jobs;
    DescentOptions quiet = opts;
    quiet.observer = nullptr;
    for (int k = 0; k < count; ++k)
        jobs.push_back(std::async(std::launch::async, [&spec, quiet, s = seed + k] { return run(spec, s, quiet); }));
    MultiSeedResult res;
    for (int k = 0; k < count; ++k) res.runs.push_back({seed + static_cast<std::uint64_t>(k), jobs[k].get()});

    auto key = [](const DescentReport& r) {
        return std::pair{r.status == DescentStatus::Converged ? 0 : 1, r.F_history.back()};
    };
    for (int k = 0; k < count; ++k)
        if (res.best < 0 || key(res.runs[k].report) < key(res.runs[res.best].report)) res.best = k;

    res.agreement.assign(count, std::vector<double>(count, 0.0));
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j)
            res.agreement[i][j] = root_set_distance(res.runs[i].report.final_state.delta_roots,
                                                    res.runs[j].report.final_state.delta_roots);
    return res;
}

std::string result_json(const RunConfig& cfg, const DescentReport& report, const TrajectoryGraph* graph,
                        const MultiSeedResult* seeds) {
    const DifferentialState& st = report.final_state;
    json j;
    j["schema"] = 1;
    j["format"] = "complex numbers are [re, im]; polynomial coefficients are in ascending order";
    j["config"] = config_json(cfg);
    j["status"] = to_string(report.status);
    j["reason"] = report.reason;
    j["iterations"] = report.iterations;
    j["rejected_steps"] = report.rejected_steps;
    j["merges"] = report.merges;
    j["F"] = report.F_history.empty() ? 0.0 : report.F_history.back();
    j["L"] = st.L();
    j["M"] = st.M();
    j["genus"] = st.genus();
    j["S"] = {{"coefficients", poly_json(st.S)}, {"roots", to_json(st.s_roots)}};
    j["Delta"] = {{"coefficients", poly_json(st.delta)}, {"roots", to_json(st.delta_roots)}};
    j["T"] = to_json(report.final_periods.T);
    j["P"] = to_json(report.final_periods.P);
    j["F_log"] = report.F_history;
    if (graph) {
        json nodes = json::array();
        for (const CriticalPoint& n : graph->nodes)
            nodes.push_back({{"kind", to_string(n.kind)},
                             {"location", to_json(n.location)},
                             {"multiplicity", n.multiplicity},
                             {"directions", to_json(n.directions)}});
        json edges = json::array();
        for (const GraphEdge& e : graph->edges) {
            json je = {{"from", e.from},
                       {"to", e.to},
                       {"termination", to_string(e.termination)},
                       {"points", e.path.size()}};
            if (!e.error.empty()) je["error"] = e.error;
            edges.push_back(je);
        }
        j["graph"] = {{"nodes", nodes},
                      {"edges", edges},
                      {"launched", graph->launched},
                      {"components", graph->component_count()}};
    }
    if (seeds) {
        json runs = json::array();
        for (const SeedOutcome& o : seeds->runs)
            runs.push_back({{"seed", o.seed},
                            {"status", to_string(o.report.status)},
                            {"F", o.report.F_history.back()},
                            {"L", o.report.final_state.L()},
                            {"delta_roots", to_json(o.report.final_state.delta_roots)}});
        json table = json::array();
        for (const auto& row : seeds->agreement) {
            json r = json::array();
            for (double d : row) r.push_back(std::isfinite(d) ? json(d) : json(nullptr));
            table.push_back(r);
        }
        j["seeds"] = {{"runs", runs}, {"best", seeds->best}, {"agreement", table}};
    }
    return j.dump(2) + "\n";
}

std::string render_svg(const TrajectoryGraph& graph, const DifferentialState& state) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    auto grow = [&](cplx z) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    };
    for (const CriticalPoint& n : graph.nodes) grow(n.location);
    for (const cplx& z : state.spec.e_points) grow(z);
    for (const GraphEdge& e : graph.edges)
        if (e.bounded())
            for (const cplx& z : e.path) grow(z);
    double w = xmax - xmin, h = ymax - ymin;
    const double span = std::max({w, h, 1e-9});
    if (w < 0.05 * span) { xmin -= 0.025 * span; xmax += 0.025 * span; w = xmax - xmin; }
    if (h < 0.05 * span) { ymin -= 0.025 * span; ymax += 0.025 * span; h = ymax - ymin; }
    xmin -= 0.1 * w; xmax += 0.1 * w; ymin -= 0.1 * h; ymax += 0.1 * h;
    w = xmax - xmin;
    h = ymax - ymin;

    const double px = 600.0;
    const double sx = px / std::max(w, h);
    const double width = w * sx, height = h * sx;
    auto X = [&](cplx z) { return (z.real() - xmin) * sx; };
    auto Y = [&](cplx z) { return (ymax - z.imag()) * sx; };
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf,
                  "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%.2f\" height=\"%.2f\" "
                  "viewBox=\"0 0 %.2f %.2f\">\n",
                  width, height, width, height);
    out += buf;
    std::snprintf(buf, sizeof buf, "<rect x=\"0\" y=\"0\" width=\"%.2f\" height=\"%.2f\" fill=\"white\"/>\n", width,
                  height);
    out += buf;
    out += "<g fill=\"none\" stroke=\"green\" stroke-width=\"1.5\">\n";
    for (const GraphEdge& e : graph.edges) {
        if (e.path.size() < 2) continue;
        out += "<path d=\"";
        for (std::size_t i = 0; i < e.path.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.3f %.3f", i == 0 ? "M" : " L", X(e.path[i]), Y(e.path[i]));
            out += buf;
        }
        out += "\"/>\n";
    }
    out += "</g>\n";
    const double r = 4.0;
    for (const CriticalPoint& n : graph.nodes) {
        const cplx z = n.location;
        switch (n.kind) {
            case CriticalKind::SimplePoleE:
                std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.1f\" fill=\"red\"/>\n", X(z), Y(z), r);
                break;
            case CriticalKind::SimpleZeroDelta:
                std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.1f\" fill=\"black\"/>\n", X(z), Y(z), r);
                break;
            case CriticalKind::Stagnation:
                std::snprintf(buf, sizeof buf,
                              "<path d=\"M%.3f %.3f L%.3f %.3f M%.3f %.3f L%.3f %.3f\" stroke=\"black\" "
                              "stroke-width=\"2\"/>\n",
                              X(z) - r, Y(z) - r, X(z) + r, Y(z) + r, X(z) - r, Y(z) + r, X(z) + r, Y(z) - r);
                break;
        }
        out += buf;
    }
    out += "</svg>\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw IoError("write to '" + path + "' failed");
}

LogLevel log_level_from_env() {
    const char* v = std::getenv("BOUTROUX_LOG");
    if (!v) return LogLevel::Info;
    const std::string s(v);
    if (s == "quiet") return LogLevel::Quiet;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

}  // namespace boutroux
