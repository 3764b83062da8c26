#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boutroux/descent.hpp"
#include "boutroux/trajectories.hpp"

namespace boutroux {

enum class RunMode { Solve, TraceOnly };

struct RunConfig {
    ProblemSpec spec;
    std::uint64_t seed = 1;
    int seeds = 1;
    double tol = 1e-10;  // exit threshold on F
    int max_iter = 20000;
    double dt0 = 0.1;
    int quad_order = 32;
    std::string out;
    std::string svg;
    RunMode mode = RunMode::Solve;
    // trace-only input state
    std::vector<cplx> s_roots;
    std::vector<cplx> delta_roots;

    DescentOptions descent_options() const;
    void validate() const;
};

/// Command-line values; set fields override the config file.
struct ConfigOverrides {
    std::optional<std::string> points;
    std::optional<std::string> phi;
    std::optional<double> t0;
    std::optional<int> L;
    std::optional<std::uint64_t> seed;
    std::optional<int> seeds;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<double> dt0;
    std::optional<std::string> out;
    std::optional<std::string> svg;
    std::optional<std::string> mode;
};

/// "re,im;re,im;..." or, without ';', a comma list of complex literals
/// such as "-1,1" or "1+2i,-0.5i".
std::vector<cplx> parse_points(const std::string& text);

/// "[re,im];[re,im];..." listing t_1..t_R.
std::vector<cplx> parse_phi(const std::string& text);

/// Reads a JSON config (or a previously emitted result file) and applies
/// the overrides. Throws ConfigError / IoError.
RunConfig parse_config(const std::optional<std::string>& path, const ConfigOverrides& flags = {});
RunConfig config_from_json_text(const std::string& text);

struct SeedOutcome {
    std::uint64_t seed = 0;
    DescentReport report;
};

struct MultiSeedResult {
    std::vector<SeedOutcome> runs;  // in seed order
    int best = -1;                  // lowest final F, converged runs first
    std::vector<std::vector<double>> agreement;  // pairwise Delta-root set distances
};

/// Independent descents from seeds seed, seed+1, ..., run concurrently.
MultiSeedResult run_seeds(const ProblemSpec& spec, std::uint64_t seed, int count, const DescentOptions& opts);

/// Distance between two root multisets under the best matching; infinity
/// when the sizes differ.
double root_set_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

std::string result_json(const RunConfig& cfg, const DescentReport& report, const TrajectoryGraph* graph = nullptr,
                        const MultiSeedResult* seeds = nullptr);
std::string render_svg(const TrajectoryGraph& graph, const DifferentialState& state);

void write_text_file(const std::string& path, const std::string& content);

enum class LogLevel { Quiet, Info, Debug };
/// BOUTROUX_LOG = quiet | info | debug (default info).
LogLevel log_level_from_env();

}  // namespace boutroux
