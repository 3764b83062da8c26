// boutroux: Boutroux quadratic differentials by gradient descent, plus
// critical-trajectory plots.
//
// exit codes: 0 converged, 1 stalled, 2 failed, 3 config error, 4 io error

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "boutroux/errors.hpp"
#include "boutroux/io.hpp"

using namespace boutroux;

namespace {

int exit_code(DescentStatus s) {
    switch (s) {
        case DescentStatus::Converged: return 0;
        case DescentStatus::Stalled:
        case DescentStatus::MergedAndRestarted: return 1;
        case DescentStatus::Failed: return 2;
    }
    return 2;
}

void emit(const RunConfig& cfg, const DescentReport& report, const TrajectoryGraph* graph,
          const MultiSeedResult* seeds) {
    const std::string text = result_json(cfg, report, graph, seeds);
    if (cfg.out.empty() || cfg.out == "-")
        std::cout << text;
    else
        write_text_file(cfg.out, text);
    if (!cfg.svg.empty()) {
        if (!graph) throw IoError("no trajectory graph to render");
        write_text_file(cfg.svg, render_svg(*graph, report.final_state));
    }
}

std::optional<TrajectoryGraph> graph_for(const DescentReport& report, LogLevel level) {
    try {
        return build_graph(report.final_state);
    } catch (const Error& e) {
        if (level != LogLevel::Quiet) std::fprintf(stderr, "trajectory graph skipped: %s\n", e.what());
        return std::nullopt;
    }
}

int solve(const RunConfig& cfg, LogLevel level) {
    DescentOptions opts = cfg.descent_options();
    if (level == LogLevel::Debug)
        opts.observer = [](int it, const DifferentialState& s, double F) {
            std::fprintf(stderr, "iter %6d  F %.6e  L %d  M %d  g %d\n", it, F, s.L(), s.M(), s.genus());
        };

    if (cfg.seeds > 1) {
        MultiSeedResult ms = run_seeds(cfg.spec, cfg.seed, cfg.seeds, opts);
        const DescentReport& best = ms.runs[ms.best].report;
        if (level != LogLevel::Quiet) {
            for (const SeedOutcome& o : ms.runs)
                std::fprintf(stderr, "seed %llu: %s F %.3e L %d\n", static_cast<unsigned long long>(o.seed),
                             to_string(o.report.status).c_str(), o.report.F_history.back(),
                             o.report.final_state.L());
            std::fprintf(stderr, "Delta-root agreement (max matched distance):\n");
            for (const auto& row : ms.agreement) {
                for (double d : row) std::fprintf(stderr, " %10.3e", d);
                std::fprintf(stderr, "\n");
            }
        }
        const auto graph = graph_for(best, level);
        RunConfig best_cfg = cfg;
        best_cfg.seed = ms.runs[ms.best].seed;
        emit(best_cfg, best, graph ? &*graph : nullptr, &ms);
        return exit_code(best.status);
    }

    DescentReport report = run(cfg.spec, cfg.seed, opts);
    if (level != LogLevel::Quiet)
        std::fprintf(stderr, "%s after %d iterations, F %.3e, L %d, M %d%s%s\n", to_string(report.status).c_str(),
                     report.iterations, report.F_history.back(), report.final_state.L(), report.final_state.M(),
                     report.reason.empty() ? "" : ": ", report.reason.c_str());
    const auto graph = graph_for(report, level);
    emit(cfg, report, graph ? &*graph : nullptr, nullptr);
    return exit_code(report.status);
}

int trace_only(const RunConfig& cfg, LogLevel level) {
    DescentReport report;
    report.final_state = DifferentialState::from_roots(cfg.spec, cfg.s_roots, cfg.delta_roots);
    report.final_periods = compute_periods(report.final_state, cfg.descent_options().quadrature);
    const double F = functional(cfg.spec, report.final_periods);
    report.F_history.push_back(F);
    report.status = F < cfg.tol ? DescentStatus::Converged : DescentStatus::Stalled;
    if (report.status != DescentStatus::Converged) report.reason = "given state is not a Boutroux state within tol";
    const TrajectoryGraph graph = build_graph(report.final_state);
    if (level != LogLevel::Quiet)
        std::fprintf(stderr, "traced %d directions, %zu edges, %d components, F %.3e\n", graph.launched,
                     graph.edges.size(), graph.component_count(), F);
    emit(cfg, report, &graph, nullptr);
    return exit_code(report.status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boutroux quadratic differentials and their critical trajectories"};
    std::optional<std::string> config_path;
    ConfigOverrides o;
    app.add_option("--config", config_path, "JSON config (or a previous result file)");
    app.add_option("--points", o.points, "E points: \"re,im;re,im;...\" or \"-1,1\" / \"1+2i,-i\"");
    app.add_option("--phi", o.phi, "t_1..t_R as \"[re,im];[re,im];...\"");
    app.add_option("--t0", o.t0, "residue at infinity");
    app.add_option("--L", o.L, "number of stagnation points (deg S)");
    app.add_option("--seed", o.seed, "random seed for the initial state");
    app.add_option("--seeds", o.seeds, "run k seeds and report cross-seed agreement");
    app.add_option("--tol", o.tol, "exit threshold on F");
    app.add_option("--max-iter", o.max_iter, "iteration cap");
    app.add_option("--dt0", o.dt0, "initial step");
    app.add_option("--out", o.out, "result JSON path (stdout when omitted)");
    app.add_option("--svg", o.svg, "critical graph SVG path");
    app.add_option("--mode", o.mode, "solve | trace-only")->check(CLI::IsMember({"solve", "trace-only"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    const LogLevel level = log_level_from_env();
    try {
        const RunConfig cfg = parse_config(config_path, o);
        return cfg.mode == RunMode::Solve ? solve(cfg, level) : trace_only(cfg, level);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
}
