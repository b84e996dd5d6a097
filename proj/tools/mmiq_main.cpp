#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmiq/asymptotics.hpp"
#include "mmiq/config.hpp"
#include "mmiq/csv.hpp"
#include "mmiq/model1.hpp"
#include "mmiq/model2.hpp"
#include "mmiq/simulator.hpp"

namespace fs = std::filesystem;
using namespace mmiq;

namespace {

std::vector<double> with_leading_zero(std::vector<double> grid) {
    if (grid.empty() || grid.front() != 0.0) grid.insert(grid.begin(), 0.0);
    return grid;
}

std::vector<double> lag_set(double lag) {
    if (lag > 0.0) return {0.0, lag};
    return {0.0};
}

void cmd_analyze(const ExperimentConfig& cfg, const fs::path& out) {
    const QueueSpec spec = cfg.queue();
    const QueueSpec scaled = spec.scaled(cfg.scaling);
    const std::vector<double> grid = with_leading_zero(cfg.effective_grid());

    CsvWriter mean_csv((out / "mean.csv").string(), {"t", "mean"});
    if (cfg.model == Model::I) {
        const MeanTrajectory mt = mean_trajectory(spec, cfg.scaling, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) mean_csv.row({grid[i], mt.total[i]});
    } else {
        for (double t : grid) mean_csv.row({t, mean_m2(scaled, t)});
    }

    CsvWriter cov_csv((out / "cov.csv").string(), {"t", "u", "cov"});
    for (double t : grid)
        for (double u : lag_set(cfg.lag)) {
            const double c = cfg.model == Model::I ? covariance(scaled, t, u)
                                                   : covariance_m2(scaled, t, u);
            cov_csv.row({t, u, c});
        }

    CsvWriter lim_csv((out / "limits.csv").string(), {"t", "u", "alpha", "v"});
    for (double t : grid)
        for (double u : lag_set(cfg.lag)) {
            const double v = cfg.model == Model::I ? v1(spec, cfg.scaling.alpha, t, u)
                                                   : v2(spec, cfg.scaling.alpha, t, u);
            lim_csv.row({t, u, cfg.scaling.alpha, v});
        }
}

void cmd_simulate(const ExperimentConfig& cfg, const fs::path& out, int threads) {
    const SimConfig sim = cfg.sim_config(threads);
    const SimBatch batch =
        cfg.model == Model::I ? simulate_model1(sim) : simulate_model2(sim);

    CsvWriter moments_csv((out / "sim_moments.csv").string(),
                          {"t", "est_mean", "se_mean", "est_var", "se_var", "est_cov", "se_cov"});
    for (const auto& m : batch.moments)
        moments_csv.row({m.t, m.mean, m.se_mean, m.var, m.se_var, m.cov, m.se_cov});

    const FcltReport report = fclt_diagnostics(batch, sim, cfg.model);
    CsvWriter fclt_csv((out / "fclt_report.csv").string(),
                       {"t", "mean_norm", "se_mean", "var_norm", "target_var", "var_ok", "skew",
                        "skew_ok", "exkurt", "kurt_ok", "cov_norm", "target_cov", "cov_ok"});
    for (const auto& r : report.rows)
        fclt_csv.row({r.t, r.mean, r.se_mean, r.var, r.target_var, r.var_ok ? 1.0 : 0.0, r.skew,
                      r.skew_ok ? 1.0 : 0.0, r.exkurt, r.kurt_ok ? 1.0 : 0.0, r.cov,
                      r.target_cov, r.cov_ok ? 1.0 : 0.0});
}

void write_gnuplot(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "'");
    out << body;
}

void cmd_figure_fig2(const ExperimentConfig& cfg, const fs::path& out) {
    Vector mu_desc = cfg.mu, mu_asc = cfg.mu;
    std::sort(mu_desc.data(), mu_desc.data() + mu_desc.size(), std::greater<>());
    std::sort(mu_asc.data(), mu_asc.data() + mu_asc.size());
    const QueueSpec spec_desc(Generator(cfg.q), cfg.lambda, mu_desc);
    const QueueSpec spec_asc(Generator(cfg.q), cfg.lambda, mu_asc);

    CsvWriter csv((out / "fig2.csv").string(), {"u", "cov_mu_21", "cov_mu_12"});
    for (int i = 0; i <= 60; ++i) {
        const double u = 0.05 * i;
        csv.row({u, stationary_covariance(spec_desc, u), stationary_covariance(spec_asc, u)});
    }
    write_gnuplot(out / "fig2.gp",
                  "set datafile separator ','\n"
                  "set key autotitle columnhead\n"
                  "set xlabel 'u'\n"
                  "set ylabel 'stationary covariance'\n"
                  "plot 'fig2.csv' using 1:2 with lines dashtype 2, \\\n"
                  "     'fig2.csv' using 1:3 with lines\n");
}

void cmd_figure_fig3(const ExperimentConfig& cfg, const fs::path& out, int threads,
                     bool downscale) {
    const QueueSpec spec = cfg.queue();
    std::vector<double> alphas;
    for (int i = 1; i <= 8; ++i) alphas.push_back(0.25 * i);
    const std::vector<double> ns = downscale ? std::vector<double>{100.0, 10000.0}
                                             : std::vector<double>{100.0, 100000.0};
    const double t_star = cfg.t_star ? *cfg.t_star : default_t_star(spec);
    // keep accidental month-long runs at bay; skipped arms are reported
    const std::uint64_t budget = 200'000'000'000ULL;
    const SweepTable table = variance_scaling_sweep(spec, alphas, ns, t_star, cfg.replications,
                                                    cfg.model, cfg.seed, threads, budget);

    CsvWriter csv((out / "fig3.csv").string(), {"alpha", "ratio_N1", "ratio_N2", "limit"});
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const auto& r1 = table.rows[ai * ns.size()];
        const auto& r2 = table.rows[ai * ns.size() + 1];
        csv.row({alphas[ai], r1.var_scaled, r2.var_scaled, r1.limit});
        if (r1.over_budget || r2.over_budget)
            std::cerr << "fig3: arm alpha=" << alphas[ai]
                      << " skipped (projected background jumps over budget)\n";
    }
    std::ofstream meta(out / "fig3_meta.json");
    meta << "{\n  \"downscaled\": " << (downscale ? "true" : "false") << ",\n  \"N\": ["
         << format_double(ns[0]) << ", " << format_double(ns[1]) << "],\n  \"t_star\": "
         << format_double(t_star) << ",\n  \"replications\": " << cfg.replications
         << ",\n  \"seed\": " << cfg.seed << ",\n  \"event_budget_per_arm\": " << budget
         << "\n}\n";
    write_gnuplot(out / "fig3.gp",
                  "set datafile separator ','\n"
                  "set key autotitle columnhead\n"
                  "set xlabel 'alpha'\n"
                  "set ylabel 'Var / N^{2 beta}'\n"
                  "plot 'fig3.csv' using 1:2 with linespoints dashtype 2, \\\n"
                  "     'fig3.csv' using 1:3 with linespoints, \\\n"
                  "     'fig3.csv' using 1:4 with lines lc 'gray'\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moments, limits and simulation of Markov-modulated infinite-server queues"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    bool downscale = false;
    std::string figure_name;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory (default: config outputs.directory)");
        cmd->add_option("--threads", threads, "worker threads (0 = all cores)")
            ->envname("MMIQ_THREADS");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "exact moments and limit curves");
    add_common(analyze);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo with FCLT diagnostics");
    add_common(simulate);
    CLI::App* figure = app.add_subcommand("figure", "reproduce the paper-style figures");
    figure->add_option("name", figure_name, "fig2 | fig3")->required();
    add_common(figure);
    figure->add_flag("--downscale", downscale, "use N = 10^4 instead of 10^5 in fig3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const ExperimentConfig cfg = load_config(config_path);
        const fs::path out = out_dir.empty() ? fs::path(cfg.out_dir) : fs::path(out_dir);
        fs::create_directories(out);
        if (app.got_subcommand(analyze)) {
            cmd_analyze(cfg, out);
        } else if (app.got_subcommand(simulate)) {
            cmd_simulate(cfg, out, threads);
        } else {
            if (figure_name == "fig2")
                cmd_figure_fig2(cfg, out);
            else if (figure_name == "fig3")
                cmd_figure_fig3(cfg, out, threads, downscale);
            else
                throw ConfigError("config error: unknown figure '" + figure_name + "'");
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const InsufficientReplications& e) {
        std::cerr << "numerical error (InsufficientReplications): " << e.what() << '\n';
        return 3;
    } catch (const SingularSystem& e) {
        std::cerr << "numerical error (SingularSystem): " << e.what() << '\n';
        return 3;
    } catch (const QuadratureFailure& e) {
        std::cerr << "numerical error (QuadratureFailure): " << e.what() << '\n';
        return 3;
    } catch (const OdeToleranceFailure& e) {
        std::cerr << "numerical error (OdeToleranceFailure): " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
