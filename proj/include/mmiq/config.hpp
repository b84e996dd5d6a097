#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmiq/chain.hpp"
#include "mmiq/simulator.hpp"

namespace mmiq {

// Parsed experiment description (JSON file, strict schema: unknown keys are
// rejected with their path).
struct ExperimentConfig {
    Matrix q;
    Vector lambda, mu;
    Model model = Model::I;
    ScalingParams scaling;
    std::vector<double> grid;        // either an explicit grid ...
    std::optional<double> t_star;    // ... or a single stationarity proxy time
    double lag = 0.0;
    std::int64_t replications = 0;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::vector<std::string> formats{"csv"};

    QueueSpec queue() const { return QueueSpec(Generator(q), lambda, mu); }
    std::vector<double> effective_grid() const;  // grid or {t_star}
    SimConfig sim_config(int threads) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

}  // namespace mmiq
