#include "mmiq/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mmiq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

const json& need(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(path, "missing required key '" + key + "'");
    return obj.at(key);
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& known) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& item : obj.items())
        if (!known.contains(item.key())) fail(path, "unknown key '" + item.key() + "'");
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

Vector vector_field(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a nonempty array of numbers");
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = number(v[i], path + "[" + std::to_string(i) + "]");
    return out;
}

Matrix matrix_field(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected an array of rows");
    const std::size_t d = v.size();
    Matrix out(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& row = v[i];
        if (!row.is_array() || row.size() != d) fail(path, "expected a square matrix");
        for (std::size_t j = 0; j < d; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                number(row[j], path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    return out;
}

}  // namespace

std::vector<double> ExperimentConfig::effective_grid() const {
    if (!grid.empty()) return grid;
    if (t_star) return {*t_star};
    throw ConfigError("config error at times: either 'grid' or 't_star' required");
}

SimConfig ExperimentConfig::sim_config(int threads) const {
    SimConfig cfg{queue(), scaling, 0.0, effective_grid(), lag, replications, seed, threads};
    if (!cfg.sample_times.empty() && cfg.sample_times.front() == 0.0)
        cfg.sample_times.erase(cfg.sample_times.begin());  // M(0) = 0 identically
    if (cfg.sample_times.empty()) throw ConfigError("config error at times: no positive times");
    cfg.horizon = cfg.sample_times.back() + lag;
    return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config error in " + origin + ": " + e.what());
    }
    reject_unknown(root, origin,
                   {"queue", "model", "scaling", "times", "lag", "sim", "outputs"});

    ExperimentConfig cfg;

    const json& queue = need(root, origin, "queue");
    reject_unknown(queue, "queue", {"Q", "lambda", "mu"});
    cfg.q = matrix_field(need(queue, "queue", "Q"), "queue.Q");
    cfg.lambda = vector_field(need(queue, "queue", "lambda"), "queue.lambda");
    cfg.mu = vector_field(need(queue, "queue", "mu"), "queue.mu");

    const json& model = need(root, origin, "model");
    if (!model.is_string() || (model != "I" && model != "II"))
        fail("model", "expected \"I\" or \"II\"");
    cfg.model = model == "I" ? Model::I : Model::II;

    const json& scaling = need(root, origin, "scaling");
    reject_unknown(scaling, "scaling", {"N", "alpha"});
    cfg.scaling.n = number(need(scaling, "scaling", "N"), "scaling.N");
    cfg.scaling.alpha = number(need(scaling, "scaling", "alpha"), "scaling.alpha");

    const json& times = need(root, origin, "times");
    reject_unknown(times, "times", {"grid", "t_star"});
    if (times.contains("grid")) {
        const Vector g = vector_field(times.at("grid"), "times.grid");
        cfg.grid.assign(g.data(), g.data() + g.size());
        if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end()))
            fail("times.grid", "grid must be increasing");
    }
    if (times.contains("t_star")) cfg.t_star = number(times.at("t_star"), "times.t_star");
    if (cfg.grid.empty() && !cfg.t_star) fail("times", "provide 'grid' or 't_star'");

    if (root.contains("lag")) {
        cfg.lag = number(root.at("lag"), "lag");
        if (cfg.lag < 0.0) fail("lag", "lag must be nonnegative");
    }

    if (root.contains("sim")) {
        const json& sim = root.at("sim");
        reject_unknown(sim, "sim", {"replications", "seed"});
        cfg.replications =
            static_cast<std::int64_t>(number(need(sim, "sim", "replications"), "sim.replications"));
        cfg.seed = static_cast<std::uint64_t>(number(need(sim, "sim", "seed"), "sim.seed"));
    }

    if (root.contains("outputs")) {
        const json& outputs = root.at("outputs");
        reject_unknown(outputs, "outputs", {"directory", "formats"});
        if (outputs.contains("directory")) {
            if (!outputs.at("directory").is_string()) fail("outputs.directory", "expected string");
            cfg.out_dir = outputs.at("directory").get<std::string>();
        }
        if (outputs.contains("formats")) {
            cfg.formats.clear();
            for (const auto& f : outputs.at("formats")) {
                if (!f.is_string() || f != "csv") fail("outputs.formats", "only \"csv\" supported");
                cfg.formats.push_back(f.get<std::string>());
            }
        }
    }

    // construct once to surface validation problems as config errors
    try {
        (void)cfg.queue();
    } catch (const std::exception& e) {
        fail("queue", e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace mmiq
