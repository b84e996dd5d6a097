#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmiq/chain.hpp"

namespace mmiq {

enum class Model { I, II };

struct SimConfig {
    QueueSpec spec;  // unscaled; the engine applies `scaling`
    ScalingParams scaling;
    double horizon = 0.0;
    std::vector<double> sample_times;
    double lag = 0.0;
    std::int64_t replications = 0;
    std::uint64_t seed = 0;
    int threads = 0;  // 0: hardware concurrency

    void validate() const;
};

struct MomentEstimate {
    double t = 0, lag = 0;
    double mean = 0, se_mean = 0;
    double var = 0, se_var = 0;
    double cov = 0, se_cov = 0;  // Cov(M(t), M(t+lag))
};

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct SimBatch {
    std::vector<double> times;
    double lag = 0.0;
    CountMatrix counts;       // R x G: M(t_k)
    CountMatrix lag_counts;   // R x G: M(t_k + lag)
    CountMatrix type_counts;  // Model II: R x (G*d), type-major within a grid point
    Eigen::ArrayXXd normalized;  // R x G: N^{-beta} (M(t_k) - N rho(t_k))
    std::vector<MomentEstimate> moments;
    Vector occupation;     // empirical time fraction of J per state
    Vector occupation_se;
};

// Exact event-driven simulation of (J, M) (Model I) / (J, M_1..M_d) (Model II):
// every background jump, arrival and departure is an explicit exponential race.
// Reproducible: a given (seed, config) yields bit-identical batches regardless
// of thread count.
SimBatch simulate_model1(const SimConfig& cfg);
SimBatch simulate_model2(const SimConfig& cfg);

// Exact conditional-Poisson sampler. Only the background path is simulated;
// counts are drawn from the exact conditional law of the queue given that
// path (M(t) | J is Poisson, with the (t, t+u) pair split into three
// independent Poisson pieces). Per-(t_k, t_k+u) laws coincide with the
// event-driven engine; the cost is per background jump rather than per queue
// event, which is what makes large-N sweeps tractable. `max_events` (0 = off)
// aborts if the background-jump budget is exhausted.
SimBatch sample_poisson_mixture(const SimConfig& cfg, Model model, std::uint64_t max_events = 0);

struct FcltTolerances {
    double var_rtol = 0.10;
    double skew_tol = 0.10;
    double kurt_tol = 0.30;
    double cov_rtol = 0.10;
};

struct FcltRow {
    double t = 0;
    double mean = 0, se_mean = 0;
    double var = 0, target_var = 0;
    double skew = 0, exkurt = 0;
    double cov = 0, target_cov = 0;  // lagged, normalized
    bool var_ok = false, skew_ok = false, kurt_ok = false, cov_ok = true;
};

struct FcltReport {
    std::vector<FcltRow> rows;
    bool pass = true;
};

// Normalized-marginal diagnostics of M~ = N^{-beta}(M - N rho): moments vs the
// limiting OU covariance v^(model). Throws InsufficientReplications below 10^3.
FcltReport fclt_diagnostics(const SimBatch& batch, const SimConfig& cfg, Model model,
                            const FcltTolerances& tol = {});

struct SweepRow {
    double alpha = 0, n = 0;
    double var_scaled = 0, se_scaled = 0;  // Var M(t_star) / N^{2 beta}
    double limit = 0;                      // v^(model)(t_star, 0)
    bool over_budget = false;
    std::uint64_t projected_events = 0;
};

struct SweepTable {
    double t_star = 0;
    std::vector<SweepRow> rows;
    bool sup_ordering_ok = false;        // sup-gap over feasible alphas shrinks with N
    std::vector<double> flagged_alphas;  // alphas where per-alpha ordering is violated
};

// Var M^(N)(t_star) / N^{2 beta} against the limit curve, per (alpha, N).
// Arms whose projected background-jump count exceeds `max_events_per_arm`
// (0 = unlimited) are flagged over_budget and skipped, never silently approximated.
SweepTable variance_scaling_sweep(const QueueSpec& spec, std::span<const double> alphas,
                                  std::span<const double> ns, double t_star,
                                  std::int64_t replications, Model model, std::uint64_t seed,
                                  int threads = 0, std::uint64_t max_events_per_arm = 0);

// 40 / min(mu_min, mu_inf): the queue-content relaxation horizon (N-independent).
double default_t_star(const QueueSpec& spec);

}  // namespace mmiq
