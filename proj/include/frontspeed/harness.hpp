#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "frontspeed/nonlinearity.hpp"

namespace frontspeed {

enum class ExperimentKind {
    chi_run,
    ode_run,
    direct_run,
    eps_sweep,
    p_sweep,
    bernstein_sweep,
    sandwich
};

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind kind);

// One JSON document describing an experiment. Every referenced value is checked
// against the solver preconditions up front; nothing runs on a bad config.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::chi_run;
    Nonlinearity g = Nonlinearity::constant(-1.0);
    double alpha = 0.0;
    std::vector<double> eps_list;
    std::vector<double> p_list;
    int n_nodes = 256;          // reduced periodic grid
    double m_periods = 0.0;     // horizon policy multiplier; 0 = per-kind default
    double dt = 0.0;            // raw override; 0 = policy
    double horizon = 0.0;       // raw override; 0 = policy (required for direct kinds)
    double window_fraction = 0.5;
    int sample_every = 0;
    unsigned long seed = 0;
    double domain_half_width = 3.0;
    int domain_nodes = 385;
    nlohmann::json v0;          // perturbation description for direct/sandwich kinds
    long period_shift = 0;
    nlohmann::json raw;         // validated source document, input of the hash

    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig load(const std::string& path);
};

// FNV-1a over the canonical (sorted-key) dump of the document.
std::string config_hash(const nlohmann::json& doc);

struct RunRecord {
    nlohmann::json params;
    nlohmann::json payload;
    std::string status = "ok";  // "ok" or the error text; failures never vanish
    double wall_ms = 0.0;
    // wall_ms stays out of the serialized form: summaries must not depend on scheduling.
    nlohmann::json to_json() const;
};

struct Summary {
    std::string hash;
    std::vector<RunRecord> runs;
    std::vector<nlohmann::json> checks;  // {name, pass, measured, expected, tolerance}
    bool all_pass = true;
    nlohmann::json to_json() const;
};

// Executes the experiment, writes one CSV per trajectory plus summary.json
// under out_dir, and returns the summary. Runs of a sweep may execute on up to
// `jobs` threads; aggregation order is fixed by the task index, so the output
// is schedule-independent.
Summary run_config(const ExperimentConfig& config, const std::string& out_dir, int jobs = 1);

}  // namespace frontspeed
