#pragma once

#include "subgauss/bodies.hpp"
#include "subgauss/common.hpp"
#include "subgauss/direction.hpp"
#include "subgauss/moments.hpp"
#include "subgauss/sampler.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace subgauss {

/// Batch experiment description (versioned JSON schema). The seed is
/// mandatory; every numeric output of a run is a deterministic function of
/// this config with workers=1.
struct ExperimentConfig {
    nlohmann::json raw;  // canonical source for hashing
    std::optional<ConvexBody> body;
    std::optional<LogConcaveSpec> measure;
    Eigen::Index n_samples = 0;
    std::uint64_t seed = 0;
    Convention convention = Convention::Measure;
    bool convention_auto = true;  // body convention when exact volume exists
    std::vector<double> q_grid;   // empty: default dyadic grid
    std::vector<double> t_grid;
    SearchConfig search;
    SamplerOptions sampler;
    std::vector<std::string> stages;  // ordered subset of the pipeline
    std::vector<std::string> geom_checks;
    std::optional<Vector> moment_direction;
    bool emit_cloud_csv = false;
    int workers = 1;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig config_from_file(const std::string& path);

/// FNV-1a of the canonical (key-sorted) serialization; key-order permutations
/// of the input hash identically.
std::uint64_t config_hash(const nlohmann::json& j);

struct RunManifest {
    std::string config_hash;
    std::string version;
    std::vector<std::pair<std::string, double>> stage_wall_ms;
    std::vector<std::string> artifacts;
};

nlohmann::json manifest_to_json(const RunManifest& m);

/// Executes the requested stages in pipeline order
/// (sample -> isotropize -> moments -> direction -> tails -> geom) and writes
/// the artifacts into out_dir. Stage failures rethrow with the stage name.
RunManifest run_experiment(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace subgauss
