#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "grl/evaluation.hpp"
#include "grl/grl.hpp"

namespace grl {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "GRL_OUTPUT_DIR";

struct ExperimentConfig {
    std::string domain = "sysadmin";
    /// Size parameters of each curriculum stage, smallest first.
    std::vector<std::vector<int>> curriculum;
    /// Generated test instances (size parameters).
    std::vector<std::vector<int>> tests;
    /// Test instances read from instance files.
    std::vector<std::filesystem::path> test_files;
    int runs = 10;
    int eval_episodes = 100;
    /// Run r uses seed + r unless `seeds` lists them explicitly.
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> seeds;
    /// Generator seed of the test instances, shared by all runs.
    std::uint64_t instance_seed = 0;
    std::filesystem::path output_dir;
    int threads = 1;
    GrlHyper hyper = GrlHyper::for_domain("sysadmin");

    std::vector<std::uint64_t> run_seeds() const;
    std::vector<CurriculumStage> stages() const;
    void validate() const;
};

/// key = value lines, '#' comments. Lists use ',' inside one instance and ';'
/// between instances, e.g. `curriculum = 3; 4; 6`. Errors carry line:column.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Config output_dir, else $GRL_OUTPUT_DIR, else "grl_output".
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

struct InstanceSummary {
    std::string instance;
    std::vector<double> grl_means;
    std::vector<double> random_means;
    WelchResult welch;
};

struct RunFailure {
    int run = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct ExperimentReport {
    std::filesystem::path output_dir;
    /// Ordered by run, then test instance.
    std::vector<ResultRecord> grl;
    std::vector<ResultRecord> random;
    std::vector<std::vector<StageReport>> stages;
    std::vector<InstanceSummary> summary;
    std::vector<RunFailure> failures;
};

/// Leapfrog training and zero-shot evaluation for every run seed. Writes
/// results.csv, training_curves.csv, stages.csv and plot_data.dat, and prints
/// a summary table to `out` when given. A failing run becomes an error row.
ExperimentReport run_experiment(const ExperimentConfig& config, std::ostream* out = nullptr);

} // namespace grl
