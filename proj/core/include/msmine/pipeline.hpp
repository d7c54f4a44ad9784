#pragma once

#include "msmine/efa.hpp"
#include "msmine/git_miner.hpp"
#include "msmine/language_matrix.hpp"
#include "msmine/manifest.hpp"
#include "msmine/ownership.hpp"
#include "msmine/roles.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace msmine {

enum Stage : unsigned {
    StageMine = 1u << 0,
    StageMetrics = 1u << 1,
    StageEfa = 1u << 2,
    StageRoles = 1u << 3,
    StageReport = 1u << 4,
    StageAll = StageMine | StageMetrics | StageEfa | StageRoles | StageReport,
};

struct RunConfig {
    std::vector<std::string> manifest_paths;
    std::string dataset_dir; // alternative: directory of *.json manifests

    std::string cache_dir; // empty disables the commit cache
    std::string out_dir = "out";
    unsigned stages = StageAll;
    std::set<std::string> formats = {"json", "csv", "svg", "markdown"};

    std::optional<std::uint64_t> seed; // mandatory when the EFA stage runs
    std::string as_of_override;        // overrides every manifest's as_of
    std::string alias_file;
    std::string reference_csv;      // role-language table override
    std::string language_map_json;  // extension table override

    int efa_sims = 100;
    int efa_factors_override = 0; // 0: use parallel analysis
    double efa_tol = 1e-6;
    std::string extraction = "principal-axis";
    Normalization normalization = Normalization::MinMax;
    double stable_threshold = 0.4;

    bool exclude_bots = false;                  // drop authors named "...[bot]"
    bool drop_multi_service_commits = false;    // from commit-back sequences
    bool profile_against_raw_factors = false;   // instead of merged role vectors
    int jobs = 1;                               // mining fan-out across projects
};

/// Everything computed for one project.
struct ProjectResult {
    ProjectManifest manifest;
    std::string head_sha;
    std::size_t commit_count = 0;
    bool selected = false;
    std::string exclusion_reason;

    OwnershipMatrix ownership;
    std::optional<StrategyLabel> strategy; // set when selected and non-empty
    SharedMsCounts shared;
    std::vector<int> ms_per_dev_counts;
    std::vector<int> commit_back_counts; // aligned with ownership.developers
};

struct RunResult {
    std::vector<ProjectResult> projects; // sorted by name
    std::size_t selected_count = 0;
    std::size_t fresh_mines = 0; // projects actually read from git (cache misses)

    std::optional<EfaDiagnostics> diagnostics;
    std::optional<FactorModel> factor_model;
    std::optional<RoleFactorModel> role_model;
    std::vector<DeveloperRoleProfile> profiles;
    std::map<std::string, std::map<std::string, double>> class_role_means;
    std::vector<std::string> empty_classes;

    std::vector<std::string> artifacts; // written files, relative to out_dir
};

/// Runs the mine -> metrics -> efa -> roles -> report pipeline, writing the
/// artifacts of every enabled stage under config.out_dir. All writes are
/// atomic; re-running with identical config and inputs produces byte-identical
/// files. Throws ConfigError / MiningError / AnalysisError with a stage tag.
RunResult run_pipeline(const RunConfig& config);

/// Exit code for an exception type: 2 config, 3 mining, 4 analysis.
int exit_code_for(const std::exception& e);

} // namespace msmine
