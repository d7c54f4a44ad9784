// msmine: mine microservice ownership from git histories, score the
// one-microservice-per-developer strategy, and profile contributor roles
// with factor analysis over per-language contribution vectors.

#include "msmine/errors.hpp"
#include "msmine/pipeline.hpp"
#include "msmine/roles.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common_options(CLI::App* cmd, msmine::RunConfig& config, std::string& normalization)
{
    cmd->add_option("manifests", config.manifest_paths, "Project manifest JSON files");
    cmd->add_option("--dataset", config.dataset_dir, "Directory of project manifest *.json files");
    cmd->add_option("--cache-dir", config.cache_dir, "Commit cache directory (enables caching)");
    cmd->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", [&config](const std::vector<std::string>& vals) {
            try {
                config.seed = std::stoull(vals.at(0));
            } catch (const std::exception&) {
                return false;
            }
            return true;
        },
        "RNG seed (required for the factor-analysis stage)");
    cmd->add_option("--as-of", config.as_of_override, "Override every manifest's as_of date (YYYY-MM-DD)");
    cmd->add_option("--aliases", config.alias_file, "Author alias file: lines 'canonical<TAB>alias'");
    cmd->add_option("--reference", config.reference_csv, "Role-language reference table CSV");
    cmd->add_option("--language-map", config.language_map_json, "Language map override JSON");
    cmd->add_option("--sims", config.efa_sims, "Parallel-analysis simulations")->capture_default_str();
    cmd->add_option("--factors", config.efa_factors_override,
                    "Fixed factor count (0 = choose by parallel analysis)")
        ->capture_default_str();
    cmd->add_option("--tol", config.efa_tol, "Convergence tolerance for extraction and rotation")
        ->capture_default_str();
    cmd->add_option("--extraction", config.extraction, "Extraction method")
        ->check(CLI::IsMember({"principal-axis"}))
        ->capture_default_str();
    cmd->add_option("--normalization", normalization, "Contribution normalization")
        ->check(CLI::IsMember({"proportion", "minmax"}))
        ->capture_default_str();
    cmd->add_option("--jobs", config.jobs, "Projects mined in parallel")->capture_default_str();
    cmd->add_option("--formats", [&config](const std::vector<std::string>& vals) {
            config.formats.clear();
            for (const auto& v : vals)
                config.formats.insert(v);
            return true;
        },
        "Report formats to emit (json csv svg markdown)")
        ->expected(1, 4)
        ->check(CLI::IsMember({"json", "csv", "svg", "markdown"}));
    cmd->add_flag("--exclude-bots", config.exclude_bots,
                  "Drop commits whose author name ends with \"[bot]\"");
    cmd->add_flag("--drop-multi-service-commits", config.drop_multi_service_commits,
                  "Leave commits spanning several microservices out of commit-back sequences");
    cmd->add_flag("--profile-raw-factors", config.profile_against_raw_factors,
                  "Profile developers against raw factors instead of merged role vectors");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"microservice ownership miner"};
    app.require_subcommand(1);

    msmine::RunConfig config;
    std::string normalization = "minmax";

    struct SubcommandSpec {
        const char* name;
        const char* help;
        unsigned stages;
    };
    const SubcommandSpec specs[] = {
        {"mine", "Mine commit histories into the cache", msmine::StageMine},
        {"metrics", "Compute per-project ownership metrics", msmine::StageMine | msmine::StageMetrics},
        {"efa", "Run the factor analysis over pooled contributors",
         msmine::StageMine | msmine::StageMetrics | msmine::StageEfa},
        {"roles", "Assign factor roles and per-developer profiles",
         msmine::StageMine | msmine::StageMetrics | msmine::StageEfa | msmine::StageRoles},
        {"report", "Produce the summary report and figure data (computes all stages, "
                   "writes only report artifacts)",
         msmine::StageReport},
        {"all", "Run every stage and write every artifact", msmine::StageAll},
    };

    std::map<std::string, unsigned> stage_by_name;
    for (const auto& spec : specs) {
        CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
        add_common_options(cmd, config, normalization);
        stage_by_name[spec.name] = spec.stages;
    }

    CLI::App* dump = app.add_subcommand("dump-reference",
                                        "Write the built-in role-language reference table as CSV");
    std::string dump_path = "role_reference.csv";
    dump->add_option("path", dump_path, "Destination CSV path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (dump->parsed()) {
            msmine::RoleReferenceTable::defaults().to_csv(dump_path);
            std::cout << "wrote " << dump_path << "\n";
            return 0;
        }

        CLI::App* sub = app.get_subcommands().front();
        config.stages = stage_by_name.at(sub->get_name());
        config.normalization = normalization == "proportion" ? msmine::Normalization::Proportion
                                                             : msmine::Normalization::MinMax;

        msmine::RunResult result = msmine::run_pipeline(config);

        const bool metrics_ran = config.stages != msmine::StageMine;
        std::cout << result.projects.size() << " project(s)";
        if (metrics_ran)
            std::cout << ", " << result.selected_count << " selected";
        std::cout << "\n";
        for (const auto& pr : result.projects) {
            std::cout << "  " << pr.manifest.name << ": ";
            if (metrics_ran)
                std::cout << (pr.selected
                                  ? (pr.strategy ? msmine::to_string(*pr.strategy) : "selected")
                                  : "excluded")
                          << " ";
            std::cout << "(" << pr.commit_count << " commits)\n";
        }
        if (result.diagnostics)
            std::cout << "factor analysis: KMO=" << result.diagnostics->kmo << ", retained "
                      << result.diagnostics->retained_factors << " factor(s)\n";
        for (const auto& artifact : result.artifacts)
            std::cout << "wrote " << config.out_dir << "/" << artifact << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return msmine::exit_code_for(e);
    }
}
