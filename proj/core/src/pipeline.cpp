#include "msmine/pipeline.hpp"

#include "msmine/errors.hpp"
#include "msmine/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <future>
#include <sstream>

namespace msmine {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// internal per-project working set (commits/touches are not part of RunResult)
struct ProjectData {
    ProjectManifest manifest;
    std::string head_sha;
    std::vector<CommitRecord> commits;
    std::vector<TouchEvent> touches;
    bool fresh_mine = false;
};

template <typename F>
auto stage_guard(const char* stage, F&& f)
{
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(stage) + ": " + e.what());
    } catch (const MiningError& e) {
        throw MiningError(std::string(stage) + ": " + e.what());
    } catch (const AnalysisError& e) {
        throw AnalysisError(std::string(stage) + ": " + e.what());
    }
}

std::string path_slug(const std::string& name)
{
    std::string out;
    for (char c : name) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "_" : out;
}

bool is_bot_author(const CommitRecord& rec)
{
    auto ends_with = [](const std::string& s, const std::string& suffix) {
        return s.size() >= suffix.size() &&
               s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends_with(trim(rec.raw_name), "[bot]") || ends_with(rec.author.display_name, "[bot]");
}

std::vector<ProjectManifest> collect_manifests(const RunConfig& config)
{
    std::vector<std::string> paths = config.manifest_paths;
    if (!config.dataset_dir.empty()) {
        if (!fs::is_directory(config.dataset_dir))
            throw ConfigError("dataset directory not found: " + config.dataset_dir);
        for (const auto& entry : fs::directory_iterator(config.dataset_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());

    if (paths.empty())
        throw ConfigError("no projects selected");

    std::vector<ProjectManifest> manifests;
    for (const auto& p : paths) {
        ProjectManifest m = load_manifest(p);
        if (!config.as_of_override.empty()) {
            m.as_of = config.as_of_override;
            parse_utc_date(m.as_of);
        }
        manifests.push_back(std::move(m));
    }
    std::sort(manifests.begin(), manifests.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    for (std::size_t i = 1; i < manifests.size(); ++i)
        if (manifests[i].name == manifests[i - 1].name)
            throw ConfigError("duplicate project name: " + manifests[i].name);
    return manifests;
}

ProjectData mine_project(const ProjectManifest& manifest, const RunConfig& config,
                         const AliasMap& aliases, const LanguageMap& languages,
                         const CommitCache* cache)
{
    ProjectData data;
    data.manifest = manifest;
    data.head_sha = repo_head_sha(manifest.repo_path);
    data.commits = mine_commits(manifest, aliases, cache, &data.fresh_mine);
    if (config.exclude_bots) {
        std::erase_if(data.commits, [](const CommitRecord& r) { return is_bot_author(r); });
    }
    data.touches = attribute_touches(manifest, data.commits, languages);
    return data;
}

json summary_to_json(const FiveNumberSummary& s)
{
    return json{{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

std::string dump_json(const json& j)
{
    return j.dump(2) + "\n";
}

std::string format_number(double v)
{
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    return format_fixed(v, 4);
}

class ArtifactWriter {
public:
    ArtifactWriter(std::string out_dir, const std::set<std::string>& formats,
                   std::vector<std::string>& artifacts)
        : out_dir_(std::move(out_dir)), formats_(formats), artifacts_(artifacts)
    {
    }

    void write(const std::string& relative, const std::string& content, const char* format)
    {
        if (!formats_.count(format))
            return;
        write_file_atomic((fs::path(out_dir_) / relative).string(), content);
        artifacts_.push_back(relative);
    }

private:
    std::string out_dir_;
    const std::set<std::string>& formats_;
    std::vector<std::string>& artifacts_;
};

std::string class_for_strategy(StrategyLabel label)
{
    switch (label) {
    case StrategyLabel::OneDevAllMs: return "One-Dev-ALL-MS";
    case StrategyLabel::MultiDevAllMs: return "Multi-Dev-ALL-MS";
    case StrategyLabel::MultiDevSomeMs: return "Multi-Dev-SOME-MS";
    case StrategyLabel::OneMsPerDeveloper: return "One-MS-per-developer";
    }
    return "?";
}

const std::vector<std::string>& all_classes()
{
    static const std::vector<std::string> classes = {
        "One-Dev-ALL-MS", "Multi-Dev-ALL-MS", "Multi-Dev-SOME-MS", "One-MS-per-developer"};
    return classes;
}

} // namespace

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ConfigError*>(&e))
        return 2;
    if (dynamic_cast<const MiningError*>(&e))
        return 3;
    if (dynamic_cast<const AnalysisError*>(&e))
        return 4;
    return 1;
}

RunResult run_pipeline(const RunConfig& config)
{
    RunResult result;

    const bool want_metrics = config.stages & (StageMetrics | StageEfa | StageRoles | StageReport);
    const bool want_efa = config.stages & (StageEfa | StageRoles | StageReport);
    const bool want_roles = config.stages & (StageRoles | StageReport);

    if (want_efa && !config.seed)
        throw ConfigError("efa: --seed is required for reproducible factor analysis");
    if (config.extraction != "principal-axis")
        throw ConfigError("efa: unsupported extraction method '" + config.extraction + "'");

    const LanguageMap languages = stage_guard("config", [&] {
        return config.language_map_json.empty() ? LanguageMap::defaults()
                                                : LanguageMap::from_json(config.language_map_json);
    });
    const AliasMap aliases = stage_guard("config", [&] {
        return config.alias_file.empty() ? AliasMap{} : AliasMap::load(config.alias_file);
    });
    const std::optional<RoleReferenceTable> custom_reference = stage_guard("config", [&] {
        std::optional<RoleReferenceTable> table;
        if (!config.reference_csv.empty())
            table = RoleReferenceTable::from_csv(config.reference_csv);
        return table;
    });
    const RoleReferenceTable& reference =
        custom_reference ? *custom_reference : RoleReferenceTable::defaults();

    auto manifests = stage_guard("config", [&] { return collect_manifests(config); });

    std::optional<CommitCache> cache;
    if (!config.cache_dir.empty())
        cache.emplace(config.cache_dir);

    // --- mine ---------------------------------------------------------------
    std::vector<ProjectData> data(manifests.size());
    stage_guard("mine", [&] {
        const int jobs = std::max(1, config.jobs);
        if (jobs == 1 || manifests.size() <= 1) {
            for (std::size_t i = 0; i < manifests.size(); ++i)
                data[i] = mine_project(manifests[i], config, aliases, languages,
                                       cache ? &*cache : nullptr);
        } else {
            std::vector<std::future<ProjectData>> futures;
            futures.reserve(manifests.size());
            for (std::size_t i = 0; i < manifests.size(); ++i)
                futures.push_back(std::async(std::launch::async, [&, i] {
                    return mine_project(manifests[i], config, aliases, languages,
                                        cache ? &*cache : nullptr);
                }));
            for (std::size_t i = 0; i < manifests.size(); ++i)
                data[i] = futures[i].get(); // rethrows in deterministic project order
        }
    });

    for (const auto& d : data)
        result.fresh_mines += d.fresh_mine ? 1 : 0;

    // --- metrics ------------------------------------------------------------
    OwnershipOptions ownership_options;
    ownership_options.drop_multi_service_commits_from_sequences = config.drop_multi_service_commits;

    stage_guard("metrics", [&] {
        for (auto& d : data) {
            ProjectResult pr;
            pr.manifest = d.manifest;
            pr.head_sha = d.head_sha;
            pr.commit_count = d.commits.size();

            if (!want_metrics) {
                result.projects.push_back(std::move(pr));
                continue;
            }

            pr.selected = select_project(d.manifest, d.commits, languages);
            if (!pr.selected) {
                pr.exclusion_reason = d.manifest.microservice_paths.size() < 2
                                          ? "fewer than 2 microservices"
                                          : "fewer than 2 microservices touched in the last 12 months";
            } else {
                ++result.selected_count;
                pr.ownership = build_ownership_matrix(d.touches, ownership_options);
                if (!pr.ownership.empty()) {
                    pr.strategy = classify_strategy(pr.ownership);
                    pr.shared = shared_ms_counts(pr.ownership);
                    pr.ms_per_dev_counts = ms_per_developer(pr.ownership).counts;
                    for (const auto& dev : pr.ownership.developers) {
                        auto it = pr.ownership.sequences.find(dev);
                        pr.commit_back_counts.push_back(
                            it == pr.ownership.sequences.end() ? 0 : commit_back_count(it->second));
                    }
                }
            }
            result.projects.push_back(std::move(pr));
        }
    });

    // --- efa ----------------------------------------------------------------
    DeveloperLanguageMatrix language_matrix;
    if (want_efa) {
        stage_guard("efa", [&] {
            std::vector<CommitRecord> pooled;
            for (std::size_t i = 0; i < data.size(); ++i)
                if (result.projects[i].selected)
                    pooled.insert(pooled.end(), data[i].commits.begin(), data[i].commits.end());
            if (pooled.empty())
                throw AnalysisError("no projects selected by the inclusion criteria");

            language_matrix = build_language_matrix(pooled, languages, config.normalization);
            if (language_matrix.contributors.size() < 2)
                throw AnalysisError("need at least 2 contributors for factor analysis");

            result.diagnostics = run_efa_diagnostics(language_matrix.values,
                                                     language_matrix.languages, config.efa_sims,
                                                     *config.seed);

            const int p = static_cast<int>(result.diagnostics->analyzed_columns.size());
            int k = config.efa_factors_override > 0 ? config.efa_factors_override
                                                    : std::max(1, result.diagnostics->retained_factors);
            k = std::min(k, p - 1);
            k = std::max(k, 1);

            std::vector<int> dead;
            for (int c = 0; c < static_cast<int>(language_matrix.languages.size()); ++c) {
                const auto& name = language_matrix.languages[c];
                if (std::find(result.diagnostics->analyzed_columns.begin(),
                              result.diagnostics->analyzed_columns.end(),
                              name) == result.diagnostics->analyzed_columns.end())
                    dead.push_back(c);
            }
            Eigen::MatrixXd live = drop_columns(language_matrix.values, dead);
            Eigen::MatrixXd corr = correlation_matrix(live);

            ExtractionOptions ex;
            ex.tol = config.efa_tol;
            ExtractionResult extracted = extract_factors(corr, k, ex);

            VarimaxOptions vo;
            vo.tol = config.efa_tol;
            VarimaxResult rotated = varimax_rotate(extracted.loadings, vo);

            FactorModel model;
            model.variables = result.diagnostics->analyzed_columns;
            model.loadings = rotated.loadings;
            model.communalities =
                rotated.loadings.array().square().rowwise().sum().min(1.0).matrix();
            model.stable_threshold = config.stable_threshold;
            model.extraction_converged = extracted.converged;
            model.heywood = extracted.heywood;
            result.factor_model = std::move(model);
        });
    }

    // --- roles ----------------------------------------------------------------
    if (want_roles && result.factor_model) {
        stage_guard("roles", [&] {
            result.role_model = assign_roles(*result.factor_model, reference);

            // contributor vectors over the analyzed columns
            std::vector<int> dead;
            for (int c = 0; c < static_cast<int>(language_matrix.languages.size()); ++c)
                if (std::find(result.role_model->languages.begin(), result.role_model->languages.end(),
                              language_matrix.languages[c]) == result.role_model->languages.end())
                    dead.push_back(c);
            Eigen::MatrixXd live = drop_columns(language_matrix.values, dead);

            for (std::size_t i = 0; i < language_matrix.contributors.size(); ++i) {
                Eigen::VectorXd v = live.row(static_cast<int>(i)).transpose();
                if (config.profile_against_raw_factors) {
                    // score each role by its best-matching factor
                    DeveloperRoleProfile profile;
                    profile.author_key = language_matrix.contributors[i];
                    profile.degenerate = v.isZero(0.0);
                    std::vector<double> best(result.role_model->roles.size(), 0.0);
                    for (const auto& fa : result.role_model->factor_assignments) {
                        Eigen::VectorXd factor =
                            result.factor_model->loadings.col(fa.factor).cwiseMax(0.0);
                        double sim = kh_similarity(v, factor);
                        auto r = std::find(result.role_model->roles.begin(),
                                           result.role_model->roles.end(), fa.role) -
                                 result.role_model->roles.begin();
                        best[r] = std::max(best[r], sim);
                    }
                    profile.scores = std::move(best);
                    std::size_t arg = 0;
                    for (std::size_t r = 1; r < profile.scores.size(); ++r)
                        if (profile.scores[r] > profile.scores[arg])
                            arg = r;
                    profile.dominant_role = result.role_model->roles[arg];
                    result.profiles.push_back(std::move(profile));
                } else {
                    result.profiles.push_back(developer_profile(language_matrix.contributors[i], v,
                                                                *result.role_model));
                }
            }

            // contributor classes from per-project coverage
            std::map<std::string, std::set<std::string>> members;
            for (const auto& pr : result.projects) {
                if (!pr.selected || !pr.strategy)
                    continue;
                const auto& m = pr.ownership;
                std::vector<std::string> full;
                for (std::size_t d = 0; d < m.developers.size(); ++d) {
                    bool covers_all = true;
                    for (int s = 0; s < m.counts.cols(); ++s)
                        if (m.counts(static_cast<int>(d), s) <= 0) {
                            covers_all = false;
                            break;
                        }
                    if (covers_all)
                        full.push_back(m.developers[d]);
                }
                std::string cls = class_for_strategy(*pr.strategy);
                switch (*pr.strategy) {
                case StrategyLabel::OneDevAllMs:
                case StrategyLabel::MultiDevAllMs:
                    for (const auto& dev : full)
                        members[cls].insert(dev);
                    break;
                case StrategyLabel::MultiDevSomeMs:
                case StrategyLabel::OneMsPerDeveloper:
                    for (const auto& dev : m.developers)
                        members[cls].insert(dev);
                    break;
                }
            }

            std::map<std::string, const DeveloperRoleProfile*> by_key;
            for (const auto& p : result.profiles)
                by_key[p.author_key] = &p;

            std::map<std::string, std::vector<DeveloperRoleProfile>> by_class;
            for (const auto& cls : all_classes()) {
                auto it = members.find(cls);
                if (it == members.end() || it->second.empty()) {
                    result.empty_classes.push_back(cls);
                    continue;
                }
                auto& list = by_class[cls];
                for (const auto& key : it->second) {
                    auto pit = by_key.find(key);
                    if (pit != by_key.end())
                        list.push_back(*pit->second);
                }
            }
            result.class_role_means =
                strategy_role_distribution(by_class, result.role_model->roles);
        });
    }

    // --- write artifacts ------------------------------------------------------
    ArtifactWriter writer(config.out_dir, config.formats, result.artifacts);
    stage_guard("write", [&] {

    if (config.stages & StageMine) {
        json mined = json::array();
        for (std::size_t i = 0; i < data.size(); ++i) {
            json j{{"project", data[i].manifest.name},
                   {"head_sha", data[i].head_sha},
                   {"commits", data[i].commits.size()}};
            if (cache)
                j["cache_file"] =
                    fs::path(cache->path_for(data[i].manifest, data[i].head_sha)).filename().string();
            mined.push_back(std::move(j));
        }
        writer.write("mined.json", dump_json(json{{"projects", mined}}), "json");
    }

    if (config.stages & StageMetrics) {
        for (const auto& pr : result.projects) {
            json j;
            j["project"] = pr.manifest.name;
            j["selected"] = pr.selected;
            j["commits"] = pr.commit_count;
            if (!pr.selected) {
                j["exclusion_reason"] = pr.exclusion_reason;
            } else if (!pr.strategy) {
                j["note"] = "no source-file touches; ownership metrics unavailable";
            } else {
                const auto& m = pr.ownership;
                j["strategy"] = to_string(*pr.strategy);
                j["microservices"] =
                    json{{"listed", pr.manifest.microservice_paths.size()},
                         {"active", m.microservices.size()},
                         {"shared", pr.shared.shared},
                         {"not_shared", pr.shared.not_shared}};
                j["developers"] = m.developers.size();

                json per_dev = json::object();
                std::vector<double> ms_counts;
                std::vector<double> commit_backs;
                for (std::size_t d = 0; d < m.developers.size(); ++d) {
                    int touch_total = m.counts.row(static_cast<int>(d)).sum();
                    per_dev[m.developers[d]] =
                        json{{"distinct_ms", pr.ms_per_dev_counts[d]},
                             {"commit_back", pr.commit_back_counts[d]},
                             {"touch_total", touch_total}};
                    ms_counts.push_back(pr.ms_per_dev_counts[d]);
                    commit_backs.push_back(pr.commit_back_counts[d]);
                }
                j["per_developer"] = std::move(per_dev);
                j["ms_per_developer_summary"] = summary_to_json(five_number_summary(ms_counts));
                j["commit_back_summary"] = summary_to_json(five_number_summary(commit_backs));
            }
            writer.write("projects/" + path_slug(pr.manifest.name) + "/metrics.json", dump_json(j),
                         "json");
        }
    }

    if ((config.stages & StageEfa) && result.diagnostics) {
        const auto& diag = *result.diagnostics;
        json j;
        j["kmo"] = diag.kmo;
        j["bartlett"] = json{{"chi2", diag.bartlett_chi2},
                             {"df", diag.bartlett_df},
                             {"p_value", diag.bartlett_p}};
        j["observed_eigenvalues"] = diag.observed_eigenvalues;
        j["simulated_eigenvalues"] = diag.simulated_eigenvalues;
        j["retained_factors"] = diag.retained_factors;
        j["factors_used"] = result.factor_model ? result.factor_model->loadings.cols() : 0;
        j["analyzed_languages"] = diag.analyzed_columns;
        j["dropped_languages"] = diag.dropped_columns;
        j["contributors"] = language_matrix.contributors.size();
        j["dropped_contributors"] = language_matrix.dropped_contributors;
        j["simulations"] = config.efa_sims;
        j["seed"] = *config.seed;
        j["normalization"] = to_string(config.normalization);
        j["extraction"] = config.extraction;
        if (result.factor_model) {
            j["extraction_converged"] = result.factor_model->extraction_converged;
            j["heywood"] = result.factor_model->heywood;
        }
        writer.write("efa/diagnostics.json", dump_json(j), "json");

        if (result.factor_model) {
            std::ostringstream csv;
            csv << "language";
            for (int f = 0; f < result.factor_model->loadings.cols(); ++f)
                csv << ",F" << (f + 1);
            csv << '\n';
            for (std::size_t v = 0; v < result.factor_model->variables.size(); ++v) {
                csv << result.factor_model->variables[v];
                for (int f = 0; f < result.factor_model->loadings.cols(); ++f)
                    csv << ',' << format_fixed(result.factor_model->loadings(static_cast<int>(v), f), 6);
                csv << '\n';
            }
            writer.write("efa/loadings.csv", csv.str(), "csv");
        }
    }

    if ((config.stages & StageRoles) && result.role_model) {
        json factors = json::array();
        for (const auto& fa : result.role_model->factor_assignments) {
            json jf{{"factor", "F" + std::to_string(fa.factor + 1)},
                    {"role", fa.role},
                    {"similarity", fa.similarity}};
            json stable = json::array();
            for (std::size_t v = 0; v < result.factor_model->variables.size(); ++v)
                if (std::abs(result.factor_model->loadings(static_cast<int>(v), fa.factor)) >
                    result.factor_model->stable_threshold)
                    stable.push_back(result.factor_model->variables[v]);
            jf["stable_languages"] = std::move(stable);
            factors.push_back(std::move(jf));
        }
        json role_vectors = json::object();
        for (const auto& [role, vec] : result.role_model->role_vectors) {
            json entries = json::object();
            for (std::size_t v = 0; v < result.role_model->languages.size(); ++v)
                if (vec(static_cast<int>(v)) > 0.0)
                    entries[result.role_model->languages[v]] = vec(static_cast<int>(v));
            role_vectors[role] = std::move(entries);
        }
        json j{{"stable_threshold", result.factor_model->stable_threshold},
               {"factors", std::move(factors)},
               {"role_vectors", std::move(role_vectors)},
               {"profile_basis",
                config.profile_against_raw_factors ? "raw-factors" : "merged-role-vectors"}};
        writer.write("roles/assignments.json", dump_json(j), "json");

        std::ostringstream csv;
        csv << "author,dominant_role";
        for (const auto& role : result.role_model->roles)
            csv << ',' << role;
        csv << '\n';
        for (const auto& p : result.profiles) {
            csv << p.author_key << ',' << p.dominant_role;
            for (double s : p.scores)
                csv << ',' << format_fixed(s, 6);
            csv << '\n';
        }
        writer.write("roles/profiles.csv", csv.str(), "csv");

        json radar{{"roles", result.role_model->roles},
                   {"classes", result.class_role_means},
                   {"omitted_classes", result.empty_classes}};
        writer.write("roles/radar.json", dump_json(radar), "json");
        writer.write("roles/radar.svg",
                     radar_svg(result.role_model->roles, result.class_role_means), "svg");
    }

    if (config.stages & StageReport) {
        // figure data
        std::vector<BoxplotRow> ms_rows;
        std::vector<BoxplotRow> cb_rows;
        for (const auto& pr : result.projects) {
            if (!pr.selected || !pr.strategy)
                continue;
            std::vector<double> ms(pr.ms_per_dev_counts.begin(), pr.ms_per_dev_counts.end());
            std::vector<double> cb(pr.commit_back_counts.begin(), pr.commit_back_counts.end());
            ms_rows.push_back(make_boxplot_row(pr.manifest.name, ms));
            cb_rows.push_back(make_boxplot_row(pr.manifest.name, cb));
        }
        writer.write("boxplot_ms_per_developer.csv", boxplot_csv(ms_rows), "csv");
        writer.write("boxplot_commit_back.csv", boxplot_csv(cb_rows), "csv");

        // config echo shared by bundle.json and summary.md
        json cfg;
        cfg["seed"] = config.seed ? json(*config.seed) : json(nullptr);
        cfg["simulations"] = config.efa_sims;
        cfg["factors_override"] = config.efa_factors_override;
        cfg["tolerance"] = config.efa_tol;
        cfg["extraction"] = config.extraction;
        cfg["normalization"] = to_string(config.normalization);
        cfg["stable_threshold"] = config.stable_threshold;
        cfg["as_of_override"] = config.as_of_override;
        cfg["alias_file"] = config.alias_file;
        cfg["reference_csv"] = config.reference_csv;
        cfg["language_map"] = config.language_map_json;
        cfg["exclude_bots"] = config.exclude_bots;
        cfg["drop_multi_service_commits"] = config.drop_multi_service_commits;
        cfg["profile_against_raw_factors"] = config.profile_against_raw_factors;
        cfg["formats"] = std::vector<std::string>(config.formats.begin(), config.formats.end());
        json projects_cfg = json::array();
        for (const auto& pr : result.projects)
            projects_cfg.push_back(json{{"name", pr.manifest.name},
                                        {"as_of", pr.manifest.as_of},
                                        {"microservices", pr.manifest.microservice_paths}});
        cfg["projects"] = std::move(projects_cfg);

        std::map<std::string, int> strategy_counts;
        for (const auto& pr : result.projects)
            if (pr.selected && pr.strategy)
                ++strategy_counts[to_string(*pr.strategy)];

        std::ostringstream md;
        md << "# Microservice ownership report\n\n";
        md << "Config: seed=" << (config.seed ? std::to_string(*config.seed) : "(none)")
           << ", sims=" << config.efa_sims << ", normalization=" << to_string(config.normalization)
           << ", extraction=" << config.extraction << ", stable-threshold="
           << format_number(config.stable_threshold) << "\n\n";

        md << "## Projects (" << result.projects.size() << " total, " << result.selected_count
           << " selected)\n\n";
        md << "| project | selected | strategy | developers | active MS | shared | not shared | "
              "median MS/dev | median commit-back |\n";
        md << "|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& pr : result.projects) {
            md << "| " << pr.manifest.name << " | " << (pr.selected ? "yes" : "no") << " | ";
            if (pr.selected && pr.strategy) {
                std::vector<double> ms(pr.ms_per_dev_counts.begin(), pr.ms_per_dev_counts.end());
                std::vector<double> cb(pr.commit_back_counts.begin(), pr.commit_back_counts.end());
                md << to_string(*pr.strategy) << " | " << pr.ownership.developers.size() << " | "
                   << pr.ownership.microservices.size() << " | " << pr.shared.shared << " | "
                   << pr.shared.not_shared << " | " << format_number(quantile(ms, 0.5)) << " | "
                   << format_number(quantile(cb, 0.5)) << " |\n";
            } else if (pr.selected) {
                md << "- | 0 | 0 | 0 | 0 | - | - |\n";
            } else {
                md << "excluded: " << pr.exclusion_reason << " | - | - | - | - | - | - |\n";
            }
        }
        md << "\nStrategy counts over selected projects:\n\n";
        for (const auto& [label, count] : strategy_counts)
            md << "- " << label << ": " << count << "\n";
        if (strategy_counts.empty())
            md << "- (none)\n";

        if (result.diagnostics) {
            const auto& diag = *result.diagnostics;
            md << "\n## Factor analysis\n\n";
            md << "- contributors: " << language_matrix.contributors.size() << "\n";
            md << "- analyzed languages: " << diag.analyzed_columns.size();
            if (!diag.dropped_columns.empty()) {
                md << " (dropped zero-variance:";
                for (const auto& c : diag.dropped_columns)
                    md << ' ' << c;
                md << ")";
            }
            md << "\n";
            md << "- KMO: " << format_fixed(diag.kmo, 4) << "\n";
            md << "- Bartlett: chi2=" << format_fixed(diag.bartlett_chi2, 4)
               << ", df=" << diag.bartlett_df << ", p=" << format_fixed(diag.bartlett_p, 6) << "\n";
            md << "- retained factors (parallel analysis): " << diag.retained_factors << "\n";
            if (result.factor_model)
                md << "- factors used: " << result.factor_model->loadings.cols() << "\n";
        }

        if (result.role_model) {
            md << "\n## Factor roles\n\n";
            md << "| factor | role | similarity |\n|---|---|---|\n";
            for (const auto& fa : result.role_model->factor_assignments)
                md << "| F" << (fa.factor + 1) << " | " << fa.role << " | "
                   << format_fixed(fa.similarity, 4) << " |\n";

            if (!result.class_role_means.empty()) {
                md << "\n## Mean role scores by contributor class\n\n";
                md << "| class |";
                for (const auto& role : result.role_model->roles)
                    md << ' ' << role << " |";
                md << "\n|---|";
                for (std::size_t i = 0; i < result.role_model->roles.size(); ++i)
                    md << "---|";
                md << "\n";
                for (const auto& [cls, means] : result.class_role_means) {
                    md << "| " << cls << " |";
                    for (const auto& role : result.role_model->roles) {
                        auto it = means.find(role);
                        md << ' ' << format_fixed(it == means.end() ? 0.0 : it->second, 4) << " |";
                    }
                    md << "\n";
                }
            }
            if (!result.empty_classes.empty()) {
                md << "\nClasses with no members (omitted from the radar):";
                for (const auto& cls : result.empty_classes)
                    md << ' ' << cls << ";";
                md << "\n";
            }
        }
        writer.write("summary.md", md.str(), "markdown");

        json bundle{{"config", cfg}};
        std::vector<std::string> sorted_artifacts = result.artifacts;
        sorted_artifacts.push_back("bundle.json");
        std::sort(sorted_artifacts.begin(), sorted_artifacts.end());
        bundle["artifacts"] = sorted_artifacts;
        writer.write("bundle.json", dump_json(bundle), "json");
    }

    }); // stage_guard("write")

    std::sort(result.artifacts.begin(), result.artifacts.end());
    return result;
}

} // namespace msmine
