#include "msmine/roles.hpp"

#include "msmine/errors.hpp"
#include "msmine/identity.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace msmine {

double kh_similarity(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    if (x.size() != y.size())
        throw AnalysisError("kh_similarity: length mismatch (" + std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()) + ")");
    double dot = x.dot(y);
    double denom = x.squaredNorm() + y.squaredNorm() - dot;
    if (denom <= 0.0)
        return 0.0; // both all-zero
    return dot / denom;
}

RoleReferenceTable::RoleReferenceTable(std::vector<std::string> roles,
                                       std::vector<std::string> languages,
                                       Eigen::MatrixXd relevance)
    : roles_(std::move(roles)), languages_(std::move(languages)), relevance_(std::move(relevance))
{
    if (relevance_.rows() != static_cast<int>(roles_.size()) ||
        relevance_.cols() != static_cast<int>(languages_.size()))
        throw ConfigError("role reference table shape mismatch");
    if (roles_.empty())
        throw ConfigError("role reference table has no roles");
    for (int r = 0; r < relevance_.rows(); ++r) {
        bool nonzero = false;
        for (int c = 0; c < relevance_.cols(); ++c) {
            double v = relevance_(r, c);
            if (v < 0.0 || v > 1.0)
                throw ConfigError("role reference value out of [0,1] for role " + roles_[r]);
            nonzero = nonzero || v > 0.0;
        }
        if (!nonzero)
            throw ConfigError("role '" + roles_[r] + "' has no nonzero relevance");
    }
}

Eigen::VectorXd RoleReferenceTable::role_vector(int role, const std::vector<std::string>& languages) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<int>(languages.size()));
    for (std::size_t i = 0; i < languages.size(); ++i) {
        auto it = std::find(languages_.begin(), languages_.end(), languages[i]);
        if (it != languages_.end())
            out(static_cast<int>(i)) = relevance_(role, static_cast<int>(it - languages_.begin()));
    }
    return out;
}

const RoleReferenceTable& RoleReferenceTable::defaults()
{
    static const RoleReferenceTable table = [] {
        const std::vector<std::string> roles = {"Backend",        "Frontend", "DevOps",
                                                "Data Scientist", "Mobile",   "Documentation+",
                                                "Fullstack",      "Others"};
        // Weights are heuristics, not measurements; tune per deployment.
        // Core languages carry 1.0, secondary associations less. Broad roles
        // (Fullstack) stay at low weight so they cannot outscore a focused
        // role on its own languages.
        const std::map<std::string, std::map<std::string, double>> weights = {
            {"Backend",
             {{"C", 1.0}, {"C++", 1.0}, {"Java", 1.0}, {"Go", 1.0}, {"Rust", 1.0}, {"C#", 1.0},
              {"Ruby", 0.6}}},
            {"Frontend",
             {{"CSS", 1.0}, {"HTML", 1.0}, {"JavaScript", 1.0}, {"TypeScript", 1.0}, {"Vue", 0.5},
              {"SCSS", 0.5}, {"Less", 0.5}, {"Handlebars", 0.5}, {"Smarty", 0.5},
              {"FreeMarker", 0.5}}},
            {"DevOps",
             {{"Dockerfile", 1.0}, {"Shell", 1.0}, {"HCL", 1.0}, {"Makefile", 1.0}, {"CMake", 1.0},
              {"Batchfile", 1.0}, {"PowerShell", 1.0}, {"YAML", 1.0}}},
            {"Data Scientist", {{"Jupyter NB", 1.0}, {"Python", 1.0}, {"PLSQL", 0.8}}},
            {"Mobile", {{"Kotlin", 1.0}, {"Java", 0.5}}},
            {"Documentation+", {{"Markdown", 1.0}}},
            {"Fullstack",
             {{"JavaScript", 0.5}, {"TypeScript", 0.5}, {"HTML", 0.4}, {"CSS", 0.4}, {"Java", 0.5},
              {"Go", 0.4}, {"C#", 0.4}, {"Python", 0.4}, {"Ruby", 0.4}}},
            {"Others", {{"Others", 1.0}, {"Lua", 0.4}, {"Thrift", 0.4}}},
        };

        std::vector<std::string> languages = LanguageMap::defaults().languages();
        Eigen::MatrixXd rel = Eigen::MatrixXd::Zero(static_cast<int>(roles.size()),
                                                    static_cast<int>(languages.size()));
        for (std::size_t r = 0; r < roles.size(); ++r)
            for (const auto& [lang, w] : weights.at(roles[r])) {
                auto it = std::find(languages.begin(), languages.end(), lang);
                if (it == languages.end())
                    throw ConfigError("default role table references unknown language " + lang);
                rel(static_cast<int>(r), static_cast<int>(it - languages.begin())) = w;
            }
        return RoleReferenceTable(roles, std::move(languages), std::move(rel));
    }();
    return table;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

} // namespace

RoleReferenceTable RoleReferenceTable::from_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("role reference table unreadable: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("role reference table empty: " + path);
    auto header = split_csv_line(line);
    if (header.size() < 2)
        throw ConfigError("role reference table header needs at least one language column");
    std::vector<std::string> languages(header.begin() + 1, header.end());

    std::vector<std::string> roles;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ConfigError("role reference table row width mismatch in " + path);
        roles.push_back(cells[0]);
        std::vector<double> row;
        for (std::size_t i = 1; i < cells.size(); ++i) {
            try {
                row.push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                throw ConfigError("role reference table: bad number '" + cells[i] + "' in " + path);
            }
        }
        rows.push_back(std::move(row));
    }

    Eigen::MatrixXd rel(static_cast<int>(rows.size()), static_cast<int>(languages.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            rel(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    return RoleReferenceTable(std::move(roles), std::move(languages), std::move(rel));
}

void RoleReferenceTable::to_csv(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write role reference table: " + path);
    out << "role";
    for (const auto& lang : languages_)
        out << ',' << lang;
    out << '\n';
    for (std::size_t r = 0; r < roles_.size(); ++r) {
        out << roles_[r];
        for (int c = 0; c < relevance_.cols(); ++c) {
            std::ostringstream v;
            v << relevance_(static_cast<int>(r), c);
            out << ',' << v.str();
        }
        out << '\n';
    }
}

RoleFactorModel assign_roles(const FactorModel& model, const RoleReferenceTable& reference)
{
    RoleFactorModel out;
    out.languages = model.variables;
    out.roles = reference.roles();

    const int k = static_cast<int>(model.loadings.cols());
    std::vector<Eigen::VectorXd> role_refs;
    for (std::size_t r = 0; r < reference.roles().size(); ++r)
        role_refs.push_back(reference.role_vector(static_cast<int>(r), out.languages));

    for (int f = 0; f < k; ++f) {
        Eigen::VectorXd clamped = model.loadings.col(f).cwiseMax(0.0);

        int best_role = -1;
        double best_sim = 0.0;
        for (std::size_t r = 0; r < role_refs.size(); ++r) {
            double sim = kh_similarity(clamped, role_refs[r]);
            if (best_role < 0 || sim > best_sim) {
                best_role = static_cast<int>(r);
                best_sim = sim;
            }
        }
        // nothing similar at all: fall through to the catch-all last role
        if (best_sim <= 0.0)
            best_role = static_cast<int>(reference.roles().size()) - 1;

        FactorAssignment fa;
        fa.factor = f;
        fa.role = reference.roles()[best_role];
        fa.similarity = best_sim;
        out.factor_assignments.push_back(fa);

        auto [it, inserted] = out.role_vectors.emplace(fa.role, clamped);
        if (!inserted)
            it->second = it->second.cwiseMax(clamped);
    }
    return out;
}

DeveloperRoleProfile developer_profile(const std::string& author_key,
                                       const Eigen::VectorXd& language_vector,
                                       const RoleFactorModel& model)
{
    DeveloperRoleProfile profile;
    profile.author_key = author_key;
    profile.degenerate = language_vector.isZero(0.0);

    int best = 0;
    for (std::size_t r = 0; r < model.roles.size(); ++r) {
        auto it = model.role_vectors.find(model.roles[r]);
        double score = it == model.role_vectors.end()
                           ? 0.0
                           : kh_similarity(language_vector, it->second);
        profile.scores.push_back(score);
        if (score > profile.scores[best])
            best = static_cast<int>(r);
    }
    profile.dominant_role = model.roles.empty() ? "" : model.roles[best];
    return profile;
}

std::map<std::string, std::map<std::string, double>>
strategy_role_distribution(const std::map<std::string, std::vector<DeveloperRoleProfile>>& by_class,
                           const std::vector<std::string>& roles)
{
    std::map<std::string, std::map<std::string, double>> out;
    for (const auto& [cls, profiles] : by_class) {
        if (profiles.empty())
            continue; // omitted with notice at the reporting layer
        std::map<std::string, double> means;
        for (std::size_t r = 0; r < roles.size(); ++r) {
            double sum = 0.0;
            for (const auto& p : profiles)
                sum += r < p.scores.size() ? p.scores[r] : 0.0;
            means[roles[r]] = sum / static_cast<double>(profiles.size());
        }
        out[cls] = std::move(means);
    }
    return out;
}

} // namespace msmine
