#pragma once

#include "msmine/efa.hpp"

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

namespace msmine {

/// Kumar-Hassebrook similarity x.y / (|x|^2 + |y|^2 - x.y) for non-negative
/// vectors; 0 when either vector is all-zero. Throws AnalysisError on a
/// length mismatch.
double kh_similarity(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Role -> language relevance table. Values in [0, 1]; the language axis is
/// shared with the EFA language list.
class RoleReferenceTable {
public:
    RoleReferenceTable(std::vector<std::string> roles, std::vector<std::string> languages,
                       Eigen::MatrixXd relevance);

    /// Built-in heuristic table over the default language map. Operator
    /// tunable: export with to_csv, edit, reload with from_csv.
    static const RoleReferenceTable& defaults();

    /// CSV with a language header row and one role per row.
    static RoleReferenceTable from_csv(const std::string& path);
    void to_csv(const std::string& path) const;

    const std::vector<std::string>& roles() const { return roles_; }
    const std::vector<std::string>& languages() const { return languages_; }
    const Eigen::MatrixXd& relevance() const { return relevance_; } // roles x languages

    /// Relevance row expressed over an arbitrary language list (unknown
    /// languages read as 0).
    Eigen::VectorXd role_vector(int role, const std::vector<std::string>& languages) const;

private:
    std::vector<std::string> roles_;
    std::vector<std::string> languages_;
    Eigen::MatrixXd relevance_;
};

struct FactorAssignment {
    int factor = 0;
    std::string role;
    double similarity = 0.0;
};

/// Factors mapped onto roles; same-role factors merged by element-wise max.
struct RoleFactorModel {
    std::vector<std::string> languages; // axis for every vector below
    std::vector<std::string> roles;     // reference order
    std::vector<FactorAssignment> factor_assignments;
    std::map<std::string, Eigen::VectorXd> role_vectors; // only roles with >= 1 factor
};

/// Assigns each factor the reference role with the highest KH similarity
/// (negative loadings clamped to 0 first; an all-zero factor goes to the
/// catch-all last role). Ties break by role order.
RoleFactorModel assign_roles(const FactorModel& model, const RoleReferenceTable& reference);

struct DeveloperRoleProfile {
    std::string author_key;
    std::vector<double> scores; // aligned with model.roles
    std::string dominant_role;
    bool degenerate = false; // all-zero contribution vector
};

/// KH similarity of one contributor's language vector against every merged
/// role vector. Roles without factors score 0. Dominant role is the argmax,
/// ties broken by role order.
DeveloperRoleProfile developer_profile(const std::string& author_key,
                                       const Eigen::VectorXd& language_vector,
                                       const RoleFactorModel& model);

/// Mean role scores per contributor class, radar-chart ready. Classes with
/// no members are omitted.
std::map<std::string, std::map<std::string, double>>
strategy_role_distribution(const std::map<std::string, std::vector<DeveloperRoleProfile>>& by_class,
                           const std::vector<std::string>& roles);

} // namespace msmine
