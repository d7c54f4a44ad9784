#pragma once

#include "msmine/git_miner.hpp"
#include "msmine/manifest.hpp"
#include "msmine/summary_stats.hpp"
#include "msmine/touches.hpp"

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

namespace msmine {

/// How a project distributes microservice work across contributors.
enum class StrategyLabel {
    OneMsPerDeveloper,
    OneDevAllMs,
    MultiDevAllMs,
    MultiDevSomeMs,
};

const char* to_string(StrategyLabel label);

struct OwnershipOptions {
    /// When set, commits whose source changes span several microservices are
    /// left out of the per-developer touch sequences (they stay in the count
    /// matrix). Avoids artificial "switches" inside a single commit.
    bool drop_multi_service_commits_from_sequences = false;
};

/// Developer x microservice matrix of source-file touch counts, plus each
/// developer's chronological microservice sequence. Rows cover developers
/// with at least one source touch; columns cover microservices with at
/// least one source touch. Both axes are sorted lexicographically.
struct OwnershipMatrix {
    std::vector<std::string> developers;
    std::vector<std::string> microservices;
    Eigen::MatrixXi counts; // developers.size() x microservices.size()
    std::map<std::string, std::vector<std::string>> sequences;

    bool empty() const { return developers.empty() || microservices.empty(); }
    int developer_index(const std::string& key) const;
};

OwnershipMatrix build_ownership_matrix(const std::vector<TouchEvent>& touches,
                                       const OwnershipOptions& options = {});

/// Inclusion rule: the manifest lists at least 2 microservices AND at least
/// 2 distinct microservices received a touch in the 365 days ending with the
/// manifest's as_of day.
bool select_project(const ProjectManifest& manifest, const std::vector<CommitRecord>& commits,
                    const LanguageMap& languages = LanguageMap::defaults());

struct MsPerDeveloper {
    std::vector<int> counts; // aligned with matrix.developers
    FiveNumberSummary summary;
};

/// Distinct microservices touched per developer. Throws AnalysisError on an
/// empty matrix.
MsPerDeveloper ms_per_developer(const OwnershipMatrix& matrix);

struct SharedMsCounts {
    int shared = 0;
    int not_shared = 0;
};

/// A microservice is shared when some developer active on it is also active
/// on another microservice. shared + not_shared = active microservices.
SharedMsCounts shared_ms_counts(const OwnershipMatrix& matrix);

/// Times a developer returns to a microservice already worked on, counted on
/// the run-collapsed sequence (consecutive repeats are one visit).
int commit_back_count(const std::vector<std::string>& sequence);

StrategyLabel classify_strategy(const OwnershipMatrix& matrix);

} // namespace msmine
