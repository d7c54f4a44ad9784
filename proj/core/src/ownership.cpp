#include "msmine/ownership.hpp"

#include "msmine/errors.hpp"

#include <algorithm>
#include <set>

namespace msmine {

const char* to_string(StrategyLabel label)
{
    switch (label) {
    case StrategyLabel::OneMsPerDeveloper: return "ONE_MS_PER_DEVELOPER";
    case StrategyLabel::OneDevAllMs: return "ONE_DEV_ALL_MS";
    case StrategyLabel::MultiDevAllMs: return "MULTI_DEV_ALL_MS";
    case StrategyLabel::MultiDevSomeMs: return "MULTI_DEV_SOME_MS";
    }
    return "?";
}

int OwnershipMatrix::developer_index(const std::string& key) const
{
    auto it = std::lower_bound(developers.begin(), developers.end(), key);
    if (it == developers.end() || *it != key)
        return -1;
    return static_cast<int>(it - developers.begin());
}

OwnershipMatrix build_ownership_matrix(const std::vector<TouchEvent>& touches,
                                       const OwnershipOptions& options)
{
    std::set<std::string> devs;
    std::set<std::string> services;
    for (const auto& t : touches) {
        if (t.file_kind != FileKind::Source)
            continue;
        devs.insert(t.author.canonical_key);
        services.insert(t.microservice);
    }

    OwnershipMatrix m;
    m.developers.assign(devs.begin(), devs.end());
    m.microservices.assign(services.begin(), services.end());
    m.counts = Eigen::MatrixXi::Zero(static_cast<int>(m.developers.size()),
                                     static_cast<int>(m.microservices.size()));

    // commits whose source touches span >1 microservice, for the optional
    // sequence filter
    std::set<std::string> multi_service_shas;
    if (options.drop_multi_service_commits_from_sequences) {
        std::map<std::string, std::set<std::string>> per_commit;
        for (const auto& t : touches)
            if (t.file_kind == FileKind::Source)
                per_commit[t.sha].insert(t.microservice);
        for (const auto& [sha, ms] : per_commit)
            if (ms.size() > 1)
                multi_service_shas.insert(sha);
    }

    auto ms_index = [&](const std::string& name) {
        return static_cast<int>(std::lower_bound(m.microservices.begin(), m.microservices.end(), name) -
                                m.microservices.begin());
    };

    // touches arrive ordered by (timestamp, sha, microservice), which is the
    // sequence order as well
    for (const auto& t : touches) {
        if (t.file_kind != FileKind::Source)
            continue;
        int d = m.developer_index(t.author.canonical_key);
        m.counts(d, ms_index(t.microservice)) += 1;
        if (!multi_service_shas.count(t.sha))
            m.sequences[t.author.canonical_key].push_back(t.microservice);
    }
    return m;
}

bool select_project(const ProjectManifest& manifest, const std::vector<CommitRecord>& commits,
                    const LanguageMap& languages)
{
    if (manifest.microservice_paths.size() < 2)
        return false;

    const std::int64_t window_end = manifest.as_of_end_epoch();
    const std::int64_t window_start = window_end - 365LL * 86400LL;

    std::set<std::string> active;
    for (const auto& t : attribute_touches(manifest, commits, languages)) {
        if (t.timestamp >= window_start && t.timestamp < window_end)
            active.insert(t.microservice);
        if (active.size() >= 2)
            return true;
    }
    return false;
}

MsPerDeveloper ms_per_developer(const OwnershipMatrix& matrix)
{
    if (matrix.empty())
        throw AnalysisError("ms_per_developer on empty ownership matrix");

    MsPerDeveloper result;
    std::vector<double> as_double;
    for (int d = 0; d < matrix.counts.rows(); ++d) {
        int distinct = 0;
        for (int s = 0; s < matrix.counts.cols(); ++s)
            if (matrix.counts(d, s) > 0)
                ++distinct;
        result.counts.push_back(distinct);
        as_double.push_back(distinct);
    }
    result.summary = five_number_summary(as_double);
    return result;
}

SharedMsCounts shared_ms_counts(const OwnershipMatrix& matrix)
{
    SharedMsCounts out;
    for (int s = 0; s < matrix.counts.cols(); ++s) {
        bool active = false;
        bool shared = false;
        for (int d = 0; d < matrix.counts.rows() && !shared; ++d) {
            if (matrix.counts(d, s) <= 0)
                continue;
            active = true;
            for (int other = 0; other < matrix.counts.cols(); ++other) {
                if (other != s && matrix.counts(d, other) > 0) {
                    shared = true;
                    break;
                }
            }
        }
        if (!active)
            continue;
        if (shared)
            ++out.shared;
        else
            ++out.not_shared;
    }
    return out;
}

int commit_back_count(const std::vector<std::string>& sequence)
{
    std::vector<const std::string*> runs;
    for (const auto& ms : sequence)
        if (runs.empty() || *runs.back() != ms)
            runs.push_back(&ms);

    int count = 0;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (i >= 1 && seen.count(*runs[i]))
            ++count;
        seen.insert(*runs[i]);
    }
    return count;
}

StrategyLabel classify_strategy(const OwnershipMatrix& matrix)
{
    const int devs = static_cast<int>(matrix.counts.rows());
    const int services = static_cast<int>(matrix.counts.cols());

    bool every_dev_single = true;
    int full_coverage = 0;
    for (int d = 0; d < devs; ++d) {
        int distinct = 0;
        bool full = services > 0;
        for (int s = 0; s < services; ++s) {
            if (matrix.counts(d, s) > 0)
                ++distinct;
            else
                full = false;
        }
        if (distinct > 1)
            every_dev_single = false;
        if (full)
            ++full_coverage;
    }

    if (every_dev_single)
        return StrategyLabel::OneMsPerDeveloper;
    if (full_coverage == 1)
        return StrategyLabel::OneDevAllMs;
    if (full_coverage >= 2)
        return StrategyLabel::MultiDevAllMs;
    return StrategyLabel::MultiDevSomeMs;
}

} // namespace msmine
