#include "msmine/language_matrix.hpp"

#include "msmine/errors.hpp"

#include <algorithm>
#include <map>

namespace msmine {

const char* to_string(Normalization mode)
{
    switch (mode) {
    case Normalization::Proportion: return "proportion";
    case Normalization::MinMax: return "minmax";
    }
    return "?";
}

int DeveloperLanguageMatrix::language_index(const std::string& name) const
{
    auto it = std::lower_bound(languages.begin(), languages.end(), name);
    if (it == languages.end() || *it != name)
        return -1;
    return static_cast<int>(it - languages.begin());
}

DeveloperLanguageMatrix build_language_matrix(const std::vector<CommitRecord>& commits,
                                              const LanguageMap& languages,
                                              Normalization normalization)
{
    DeveloperLanguageMatrix m;
    m.languages = languages.languages();

    std::map<std::string, std::map<std::string, long>> tallies; // author -> language -> files
    for (const auto& commit : commits) {
        if (commit.is_merge)
            continue;
        auto& row = tallies[commit.author.canonical_key];
        for (const auto& file : commit.files)
            row[languages.lookup_or_others(file)] += 1;
    }

    for (auto& [key, row] : tallies) {
        long total = 0;
        for (const auto& [lang, n] : row)
            total += n;
        if (total == 0) {
            m.dropped_contributors.push_back(key);
            continue;
        }
        m.contributors.push_back(key);
    }

    const int rows = static_cast<int>(m.contributors.size());
    const int cols = static_cast<int>(m.languages.size());
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(rows, cols);
    for (int d = 0; d < rows; ++d)
        for (const auto& [lang, n] : tallies[m.contributors[d]])
            counts(d, m.language_index(lang)) += static_cast<double>(n);

    m.values = Eigen::MatrixXd::Zero(rows, cols);
    switch (normalization) {
    case Normalization::Proportion:
        for (int d = 0; d < rows; ++d) {
            double total = counts.row(d).sum();
            m.values.row(d) = counts.row(d) / total;
        }
        break;
    case Normalization::MinMax:
        for (int c = 0; c < cols; ++c) {
            double lo = counts.col(c).minCoeff();
            double hi = counts.col(c).maxCoeff();
            if (hi > lo)
                m.values.col(c) = (counts.col(c).array() - lo) / (hi - lo);
            // constant columns stay 0 and get flagged as zero-variance later
        }
        break;
    }
    return m;
}

} // namespace msmine
