#pragma once

#include "msmine/git_miner.hpp"
#include "msmine/language_map.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace msmine {

enum class Normalization {
    Proportion, // per contributor: share of the contributor's file changes
    MinMax,     // per language column: (x - min) / (max - min)
};

const char* to_string(Normalization mode);

/// Contributor x language matrix of normalized contribution intensities,
/// every value in [0, 1]. Contributors are sorted by canonical key,
/// languages by name (the language map's order).
struct DeveloperLanguageMatrix {
    std::vector<std::string> contributors;
    std::vector<std::string> languages;
    Eigen::MatrixXd values;
    std::vector<std::string> dropped_contributors; // had no mapped file changes

    int language_index(const std::string& name) const;
};

/// Tallies every changed file of every commit by language (unmapped
/// extensions count as "Others") and normalizes. Commits from several
/// projects may be concatenated; the same author key pools across projects.
DeveloperLanguageMatrix build_language_matrix(const std::vector<CommitRecord>& commits,
                                              const LanguageMap& languages = LanguageMap::defaults(),
                                              Normalization normalization = Normalization::Proportion);

} // namespace msmine
