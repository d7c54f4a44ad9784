#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace msmine {

/// Maps file paths to language names, by extension with a handful of
/// basename overrides (Dockerfile, Makefile, CMakeLists.txt). Files that
/// match nothing fall through to the catch-all "Others" bucket, which is
/// itself part of the language list.
class LanguageMap {
public:
    static constexpr const char* kOthers = "Others";

    /// The built-in 33-language table (32 concrete languages + "Others").
    static const LanguageMap& defaults();

    /// Loads an override table from JSON:
    ///   {"extensions": {"c": "C", ...}, "basenames": {"Dockerfile": "Dockerfile", ...}}
    static LanguageMap from_json(const std::string& path);

    LanguageMap(std::map<std::string, std::string> extensions,
                std::map<std::string, std::string> basenames);

    /// Language for a repository path, or std::nullopt when unmapped.
    std::optional<std::string> lookup(const std::string& path) const;

    /// Like lookup() but folds unmapped files into "Others".
    std::string lookup_or_others(const std::string& path) const;

    /// All language names (including "Others"), sorted, no duplicates.
    const std::vector<std::string>& languages() const { return languages_; }

    bool contains_language(const std::string& language) const;

private:
    std::map<std::string, std::string> extensions_; // lowercase ext (no dot) -> language
    std::map<std::string, std::string> basenames_;  // exact basename -> language
    std::vector<std::string> languages_;
};

/// Last path component.
std::string path_basename(const std::string& path);

/// Lowercased extension without the dot; empty if none. A leading dot alone
/// ("/.gitignore") is a hidden-file marker, not an extension.
std::string path_extension(const std::string& path);

} // namespace msmine
