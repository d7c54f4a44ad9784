#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace msmine {

/// One project to analyze: a local git clone plus the list of microservice
/// root directories, given as repository-relative paths.
struct ProjectManifest {
    std::string name;
    std::string repo_path;
    std::vector<std::string> microservice_paths; // normalized: '/' separators, no trailing '/'
    std::string as_of;                           // "YYYY-MM-DD", the analysis "now"

    /// Epoch seconds of the instant right after the as_of day (exclusive upper
    /// bound for "has happened by as_of").
    std::int64_t as_of_end_epoch() const;

    /// Stable content hash used as part of the commit-cache key.
    std::uint64_t content_hash() const;
};

/// Normalizes one repository-relative path: backslashes to '/', collapse
/// duplicate separators, strip leading "./" and trailing '/'.
std::string normalize_repo_path(const std::string& path);

/// Parses "YYYY-MM-DD" into epoch seconds at 00:00:00 UTC. Throws ConfigError
/// on malformed input.
std::int64_t parse_utc_date(const std::string& date);

/// Loads and validates a manifest JSON file:
///   {"name": ..., "repo_path": ..., "microservices": [...], "as_of": "YYYY-MM-DD"}
/// Throws ConfigError on parse errors, duplicate or absolute microservice
/// paths, or an empty microservice list.
ProjectManifest load_manifest(const std::string& path);

/// Validates/normalizes an already constructed manifest (same rules as
/// load_manifest).
void validate_manifest(ProjectManifest& manifest);

} // namespace msmine
