#pragma once

#include "msmine/classify.hpp"
#include "msmine/git_miner.hpp"
#include "msmine/manifest.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace msmine {

/// Attribution of one commit to one microservice. A commit touching k
/// microservices yields k events sharing the commit timestamp.
struct TouchEvent {
    AuthorIdentity author;
    std::string microservice;
    std::int64_t timestamp = 0;
    std::string sha;
    FileKind file_kind = FileKind::Other;
};

/// True when `path` lies strictly under directory `prefix`, comparing whole
/// '/'-separated components ("svc-1" must not capture "svc-10/f").
bool path_under(const std::string& path, const std::string& prefix);

/// Matches each changed file against the manifest's microservice paths
/// (longest prefix wins for nested paths) and emits one event per
/// (commit, microservice) pair. The event kind is the strongest kind among
/// the matched files: source > documentation > setup > other. Events are
/// ordered by (timestamp, sha, microservice).
std::vector<TouchEvent> attribute_touches(const ProjectManifest& manifest,
                                          const std::vector<CommitRecord>& commits,
                                          const LanguageMap& languages = LanguageMap::defaults());

} // namespace msmine
