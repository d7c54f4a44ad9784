#pragma once

#include "msmine/identity.hpp"
#include "msmine/manifest.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace msmine {

/// One mined commit. Raw author fields are kept alongside the resolved
/// identity so cached records can be re-resolved when the alias table
/// changes without re-mining.
struct CommitRecord {
    std::string sha; // 40-hex
    AuthorIdentity author;
    std::string raw_name;
    std::string raw_email;
    std::int64_t timestamp = 0; // author time, UTC seconds
    std::vector<std::string> files;
    bool is_merge = false;
};

/// Head commit sha of the clone's checked-out branch. Empty string for a
/// repository with no commits yet; throws MiningError when the path is not
/// a readable git repository.
std::string repo_head_sha(const std::string& repo_path);

/// Enumerates all non-merge commits on the default branch's first-parent
/// history, each with its changed-file list, ordered by (timestamp, sha).
/// Commits that change no files are dropped. Throws MiningError for
/// unreadable repositories and for shallow clones (truncated history).
std::vector<CommitRecord> enumerate_commits(const ProjectManifest& manifest,
                                            const AliasMap& aliases = {});

/// Newline-delimited JSON commit cache. The key (head sha, manifest hash)
/// is baked into the file name, so a stale cache is simply never read.
class CommitCache {
public:
    CommitCache(std::string cache_dir) : dir_(std::move(cache_dir)) {}

    std::string path_for(const ProjectManifest& manifest, const std::string& head_sha) const;

    /// Loads cached records if present; identities are re-resolved with the
    /// current alias table. Returns true on a hit.
    bool load(const ProjectManifest& manifest, const std::string& head_sha,
              const AliasMap& aliases, std::vector<CommitRecord>& out) const;

    void store(const ProjectManifest& manifest, const std::string& head_sha,
               const std::vector<CommitRecord>& records) const;

private:
    std::string dir_;
};

std::string commit_record_to_json(const CommitRecord& record);
CommitRecord commit_record_from_json(const std::string& line);

/// Cache-aware mining: load on hit, else enumerate and store. `mined_fresh`,
/// when given, reports whether git was actually consulted.
std::vector<CommitRecord> mine_commits(const ProjectManifest& manifest, const AliasMap& aliases,
                                       const CommitCache* cache, bool* mined_fresh = nullptr);

} // namespace msmine
