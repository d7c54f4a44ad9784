#include "msmine/git_miner.hpp"

#include "msmine/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace msmine {

namespace {

// Field separators for the git pretty format; neither byte can appear in a
// sha, a timestamp, or a sane author field.
constexpr char kRecordStart = '\x01';
constexpr char kFieldSep = '\x02';

std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out.push_back(c);
    }
    out += "'";
    return out;
}

struct CommandResult {
    int status = -1;
    std::string out;
};

CommandResult run_command(const std::string& command)
{
    CommandResult result;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe)
        throw MiningError("failed to spawn: " + command);
    std::array<char, 65536> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.out.append(buf.data(), n);
    result.status = pclose(pipe);
    return result;
}

std::string git_prefix(const std::string& repo_path)
{
    return "git -C " + shell_quote(repo_path) + " ";
}

bool repo_is_git(const std::string& repo_path)
{
    auto r = run_command(git_prefix(repo_path) + "rev-parse --is-inside-work-tree");
    return r.status == 0 && r.out.rfind("true", 0) == 0;
}

bool repo_is_shallow(const std::string& repo_path)
{
    auto r = run_command(git_prefix(repo_path) + "rev-parse --is-shallow-repository");
    return r.status == 0 && r.out.rfind("true", 0) == 0;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace

std::string repo_head_sha(const std::string& repo_path)
{
    if (!std::filesystem::exists(repo_path))
        throw MiningError("repository path does not exist: " + repo_path);
    if (!repo_is_git(repo_path))
        throw MiningError("not a git repository: " + repo_path);

    auto r = run_command(git_prefix(repo_path) + "rev-parse HEAD");
    if (r.status != 0)
        return {}; // no commits yet
    std::string sha = r.out;
    while (!sha.empty() && (sha.back() == '\n' || sha.back() == '\r'))
        sha.pop_back();
    return sha;
}

std::vector<CommitRecord> enumerate_commits(const ProjectManifest& manifest, const AliasMap& aliases)
{
    const std::string& repo = manifest.repo_path;
    std::string head = repo_head_sha(repo); // validates the repository
    if (head.empty())
        return {};
    if (repo_is_shallow(repo))
        throw MiningError("repository " + repo +
                          " is a shallow clone; history is truncated, re-clone with full depth");

    // -z delimits file names with NUL and disables path quoting; every record
    // begins with \x01 and carries \x02-separated header fields.
    std::string cmd = git_prefix(repo) +
                      "log HEAD --first-parent --no-merges --no-renames -z --name-only "
                      "--pretty=format:%x01%H%x02%at%x02%ae%x02%an%x02";
    auto r = run_command(cmd);
    if (r.status != 0)
        throw MiningError("git log failed in " + repo);

    std::vector<CommitRecord> records;
    std::size_t pos = 0;
    const std::string& out = r.out;
    while (pos < out.size()) {
        if (out[pos] != kRecordStart)
            throw MiningError("unexpected git log framing in " + repo);
        std::size_t next = out.find(kRecordStart, pos + 1);
        std::string chunk = out.substr(pos + 1, (next == std::string::npos ? out.size() : next) - pos - 1);
        pos = next == std::string::npos ? out.size() : next;

        // header runs to the '\n' right after the trailing field separator
        std::size_t header_end = chunk.find('\n');
        std::string header = header_end == std::string::npos ? chunk : chunk.substr(0, header_end);
        auto fields = split(header, kFieldSep);
        if (fields.size() < 4)
            throw MiningError("malformed git log record in " + repo);

        CommitRecord rec;
        rec.sha = fields[0];
        rec.timestamp = std::strtoll(fields[1].c_str(), nullptr, 10);
        rec.raw_email = fields[2];
        rec.raw_name = fields[3];
        rec.is_merge = false;
        if (rec.sha.size() != 40 || rec.timestamp <= 0)
            throw MiningError("malformed commit header for '" + rec.sha + "' in " + repo);

        if (header_end != std::string::npos) {
            for (auto& f : split(chunk.substr(header_end + 1), '\0'))
                if (!f.empty())
                    rec.files.push_back(normalize_repo_path(f));
        }
        if (rec.files.empty())
            continue; // empty commits carry no attribution signal
        try {
            rec.author = resolve_identity(rec.raw_name, rec.raw_email, aliases);
        } catch (const MiningError& e) {
            throw MiningError(std::string(e.what()) + " (commit " + rec.sha + ")");
        }
        records.push_back(std::move(rec));
    }

    std::sort(records.begin(), records.end(), [](const CommitRecord& a, const CommitRecord& b) {
        return std::tie(a.timestamp, a.sha) < std::tie(b.timestamp, b.sha);
    });
    return records;
}

std::string commit_record_to_json(const CommitRecord& record)
{
    nlohmann::json j;
    j["sha"] = record.sha;
    j["timestamp"] = record.timestamp;
    j["raw_name"] = record.raw_name;
    j["raw_email"] = record.raw_email;
    j["author_key"] = record.author.canonical_key;
    j["author_name"] = record.author.display_name;
    j["files"] = record.files;
    j["is_merge"] = record.is_merge;
    return j.dump();
}

CommitRecord commit_record_from_json(const std::string& line)
{
    nlohmann::json j = nlohmann::json::parse(line);
    CommitRecord rec;
    rec.sha = j.at("sha").get<std::string>();
    rec.timestamp = j.at("timestamp").get<std::int64_t>();
    rec.raw_name = j.at("raw_name").get<std::string>();
    rec.raw_email = j.at("raw_email").get<std::string>();
    rec.author.canonical_key = j.at("author_key").get<std::string>();
    rec.author.display_name = j.at("author_name").get<std::string>();
    rec.files = j.at("files").get<std::vector<std::string>>();
    rec.is_merge = j.at("is_merge").get<bool>();
    return rec;
}

std::string CommitCache::path_for(const ProjectManifest& manifest, const std::string& head_sha) const
{
    std::string safe_name;
    for (char c : manifest.name)
        safe_name.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'
                                ? c
                                : '_');
    std::ostringstream name;
    name << safe_name << '-' << (head_sha.empty() ? "empty" : head_sha.substr(0, 12)) << '-'
         << std::hex << manifest.content_hash() << ".commits.ndjson";
    return (std::filesystem::path(dir_) / name.str()).string();
}

bool CommitCache::load(const ProjectManifest& manifest, const std::string& head_sha,
                       const AliasMap& aliases, std::vector<CommitRecord>& out) const
{
    std::ifstream in(path_for(manifest, head_sha));
    if (!in)
        return false;
    out.clear();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        try {
            CommitRecord rec = commit_record_from_json(line);
            rec.author = resolve_identity(rec.raw_name, rec.raw_email, aliases);
            out.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw MiningError("corrupt commit cache for " + manifest.name + ": " + e.what());
        }
    }
    return true;
}

void CommitCache::store(const ProjectManifest& manifest, const std::string& head_sha,
                        const std::vector<CommitRecord>& records) const
{
    std::filesystem::create_directories(dir_);
    std::string path = path_for(manifest, head_sha);
    std::string tmp = path + ".tmp";
    {
        std::ofstream outf(tmp, std::ios::binary | std::ios::trunc);
        if (!outf)
            throw MiningError("cannot write commit cache: " + tmp);
        for (const auto& rec : records)
            outf << commit_record_to_json(rec) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::vector<CommitRecord> mine_commits(const ProjectManifest& manifest, const AliasMap& aliases,
                                       const CommitCache* cache, bool* mined_fresh)
{
    std::string head = repo_head_sha(manifest.repo_path);
    std::vector<CommitRecord> records;
    if (cache && cache->load(manifest, head, aliases, records)) {
        if (mined_fresh)
            *mined_fresh = false;
        return records;
    }
    records = enumerate_commits(manifest, aliases);
    if (cache)
        cache->store(manifest, head, records);
    if (mined_fresh)
        *mined_fresh = true;
    return records;
}

} // namespace msmine
