#include "msmine/touches.hpp"

#include <algorithm>
#include <map>

namespace msmine {

namespace {

int kind_rank(FileKind kind)
{
    switch (kind) {
    case FileKind::Source: return 3;
    case FileKind::Documentation: return 2;
    case FileKind::Setup: return 1;
    case FileKind::Other: return 0;
    }
    return 0;
}

} // namespace

bool path_under(const std::string& path, const std::string& prefix)
{
    if (prefix.empty() || path.size() <= prefix.size())
        return false;
    return path.compare(0, prefix.size(), prefix) == 0 && path[prefix.size()] == '/';
}

std::vector<TouchEvent> attribute_touches(const ProjectManifest& manifest,
                                          const std::vector<CommitRecord>& commits,
                                          const LanguageMap& languages)
{
    std::vector<TouchEvent> events;

    for (const auto& commit : commits) {
        if (commit.is_merge)
            continue;

        // microservice -> strongest file kind seen in this commit
        std::map<std::string, FileKind> matched;
        for (const auto& file : commit.files) {
            const std::string* best = nullptr;
            for (const auto& ms : manifest.microservice_paths) {
                if (!path_under(file, ms))
                    continue;
                if (!best || ms.size() > best->size())
                    best = &ms;
            }
            if (!best)
                continue;
            FileKind kind = classify_file(file, languages);
            auto [it, inserted] = matched.emplace(*best, kind);
            if (!inserted && kind_rank(kind) > kind_rank(it->second))
                it->second = kind;
        }

        for (const auto& [ms, kind] : matched) {
            TouchEvent ev;
            ev.author = commit.author;
            ev.microservice = ms;
            ev.timestamp = commit.timestamp;
            ev.sha = commit.sha;
            ev.file_kind = kind;
            events.push_back(std::move(ev));
        }
    }

    std::sort(events.begin(), events.end(), [](const TouchEvent& a, const TouchEvent& b) {
        return std::tie(a.timestamp, a.sha, a.microservice) <
               std::tie(b.timestamp, b.sha, b.microservice);
    });
    return events;
}

} // namespace msmine
