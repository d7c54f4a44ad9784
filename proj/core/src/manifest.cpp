#include "msmine/manifest.hpp"

#include "msmine/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace msmine {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s)
{
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    h ^= 0xff; // field separator
    h *= 1099511628211ULL;
    return h;
}

bool is_absolute_path(const std::string& p)
{
    if (p.empty())
        return false;
    if (p.front() == '/' || p.front() == '\\')
        return true;
    // drive letter, e.g. "C:\svc"
    return p.size() >= 2 && std::isalpha(static_cast<unsigned char>(p[0])) && p[1] == ':';
}

} // namespace

std::string normalize_repo_path(const std::string& path)
{
    std::string out;
    out.reserve(path.size());
    for (char c : path) {
        if (c == '\\')
            c = '/';
        if (c == '/' && !out.empty() && out.back() == '/')
            continue;
        out.push_back(c);
    }
    while (out.size() >= 2 && out[0] == '.' && out[1] == '/')
        out.erase(0, 2);
    while (!out.empty() && out.back() == '/')
        out.pop_back();
    return out;
}

std::int64_t parse_utc_date(const std::string& date)
{
    int y = 0, m = 0, d = 0;
    if (date.size() != 10 || date[4] != '-' || date[7] != '-' ||
        std::sscanf(date.c_str(), "%4d-%2d-%2d", &y, &m, &d) != 3)
        throw ConfigError("malformed date (expected YYYY-MM-DD): '" + date + "'");
    if (m < 1 || m > 12 || d < 1 || d > 31)
        throw ConfigError("date out of range: '" + date + "'");

    std::tm tm{};
    tm.tm_year = y - 1900;
    tm.tm_mon = m - 1;
    tm.tm_mday = d;
    std::time_t t = timegm(&tm);
    if (t == static_cast<std::time_t>(-1))
        throw ConfigError("unrepresentable date: '" + date + "'");
    return static_cast<std::int64_t>(t);
}

std::int64_t ProjectManifest::as_of_end_epoch() const
{
    return parse_utc_date(as_of) + 86400;
}

std::uint64_t ProjectManifest::content_hash() const
{
    std::uint64_t h = 1469598103934665603ULL;
    h = fnv1a(h, name);
    h = fnv1a(h, repo_path);
    h = fnv1a(h, as_of);
    for (const auto& p : microservice_paths)
        h = fnv1a(h, p);
    return h;
}

void validate_manifest(ProjectManifest& manifest)
{
    if (manifest.name.find_first_not_of(" \t\r\n") == std::string::npos)
        throw ConfigError("manifest has empty project name");
    if (manifest.microservice_paths.empty())
        throw ConfigError("manifest '" + manifest.name + "': empty microservice list");

    std::set<std::string> seen;
    std::vector<std::string> normalized;
    normalized.reserve(manifest.microservice_paths.size());
    for (const auto& raw : manifest.microservice_paths) {
        if (is_absolute_path(raw))
            throw ConfigError("manifest '" + manifest.name + "': absolute microservice path '" + raw + "'");
        std::string p = normalize_repo_path(raw);
        if (p.empty())
            throw ConfigError("manifest '" + manifest.name + "': empty microservice path");
        if (!seen.insert(p).second)
            throw ConfigError("manifest '" + manifest.name + "': duplicate microservice path '" + p + "'");
        normalized.push_back(std::move(p));
    }
    manifest.microservice_paths = std::move(normalized);

    parse_utc_date(manifest.as_of); // validates format
}

ProjectManifest load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("manifest unreadable: " + path);

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest parse error in " + path + ": " + e.what());
    }

    ProjectManifest m;
    try {
        m.name = doc.at("name").get<std::string>();
        m.repo_path = doc.at("repo_path").get<std::string>();
        m.microservice_paths = doc.at("microservices").get<std::vector<std::string>>();
        m.as_of = doc.at("as_of").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest " + path + " missing or mistyped field: " + e.what());
    }
    validate_manifest(m);
    return m;
}

} // namespace msmine
