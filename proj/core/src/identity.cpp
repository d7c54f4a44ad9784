#include "msmine/identity.hpp"

#include "msmine/errors.hpp"

#include <cctype>
#include <fstream>

namespace msmine {

std::string trim(const std::string& s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::string to_lower(const std::string& s)
{
    std::string out = s;
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

AliasMap AliasMap::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("alias file unreadable: " + path);

    AliasMap map;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#')
            continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ConfigError("alias file " + path + ":" + std::to_string(lineno) +
                              ": expected 'canonical<TAB>alias'");
        map.add(line.substr(0, tab), line.substr(tab + 1));
    }
    return map;
}

void AliasMap::add(const std::string& canonical, const std::string& alias)
{
    std::string c = to_lower(trim(canonical));
    std::string a = to_lower(trim(alias));
    if (c.empty() || a.empty())
        throw ConfigError("alias mapping with empty side");
    alias_to_canonical_[a] = c;
}

std::string AliasMap::resolve(const std::string& key) const
{
    auto it = alias_to_canonical_.find(key);
    return it == alias_to_canonical_.end() ? key : it->second;
}

AuthorIdentity resolve_identity(const std::string& raw_name, const std::string& raw_email,
                                const AliasMap& aliases)
{
    std::string email = to_lower(trim(raw_email));
    std::string name = trim(raw_name);

    if (email.empty() && name.empty())
        throw MiningError("author with empty name and email");

    std::string key = email.empty() ? to_lower(name) : email;
    key = aliases.resolve(key);

    AuthorIdentity id;
    id.canonical_key = key;
    id.display_name = name.empty() ? key : name;
    return id;
}

} // namespace msmine
