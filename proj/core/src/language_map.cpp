#include "msmine/language_map.hpp"

#include "msmine/errors.hpp"
#include "msmine/identity.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace msmine {

std::string path_basename(const std::string& path)
{
    std::size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string path_extension(const std::string& path)
{
    std::string base = path_basename(path);
    std::size_t dot = base.find_last_of('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == base.size())
        return {};
    return to_lower(base.substr(dot + 1));
}

LanguageMap::LanguageMap(std::map<std::string, std::string> extensions,
                         std::map<std::string, std::string> basenames)
    : extensions_(std::move(extensions)), basenames_(std::move(basenames))
{
    std::set<std::string> names;
    for (const auto& [ext, lang] : extensions_)
        names.insert(lang);
    for (const auto& [base, lang] : basenames_)
        names.insert(lang);
    names.insert(kOthers);
    languages_.assign(names.begin(), names.end()); // std::set iterates sorted
}

std::optional<std::string> LanguageMap::lookup(const std::string& path) const
{
    std::string base = path_basename(path);
    if (auto it = basenames_.find(base); it != basenames_.end())
        return it->second;
    std::string ext = path_extension(path);
    if (ext.empty())
        return std::nullopt;
    if (auto it = extensions_.find(ext); it != extensions_.end())
        return it->second;
    return std::nullopt;
}

std::string LanguageMap::lookup_or_others(const std::string& path) const
{
    auto lang = lookup(path);
    return lang ? *lang : std::string(kOthers);
}

bool LanguageMap::contains_language(const std::string& language) const
{
    return std::binary_search(languages_.begin(), languages_.end(), language);
}

const LanguageMap& LanguageMap::defaults()
{
    static const LanguageMap map(
        {
            {"bat", "Batchfile"},
            {"cmd", "Batchfile"},
            {"c", "C"},
            {"h", "C"},
            {"cs", "C#"},
            {"cpp", "C++"},
            {"cc", "C++"},
            {"cxx", "C++"},
            {"hpp", "C++"},
            {"hh", "C++"},
            {"hxx", "C++"},
            {"cmake", "CMake"},
            {"css", "CSS"},
            {"dockerfile", "Dockerfile"},
            {"ftl", "FreeMarker"},
            {"ftlh", "FreeMarker"},
            {"go", "Go"},
            {"hcl", "HCL"},
            {"tf", "HCL"},
            {"tfvars", "HCL"},
            {"html", "HTML"},
            {"htm", "HTML"},
            {"hbs", "Handlebars"},
            {"handlebars", "Handlebars"},
            {"java", "Java"},
            {"js", "JavaScript"},
            {"jsx", "JavaScript"},
            {"mjs", "JavaScript"},
            {"cjs", "JavaScript"},
            {"ipynb", "Jupyter NB"},
            {"kt", "Kotlin"},
            {"kts", "Kotlin"},
            {"less", "Less"},
            {"lua", "Lua"},
            {"mk", "Makefile"},
            {"md", "Markdown"},
            {"markdown", "Markdown"},
            {"sql", "PLSQL"},
            {"pls", "PLSQL"},
            {"plsql", "PLSQL"},
            {"pks", "PLSQL"},
            {"pkb", "PLSQL"},
            {"ps1", "PowerShell"},
            {"psm1", "PowerShell"},
            {"psd1", "PowerShell"},
            {"py", "Python"},
            {"rb", "Ruby"},
            {"rs", "Rust"},
            {"scss", "SCSS"},
            {"sh", "Shell"},
            {"bash", "Shell"},
            {"zsh", "Shell"},
            {"tpl", "Smarty"},
            {"thrift", "Thrift"},
            {"ts", "TypeScript"},
            {"tsx", "TypeScript"},
            {"vue", "Vue"},
            {"yml", "YAML"},
            {"yaml", "YAML"},
        },
        {
            {"Dockerfile", "Dockerfile"},
            {"Makefile", "Makefile"},
            {"makefile", "Makefile"},
            {"GNUmakefile", "Makefile"},
            {"CMakeLists.txt", "CMake"},
        });
    return map;
}

LanguageMap LanguageMap::from_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("language map unreadable: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("language map parse error in " + path + ": " + e.what());
    }

    std::map<std::string, std::string> exts;
    std::map<std::string, std::string> bases;
    try {
        if (doc.contains("extensions"))
            for (const auto& [k, v] : doc.at("extensions").items())
                exts[to_lower(k)] = v.get<std::string>();
        if (doc.contains("basenames"))
            for (const auto& [k, v] : doc.at("basenames").items())
                bases[k] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("language map " + path + ": " + e.what());
    }
    if (exts.empty() && bases.empty())
        throw ConfigError("language map " + path + " defines no mappings");
    return LanguageMap(std::move(exts), std::move(bases));
}

} // namespace msmine
