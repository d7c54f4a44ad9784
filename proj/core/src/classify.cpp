#include "msmine/classify.hpp"

#include <array>

namespace msmine {

namespace {

bool first_component_is(const std::string& path, const std::string& component)
{
    return path.size() > component.size() && path.compare(0, component.size(), component) == 0 &&
           path[component.size()] == '/';
}

} // namespace

const char* to_string(FileKind kind)
{
    switch (kind) {
    case FileKind::Source: return "source";
    case FileKind::Documentation: return "documentation";
    case FileKind::Setup: return "setup";
    case FileKind::Other: return "other";
    }
    return "other";
}

FileKind classify_file(const std::string& path, const LanguageMap& languages)
{
    const std::string base = path_basename(path);
    const std::string ext = path_extension(path);

    static const std::array<const char*, 4> doc_exts = {"md", "rst", "txt", "adoc"};
    static const std::array<const char*, 4> doc_names = {"LICENSE", "NOTICE", "AUTHORS", "CHANGELOG"};
    for (const char* e : doc_exts)
        if (ext == e)
            return FileKind::Documentation;
    for (const char* n : doc_names)
        if (base == n)
            return FileKind::Documentation;

    static const std::array<const char*, 3> setup_names = {".gitignore", ".gitattributes", ".editorconfig"};
    for (const char* n : setup_names)
        if (base == n)
            return FileKind::Setup;
    if (first_component_is(path, ".github") || first_component_is(path, ".circleci") ||
        base == ".travis.yml")
        return FileKind::Setup;

    if (languages.lookup(path))
        return FileKind::Source;
    return FileKind::Other;
}

} // namespace msmine
