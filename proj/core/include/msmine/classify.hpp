#pragma once

#include "msmine/language_map.hpp"

#include <string>

namespace msmine {

enum class FileKind { Source, Documentation, Setup, Other };

const char* to_string(FileKind kind);

/// Classifies one repository path. Precedence: documentation, then setup,
/// then source (language-mapped), then other. The setup-before-source order
/// matters for CI configs: ".github/workflows/ci.yml" is setup even though
/// YAML is a mapped language.
FileKind classify_file(const std::string& path, const LanguageMap& languages = LanguageMap::defaults());

} // namespace msmine
