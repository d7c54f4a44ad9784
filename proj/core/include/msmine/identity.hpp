#pragma once

#include <map>
#include <string>

namespace msmine {

/// A resolved developer identity. Two raw (name, email) pairs with the same
/// canonical_key are treated as the same person everywhere downstream.
struct AuthorIdentity {
    std::string canonical_key; // lowercase, trimmed; email when present, else name
    std::string display_name;

    friend bool operator==(const AuthorIdentity&, const AuthorIdentity&) = default;
};

/// Optional alias table, one mapping per line: "canonical <tab> alias".
/// Blank lines and lines starting with '#' are ignored.
class AliasMap {
public:
    AliasMap() = default;

    static AliasMap load(const std::string& path);

    void add(const std::string& canonical, const std::string& alias);

    /// Returns the canonical form of `key`, or `key` itself if unmapped.
    /// A single lookup; canonical entries are expected to be canonical already.
    std::string resolve(const std::string& key) const;

    bool empty() const { return alias_to_canonical_.empty(); }
    std::size_t size() const { return alias_to_canonical_.size(); }

private:
    std::map<std::string, std::string> alias_to_canonical_;
};

std::string trim(const std::string& s);
std::string to_lower(const std::string& s);

/// Canonicalizes a raw author into an identity. Keys on the email when
/// non-empty, otherwise on the name. Throws MiningError if both are empty.
AuthorIdentity resolve_identity(const std::string& raw_name, const std::string& raw_email,
                                const AliasMap& aliases = {});

} // namespace msmine
