#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace stixdesk {

enum class Category { SDO, SRO, SCO };

/// Affinity grouping used to cluster the object picker.
enum class Group { Ttp, Adversary, Ungrouped };

enum class ValueShape {
    String,
    Integer,
    Boolean,
    Timestamp,
    StringList,
    Structured,
    Vocabulary,
};

std::string_view to_string(Category c) noexcept;
std::string_view to_string(Group g) noexcept;
std::string_view to_string(ValueShape s) noexcept;
std::optional<Category> parse_category(std::string_view text) noexcept;
std::optional<Group> parse_group(std::string_view text) noexcept;
std::optional<ValueShape> parse_shape(std::string_view text) noexcept;

struct PropertyDefinition {
    std::string name;
    ValueShape shape = ValueShape::String;
    bool required = false;
    /// Mandatory for ValueShape::Vocabulary; optional on StringList, where every entry is checked.
    std::optional<std::string> vocabulary;
    std::string description;

    bool operator==(const PropertyDefinition&) const = default;
};

struct ObjectDefinition {
    std::string kind;
    Category category = Category::SDO;
    Group group = Group::Ungrouped;
    std::string description;
    std::string doc_link;
    std::string thumbnail_ref;
    std::vector<PropertyDefinition> common_properties;
    std::vector<PropertyDefinition> specific_properties;

    /// Searches common then specific properties.
    const PropertyDefinition* find_property(std::string_view name) const noexcept;

    bool operator==(const ObjectDefinition&) const = default;
};

struct Vocabulary {
    std::string name;
    std::vector<std::string> entries;

    bool contains(std::string_view value) const noexcept;

    bool operator==(const Vocabulary&) const = default;
};

/// The STIX definition set. Immutable once loaded; share it freely between threads.
class Catalog {
public:
    /// Reads the definitions and vocabularies files and checks every invariant:
    /// unique kinds and property names, vocabulary references resolve, and the per-category
    /// counts equal those declared by the file (18/2/36 when the file declares none).
    static Catalog load(const std::filesystem::path& definitions_file,
                        const std::filesystem::path& vocabularies_file);

    /// Same checks as load(), over already-parsed documents.
    static Catalog from_json(const nlohmann::json& definitions, const nlohmann::json& vocabularies);

    const std::string& version() const noexcept { return version_; }

    /// Alphabetical by kind, optionally restricted to one category.
    std::vector<const ObjectDefinition*> list_kinds(std::optional<Category> category = std::nullopt) const;

    /// Throws Error{UnknownKind}.
    const ObjectDefinition& lookup(std::string_view kind) const;
    const ObjectDefinition* find(std::string_view kind) const noexcept;

    /// Throws Error{UnknownVocabulary}.
    const Vocabulary& vocabulary(std::string_view name) const;
    const std::map<std::string, Vocabulary, std::less<>>& vocabularies() const noexcept { return vocabularies_; }

    std::size_t count(Category category) const noexcept;

    bool operator==(const Catalog&) const = default;

private:
    std::string version_;
    std::map<std::string, ObjectDefinition, std::less<>> definitions_;
    std::map<std::string, Vocabulary, std::less<>> vocabularies_;
};

nlohmann::json to_json(const PropertyDefinition& def);
nlohmann::json to_json(const ObjectDefinition& def);
nlohmann::json to_json(const Vocabulary& vocab);

}  // namespace stixdesk
