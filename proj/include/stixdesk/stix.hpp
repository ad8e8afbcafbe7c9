#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stixdesk/catalog.hpp"
#include "stixdesk/time.hpp"

namespace stixdesk {

/// `<kind>--<uuid>`, the uuid being a random (version 4) UUID in lowercase canonical form.
class StixIdentifier {
public:
    StixIdentifier() = default;

    /// Fresh random identifier for `kind`.
    static StixIdentifier generate(std::string kind);

    /// Throws Error{InvalidIdentifier} unless `text` is `<kind>--<canonical uuid>`.
    static StixIdentifier parse(std::string_view text);

    const std::string& kind() const noexcept { return kind_; }
    std::string uuid_text() const;
    std::string str() const;

    auto operator<=>(const StixIdentifier&) const = default;

private:
    std::string kind_;
    std::array<std::uint8_t, 16> uuid_{};
};

struct PropertyValue;
using StructuredValue = std::map<std::string, PropertyValue>;

/// A property value. Nested structured values carry text, integers, booleans, string lists,
/// or further nested maps; their shapes are inferred from JSON, so timestamps inside a
/// structured value are plain text.
struct PropertyValue {
    using Variant = std::variant<std::string, std::int64_t, bool, Timestamp, std::vector<std::string>, StructuredValue>;
    Variant value;

    PropertyValue() = default;
    PropertyValue(std::string v) : value(std::move(v)) {}
    PropertyValue(const char* v) : value(std::string(v)) {}
    PropertyValue(std::int64_t v) : value(v) {}
    PropertyValue(int v) : value(static_cast<std::int64_t>(v)) {}
    PropertyValue(bool v) : value(v) {}
    PropertyValue(Timestamp v) : value(v) {}
    PropertyValue(std::vector<std::string> v) : value(std::move(v)) {}
    PropertyValue(StructuredValue v) : value(std::move(v)) {}

    /// Shape name of the held alternative, as used in ShapeMismatch messages.
    std::string_view shape_name() const noexcept;

    /// Empty text, empty list, or empty map. Setting an empty value clears the property.
    bool is_empty() const noexcept;

    friend bool operator==(const PropertyValue&, const PropertyValue&);
};

struct StixObject {
    StixIdentifier id;
    std::string kind;
    /// Sorted by name, which fixes serialization order.
    std::map<std::string, PropertyValue> properties;
    /// Object-level timestamps are carried by SDOs and SROs only; SCOs leave both unset.
    std::optional<Timestamp> created;
    std::optional<Timestamp> modified;

    bool operator==(const StixObject&) const = default;
};

struct Bundle {
    StixIdentifier id;
    std::vector<StixObject> objects;

    bool operator==(const Bundle&) const = default;
};

enum class Problem { MissingRequired, WrongShape, NotInVocabulary };

std::string_view to_string(Problem p) noexcept;

struct ValidationFinding {
    StixIdentifier object_id;
    std::string property;
    Problem problem = Problem::MissingRequired;

    auto operator<=>(const ValidationFinding&) const = default;
};

/// Outcome of set_property: the updated object plus a vocabulary warning when the stored
/// value is outside its vocabulary. Such values are kept; only the share check flags them.
struct SetResult {
    StixObject object;
    std::optional<ValidationFinding> warning;
};

/// Throws Error{UnknownKind}.
StixObject new_object(const Catalog& catalog, std::string_view kind, Timestamp now);

/// Throws Error{UnknownProperty} or Error{ShapeMismatch}. An empty value removes the property.
SetResult set_property(StixObject object, const Catalog& catalog, std::string_view name, PropertyValue value,
                       Timestamp now);

/// Missing-required findings come first in catalog property order, then per-value findings
/// in property-name order. Throws Error{UnknownKind}.
std::vector<ValidationFinding> validate_object(const StixObject& object, const Catalog& catalog);

/// Shape and vocabulary checks for one value against its definition.
std::optional<Problem> check_value(const PropertyValue& value, const PropertyDefinition& def, const Catalog& catalog);

/// Converts a JSON value to a PropertyValue of the shape `def` demands.
/// Throws Error{ShapeMismatch}; JSON null maps to an empty value.
PropertyValue value_from_json(const nlohmann::json& j, const PropertyDefinition& def);
nlohmann::ordered_json value_to_json(const PropertyValue& value);

nlohmann::ordered_json object_to_json(const StixObject& object);
/// Throws Error{UnknownKind}, Error{UnknownProperty}, Error{ShapeMismatch}, Error{InvalidIdentifier},
/// or Error{MalformedJson} for structural problems.
StixObject object_from_json(const nlohmann::json& j, const Catalog& catalog);

/// Compact JSON, keys ordered type, id, created, modified, then properties by name.
/// Throws Error{DuplicateIdentifier}.
std::string serialize_bundle(std::span<const StixObject> objects, const StixIdentifier& bundle_id);

/// Throws Error{MalformedJson}, Error{NotABundle}, Error{UnknownKind}, Error{DuplicateIdentifier},
/// or any error object_from_json raises.
Bundle parse_bundle(const Catalog& catalog, std::string_view text);

}  // namespace stixdesk
