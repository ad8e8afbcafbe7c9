#include "stixdesk/stix.hpp"

#include <algorithm>
#include <set>

#include "crypto.hpp"
#include "stixdesk/error.hpp"

namespace stixdesk {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// StixIdentifier

StixIdentifier StixIdentifier::generate(std::string kind) {
    StixIdentifier id;
    id.kind_ = std::move(kind);
    crypto::random_bytes(id.uuid_);
    id.uuid_[6] = static_cast<std::uint8_t>((id.uuid_[6] & 0x0f) | 0x40);
    id.uuid_[8] = static_cast<std::uint8_t>((id.uuid_[8] & 0x3f) | 0x80);
    return id;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

bool valid_kind_text(std::string_view kind) {
    if (kind.empty() || kind.front() == '-' || kind.back() == '-') return false;
    return std::all_of(kind.begin(), kind.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
}

}  // namespace

StixIdentifier StixIdentifier::parse(std::string_view text) {
    const auto bad = [&] {
        return Error(ErrorCode::InvalidIdentifier, "malformed identifier \"" + std::string(text) + "\"");
    };
    const auto sep = text.find("--");
    if (sep == std::string_view::npos) throw bad();
    const auto kind = text.substr(0, sep);
    const auto uuid = text.substr(sep + 2);
    if (!valid_kind_text(kind) || uuid.size() != 36) throw bad();

    StixIdentifier id;
    id.kind_ = std::string(kind);
    std::size_t byte = 0;
    for (std::size_t i = 0; i < uuid.size();) {
        if (i == 8 || i == 13 || i == 18 || i == 23) {
            if (uuid[i] != '-') throw bad();
            ++i;
            continue;
        }
        const int hi = hex_value(uuid[i]);
        const int lo = hex_value(uuid[i + 1]);
        if (hi < 0 || lo < 0) throw bad();
        id.uuid_[byte++] = static_cast<std::uint8_t>(hi << 4 | lo);
        i += 2;
    }
    return id;
}

std::string StixIdentifier::uuid_text() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(36);
    for (std::size_t i = 0; i < uuid_.size(); ++i) {
        if (i == 4 || i == 6 || i == 8 || i == 10) out.push_back('-');
        out.push_back(digits[uuid_[i] >> 4]);
        out.push_back(digits[uuid_[i] & 0xf]);
    }
    return out;
}

std::string StixIdentifier::str() const { return kind_ + "--" + uuid_text(); }

// ---------------------------------------------------------------------------
// PropertyValue

bool operator==(const PropertyValue& a, const PropertyValue& b) { return a.value == b.value; }

std::string_view PropertyValue::shape_name() const noexcept {
    switch (value.index()) {
        case 0: return "string";
        case 1: return "integer";
        case 2: return "boolean";
        case 3: return "timestamp";
        case 4: return "list-of-string";
        case 5: return "structured";
    }
    return "";
}

bool PropertyValue::is_empty() const noexcept {
    if (const auto* s = std::get_if<std::string>(&value)) return s->empty();
    if (const auto* l = std::get_if<std::vector<std::string>>(&value)) return l->empty();
    if (const auto* m = std::get_if<StructuredValue>(&value)) return m->empty();
    return false;
}

std::string_view to_string(Problem p) noexcept {
    switch (p) {
        case Problem::MissingRequired: return "missing-required";
        case Problem::WrongShape: return "wrong-shape";
        case Problem::NotInVocabulary: return "not-in-vocabulary";
    }
    return "";
}

// ---------------------------------------------------------------------------
// Checks

std::optional<Problem> check_value(const PropertyValue& value, const PropertyDefinition& def, const Catalog& catalog) {
    const auto in_vocab = [&](const std::string& entry) {
        return !def.vocabulary || catalog.vocabulary(*def.vocabulary).contains(entry);
    };
    switch (def.shape) {
        case ValueShape::String:
            if (!std::holds_alternative<std::string>(value.value)) return Problem::WrongShape;
            return std::nullopt;
        case ValueShape::Vocabulary: {
            const auto* s = std::get_if<std::string>(&value.value);
            if (!s) return Problem::WrongShape;
            if (!in_vocab(*s)) return Problem::NotInVocabulary;
            return std::nullopt;
        }
        case ValueShape::StringList: {
            const auto* list = std::get_if<std::vector<std::string>>(&value.value);
            if (!list) return Problem::WrongShape;
            if (!std::all_of(list->begin(), list->end(), in_vocab)) return Problem::NotInVocabulary;
            return std::nullopt;
        }
        case ValueShape::Integer:
            if (!std::holds_alternative<std::int64_t>(value.value)) return Problem::WrongShape;
            return std::nullopt;
        case ValueShape::Boolean:
            if (!std::holds_alternative<bool>(value.value)) return Problem::WrongShape;
            return std::nullopt;
        case ValueShape::Timestamp:
            if (!std::holds_alternative<Timestamp>(value.value)) return Problem::WrongShape;
            return std::nullopt;
        case ValueShape::Structured:
            if (!std::holds_alternative<StructuredValue>(value.value)) return Problem::WrongShape;
            return std::nullopt;
    }
    return Problem::WrongShape;
}

namespace {

bool carries_object_timestamps(const ObjectDefinition& def) { return def.category != Category::SCO; }

}  // namespace

StixObject new_object(const Catalog& catalog, std::string_view kind, Timestamp now) {
    const auto& def = catalog.lookup(kind);
    StixObject obj;
    obj.kind = def.kind;
    obj.id = StixIdentifier::generate(def.kind);
    if (carries_object_timestamps(def)) obj.created = now;
    return obj;
}

SetResult set_property(StixObject object, const Catalog& catalog, std::string_view name, PropertyValue value,
                       Timestamp now) {
    const auto& def = catalog.lookup(object.kind);
    const auto* prop = def.find_property(name);
    if (!prop) {
        throw Error(ErrorCode::UnknownProperty,
                    "\"" + std::string(name) + "\" is not a property of " + object.kind);
    }

    std::optional<ValidationFinding> warning;
    if (value.is_empty()) {
        object.properties.erase(prop->name);
    } else {
        const auto problem = check_value(value, *prop, catalog);
        if (problem == Problem::WrongShape) {
            throw Error(ErrorCode::ShapeMismatch, "property \"" + prop->name + "\" expects " +
                                                      std::string(to_string(prop->shape)) + ", got " +
                                                      std::string(value.shape_name()));
        }
        if (problem == Problem::NotInVocabulary)
            warning = ValidationFinding{object.id, prop->name, Problem::NotInVocabulary};
        object.properties.insert_or_assign(prop->name, std::move(value));
    }
    if (object.created) object.modified = std::max(now, *object.created);
    return {std::move(object), std::move(warning)};
}

std::vector<ValidationFinding> validate_object(const StixObject& object, const Catalog& catalog) {
    const auto& def = catalog.lookup(object.kind);
    std::vector<ValidationFinding> findings;
    for (const auto* list : {&def.common_properties, &def.specific_properties}) {
        for (const auto& prop : *list) {
            if (prop.required && !object.properties.contains(prop.name))
                findings.push_back({object.id, prop.name, Problem::MissingRequired});
        }
    }
    for (const auto& [name, value] : object.properties) {
        const auto* prop = def.find_property(name);
        if (!prop) continue;
        if (auto problem = check_value(value, *prop, catalog)) findings.push_back({object.id, name, *problem});
    }
    return findings;
}

// ---------------------------------------------------------------------------
// JSON mapping

namespace {

[[noreturn]] void shape_mismatch(const PropertyDefinition& def, const json& got) {
    throw Error(ErrorCode::ShapeMismatch, "property \"" + def.name + "\" expects " +
                                              std::string(to_string(def.shape)) + ", got JSON " + got.type_name());
}

std::vector<std::string> string_list(const json& j, const PropertyDefinition& def) {
    if (!j.is_array()) shape_mismatch(def, j);
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_string()) shape_mismatch(def, e);
        out.push_back(e.get<std::string>());
    }
    return out;
}

PropertyValue nested_from_json(const json& j, const PropertyDefinition& def) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_array()) return string_list(j, def);
    if (j.is_object()) {
        StructuredValue map;
        for (const auto& [key, item] : j.items()) map.emplace(key, nested_from_json(item, def));
        return map;
    }
    shape_mismatch(def, j);
}

}  // namespace

PropertyValue value_from_json(const json& j, const PropertyDefinition& def) {
    if (j.is_null()) return PropertyValue{};
    switch (def.shape) {
        case ValueShape::String:
        case ValueShape::Vocabulary:
            if (!j.is_string()) shape_mismatch(def, j);
            return j.get<std::string>();
        case ValueShape::Integer:
            if (!j.is_number_integer()) shape_mismatch(def, j);
            if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
                shape_mismatch(def, j);
            return j.get<std::int64_t>();
        case ValueShape::Boolean:
            if (!j.is_boolean()) shape_mismatch(def, j);
            return j.get<bool>();
        case ValueShape::Timestamp: {
            if (!j.is_string()) shape_mismatch(def, j);
            const auto ts = parse_timestamp(j.get_ref<const std::string&>());
            if (!ts) {
                throw Error(ErrorCode::ShapeMismatch,
                            "property \"" + def.name + "\" expects an RFC 3339 UTC timestamp, got " + j.dump());
            }
            return *ts;
        }
        case ValueShape::StringList:
            return string_list(j, def);
        case ValueShape::Structured:
            if (!j.is_object()) shape_mismatch(def, j);
            return nested_from_json(j, def);
    }
    shape_mismatch(def, j);
}

ordered_json value_to_json(const PropertyValue& value) {
    return std::visit(
        [](const auto& v) -> ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Timestamp>) {
                return format_timestamp(v);
            } else if constexpr (std::is_same_v<T, StructuredValue>) {
                ordered_json obj = ordered_json::object();
                for (const auto& [key, item] : v) obj[key] = value_to_json(item);
                return obj;
            } else {
                return v;
            }
        },
        value.value);
}

ordered_json object_to_json(const StixObject& object) {
    ordered_json j;
    j["type"] = object.kind;
    j["id"] = object.id.str();
    if (object.created) j["created"] = format_timestamp(*object.created);
    if (object.modified) j["modified"] = format_timestamp(*object.modified);
    for (const auto& [name, value] : object.properties) j[name] = value_to_json(value);
    return j;
}

StixObject object_from_json(const json& j, const Catalog& catalog) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "STIX object must be a JSON object");
    auto type_it = j.find("type");
    if (type_it == j.end() || !type_it->is_string())
        throw Error(ErrorCode::MalformedJson, "STIX object lacks a string \"type\"");
    const auto& def = catalog.lookup(type_it->get_ref<const std::string&>());
    auto id_it = j.find("id");
    if (id_it == j.end() || !id_it->is_string())
        throw Error(ErrorCode::MalformedJson, "STIX object lacks a string \"id\"");

    StixObject obj;
    obj.kind = def.kind;
    obj.id = StixIdentifier::parse(id_it->get_ref<const std::string&>());
    if (obj.id.kind() != obj.kind) {
        throw Error(ErrorCode::InvalidIdentifier,
                    "identifier " + obj.id.str() + " does not match type \"" + obj.kind + "\"");
    }

    for (const auto& [key, item] : j.items()) {
        if (key == "type" || key == "id") continue;
        if (carries_object_timestamps(def) && (key == "created" || key == "modified")) {
            const auto ts = item.is_string() ? parse_timestamp(item.get_ref<const std::string&>()) : std::nullopt;
            if (!ts) throw Error(ErrorCode::ShapeMismatch, "\"" + key + "\" must be an RFC 3339 UTC timestamp");
            (key == "created" ? obj.created : obj.modified) = *ts;
            continue;
        }
        const auto* prop = def.find_property(key);
        if (!prop) throw Error(ErrorCode::UnknownProperty, "\"" + key + "\" is not a property of " + def.kind);
        auto value = value_from_json(item, *prop);
        if (!value.is_empty()) obj.properties.emplace(key, std::move(value));
    }
    if (obj.created && obj.modified && *obj.modified < *obj.created)
        throw Error(ErrorCode::InvalidArgument, obj.id.str() + ": modified precedes created");
    return obj;
}

// ---------------------------------------------------------------------------
// Bundles

std::string serialize_bundle(std::span<const StixObject> objects, const StixIdentifier& bundle_id) {
    std::set<StixIdentifier> seen;
    ordered_json list = ordered_json::array();
    for (const auto& obj : objects) {
        if (!seen.insert(obj.id).second)
            throw Error(ErrorCode::DuplicateIdentifier, "duplicate object identifier " + obj.id.str());
        list.push_back(object_to_json(obj));
    }
    ordered_json bundle;
    bundle["type"] = "bundle";
    bundle["id"] = bundle_id.str();
    bundle["objects"] = std::move(list);
    try {
        return bundle.dump();
    } catch (const json::type_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bundle contains invalid UTF-8: ") + e.what());
    }
}

Bundle parse_bundle(const Catalog& catalog, std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedJson, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::NotABundle, "top level is not a JSON object");
    auto type_it = doc.find("type");
    if (type_it == doc.end() || *type_it != "bundle") throw Error(ErrorCode::NotABundle, "\"type\" is not \"bundle\"");
    auto id_it = doc.find("id");
    if (id_it == doc.end() || !id_it->is_string()) throw Error(ErrorCode::NotABundle, "bundle lacks an \"id\"");

    Bundle bundle;
    bundle.id = StixIdentifier::parse(id_it->get_ref<const std::string&>());
    if (bundle.id.kind() != "bundle") throw Error(ErrorCode::NotABundle, "bundle id must start with \"bundle--\"");

    if (auto it = doc.find("objects"); it != doc.end()) {
        if (!it->is_array()) throw Error(ErrorCode::NotABundle, "\"objects\" must be an array");
        std::set<StixIdentifier> seen;
        for (const auto& item : *it) {
            auto obj = object_from_json(item, catalog);
            if (!seen.insert(obj.id).second)
                throw Error(ErrorCode::DuplicateIdentifier, "duplicate object identifier " + obj.id.str());
            bundle.objects.push_back(std::move(obj));
        }
    }
    return bundle;
}

}  // namespace stixdesk
