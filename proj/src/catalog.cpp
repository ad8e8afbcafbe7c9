#include "stixdesk/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "stixdesk/error.hpp"

namespace stixdesk {

using nlohmann::json;

std::string_view to_string(Category c) noexcept {
    switch (c) {
        case Category::SDO: return "SDO";
        case Category::SRO: return "SRO";
        case Category::SCO: return "SCO";
    }
    return "";
}

std::string_view to_string(Group g) noexcept {
    switch (g) {
        case Group::Ttp: return "ttp";
        case Group::Adversary: return "adversary";
        case Group::Ungrouped: return "ungrouped";
    }
    return "";
}

std::string_view to_string(ValueShape s) noexcept {
    switch (s) {
        case ValueShape::String: return "string";
        case ValueShape::Integer: return "integer";
        case ValueShape::Boolean: return "boolean";
        case ValueShape::Timestamp: return "timestamp";
        case ValueShape::StringList: return "list-of-string";
        case ValueShape::Structured: return "structured";
        case ValueShape::Vocabulary: return "vocabulary";
    }
    return "";
}

std::optional<Category> parse_category(std::string_view text) noexcept {
    for (auto c : {Category::SDO, Category::SRO, Category::SCO})
        if (to_string(c) == text) return c;
    return std::nullopt;
}

std::optional<Group> parse_group(std::string_view text) noexcept {
    for (auto g : {Group::Ttp, Group::Adversary, Group::Ungrouped})
        if (to_string(g) == text) return g;
    return std::nullopt;
}

std::optional<ValueShape> parse_shape(std::string_view text) noexcept {
    for (auto s : {ValueShape::String, ValueShape::Integer, ValueShape::Boolean, ValueShape::Timestamp,
                   ValueShape::StringList, ValueShape::Structured, ValueShape::Vocabulary})
        if (to_string(s) == text) return s;
    return std::nullopt;
}

const PropertyDefinition* ObjectDefinition::find_property(std::string_view name) const noexcept {
    for (const auto* list : {&common_properties, &specific_properties})
        for (const auto& p : *list)
            if (p.name == name) return &p;
    return nullptr;
}

bool Vocabulary::contains(std::string_view value) const noexcept {
    return std::find(entries.begin(), entries.end(), value) != entries.end();
}

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& why) {
    throw Error(ErrorCode::MalformedCatalog, where + ": " + why);
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        malformed(path.string(), e.what());
    }
}

const json& member(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) malformed(where, std::string("missing \"") + key + "\"");
    return *it;
}

std::string text_member(const json& obj, const char* key, const std::string& where) {
    const auto& v = member(obj, key, where);
    if (!v.is_string()) malformed(where, std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

bool valid_kind_name(std::string_view kind) {
    if (kind.empty() || kind.front() == '-' || kind.back() == '-') return false;
    return std::all_of(kind.begin(), kind.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
}

PropertyDefinition parse_property(const json& j, const std::string& where) {
    if (!j.is_object()) malformed(where, "property entry must be an object");
    PropertyDefinition p;
    p.name = text_member(j, "name", where);
    const std::string at = where + "." + p.name;
    if (p.name.empty()) malformed(where, "empty property name");
    auto shape = parse_shape(text_member(j, "shape", at));
    if (!shape) malformed(at, "unknown shape \"" + j["shape"].get<std::string>() + "\"");
    p.shape = *shape;
    const auto& req = member(j, "required", at);
    if (!req.is_boolean()) malformed(at, "\"required\" must be a boolean");
    p.required = req.get<bool>();
    if (auto it = j.find("vocabulary"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) malformed(at, "\"vocabulary\" must be a string");
        p.vocabulary = it->get<std::string>();
    }
    if (p.shape == ValueShape::Vocabulary && !p.vocabulary) malformed(at, "vocabulary shape without a vocabulary");
    if (p.vocabulary && p.shape != ValueShape::Vocabulary && p.shape != ValueShape::StringList)
        malformed(at, "only vocabulary and list-of-string properties may name a vocabulary");
    if (auto it = j.find("description"); it != j.end() && it->is_string()) p.description = it->get<std::string>();
    return p;
}

std::vector<PropertyDefinition> parse_property_list(const json& obj, const char* key, const std::string& where) {
    const auto& list = member(obj, key, where);
    if (!list.is_array()) malformed(where, std::string("\"") + key + "\" must be an array");
    std::vector<PropertyDefinition> out;
    out.reserve(list.size());
    for (const auto& entry : list) out.push_back(parse_property(entry, where));
    return out;
}

}  // namespace

Catalog Catalog::load(const std::filesystem::path& definitions_file,
                      const std::filesystem::path& vocabularies_file) {
    auto defs = read_json_file(definitions_file);
    auto vocabs = read_json_file(vocabularies_file);
    return from_json(defs, vocabs);
}

Catalog Catalog::from_json(const json& definitions, const json& vocabularies) {
    Catalog cat;

    if (!vocabularies.is_object()) malformed("vocabularies", "document must be an object");
    const auto& vlist = member(vocabularies, "vocabularies", "vocabularies");
    if (!vlist.is_array()) malformed("vocabularies", "\"vocabularies\" must be an array");
    for (const auto& v : vlist) {
        Vocabulary vocab;
        vocab.name = text_member(v, "name", "vocabularies");
        const std::string where = "vocabularies." + vocab.name;
        const auto& entries = member(v, "entries", where);
        if (!entries.is_array() || entries.empty()) malformed(where, "entries must be a nonempty array");
        std::set<std::string> seen;
        for (const auto& e : entries) {
            if (!e.is_string()) malformed(where, "entries must be strings");
            if (!seen.insert(e.get<std::string>()).second) malformed(where, "duplicate entry " + e.dump());
            vocab.entries.push_back(e.get<std::string>());
        }
        auto name = vocab.name;
        if (!cat.vocabularies_.emplace(std::move(name), std::move(vocab)).second)
            malformed(where, "duplicate vocabulary");
    }

    if (!definitions.is_object()) malformed("definitions", "document must be an object");
    cat.version_ = text_member(definitions, "version", "definitions");
    const auto& objects = member(definitions, "objects", "definitions");
    if (!objects.is_array()) malformed("definitions", "\"objects\" must be an array");

    for (const auto& o : objects) {
        if (!o.is_object()) malformed("definitions.objects", "entries must be objects");
        ObjectDefinition def;
        def.kind = text_member(o, "kind", "definitions.objects");
        const std::string where = "definitions." + def.kind;
        if (!valid_kind_name(def.kind)) malformed(where, "kind must be lowercase and hyphen-separated");
        if (def.kind == "bundle") malformed(where, "\"bundle\" is reserved");
        auto category = parse_category(text_member(o, "category", where));
        if (!category) malformed(where, "unknown category");
        def.category = *category;
        auto group = parse_group(text_member(o, "group", where));
        if (!group) malformed(where, "unknown group");
        def.group = *group;
        def.description = text_member(o, "description", where);
        def.doc_link = text_member(o, "doc_link", where);
        if (auto it = o.find("thumbnail_ref"); it != o.end() && it->is_string())
            def.thumbnail_ref = it->get<std::string>();
        def.common_properties = parse_property_list(o, "common_properties", where);
        def.specific_properties = parse_property_list(o, "specific_properties", where);

        std::set<std::string_view> names;
        for (const auto* list : {&def.common_properties, &def.specific_properties}) {
            for (const auto& p : *list) {
                if (!names.insert(p.name).second) malformed(where, "duplicate property \"" + p.name + "\"");
                if (p.vocabulary && !cat.vocabularies_.contains(*p.vocabulary)) {
                    throw Error(ErrorCode::DanglingVocabularyReference,
                                where + "." + p.name + " references unknown vocabulary \"" + *p.vocabulary + "\"");
                }
            }
        }

        auto kind = def.kind;
        if (!cat.definitions_.emplace(std::move(kind), std::move(def)).second) malformed(where, "duplicate kind");
    }

    std::map<Category, std::size_t> expected{{Category::SDO, 18}, {Category::SRO, 2}, {Category::SCO, 36}};
    if (auto it = definitions.find("expected_counts"); it != definitions.end()) {
        if (!it->is_object()) malformed("definitions", "\"expected_counts\" must be an object");
        for (const auto& [key, value] : it->items()) {
            auto c = parse_category(key);
            if (!c || !value.is_number_unsigned()) malformed("definitions.expected_counts", "bad entry " + key);
            expected[*c] = value.get<std::size_t>();
        }
    }
    for (const auto& [category, want] : expected) {
        const auto got = cat.count(category);
        if (got != want) {
            malformed("definitions", std::string(to_string(category)) + " count is " + std::to_string(got) +
                                         ", expected " + std::to_string(want));
        }
    }
    return cat;
}

std::vector<const ObjectDefinition*> Catalog::list_kinds(std::optional<Category> category) const {
    std::vector<const ObjectDefinition*> out;
    // std::map iteration is already alphabetical by kind.
    for (const auto& [kind, def] : definitions_)
        if (!category || def.category == *category) out.push_back(&def);
    return out;
}

const ObjectDefinition& Catalog::lookup(std::string_view kind) const {
    if (const auto* def = find(kind)) return *def;
    throw Error(ErrorCode::UnknownKind, "unknown object kind \"" + std::string(kind) + "\"");
}

const ObjectDefinition* Catalog::find(std::string_view kind) const noexcept {
    auto it = definitions_.find(kind);
    return it == definitions_.end() ? nullptr : &it->second;
}

const Vocabulary& Catalog::vocabulary(std::string_view name) const {
    auto it = vocabularies_.find(name);
    if (it == vocabularies_.end())
        throw Error(ErrorCode::UnknownVocabulary, "unknown vocabulary \"" + std::string(name) + "\"");
    return it->second;
}

std::size_t Catalog::count(Category category) const noexcept {
    return static_cast<std::size_t>(std::count_if(definitions_.begin(), definitions_.end(),
                                                  [&](const auto& kv) { return kv.second.category == category; }));
}

json to_json(const PropertyDefinition& def) {
    json j = {{"name", def.name}, {"shape", to_string(def.shape)}, {"required", def.required}};
    if (def.vocabulary) j["vocabulary"] = *def.vocabulary;
    j["description"] = def.description;
    return j;
}

json to_json(const ObjectDefinition& def) {
    json common = json::array();
    for (const auto& p : def.common_properties) common.push_back(to_json(p));
    json specific = json::array();
    for (const auto& p : def.specific_properties) specific.push_back(to_json(p));
    return {{"kind", def.kind},
            {"category", to_string(def.category)},
            {"group", to_string(def.group)},
            {"description", def.description},
            {"doc_link", def.doc_link},
            {"thumbnail_ref", def.thumbnail_ref},
            {"common_properties", std::move(common)},
            {"specific_properties", std::move(specific)}};
}

json to_json(const Vocabulary& vocab) { return {{"name", vocab.name}, {"entries", vocab.entries}}; }

}  // namespace stixdesk
