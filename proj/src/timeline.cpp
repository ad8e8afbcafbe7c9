#include "stixdesk/timeline.hpp"

#include <algorithm>
#include <map>

namespace stixdesk {

namespace {

std::string summarize(const StixObject& object) {
    auto it = object.properties.find("name");
    if (it != object.properties.end()) {
        if (const auto* name = std::get_if<std::string>(&it->second.value)) return object.kind + ": " + *name;
    }
    return object.kind;
}

// Timed before untimed; timed by modified_at, untimed by created_at; then record key descending.
bool precedes(const ProfileRecord& a, const ProfileRecord& b) {
    const auto& ra = a.record;
    const auto& rb = b.record;
    if (ra.modified_at.has_value() != rb.modified_at.has_value()) return ra.modified_at.has_value();
    const auto ka = ra.modified_at.value_or(ra.created_at);
    const auto kb = rb.modified_at.value_or(rb.created_at);
    if (ka != kb) return ka < kb;
    return ra.record_id > rb.record_id;
}

}  // namespace

std::vector<TimelineEntry> order_timeline(std::span<const ProfileRecord> records, bool keep_retracted) {
    std::vector<const ProfileRecord*> rows;
    rows.reserve(records.size());
    for (const auto& r : records)
        if (keep_retracted || !r.record.retracted) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) { return precedes(*a, *b); });

    std::map<std::string, int> colours;
    std::vector<TimelineEntry> out;
    out.reserve(rows.size());
    for (const auto* row : rows) {
        const auto& rec = row->record;
        const auto it = colours.try_emplace(rec.model_id, static_cast<int>(colours.size())).first;
        TimelineEntry e;
        e.record_id = rec.record_id;
        e.model_id = rec.model_id;
        e.model_name = row->model_name;
        e.object_kind = rec.payload.kind;
        e.object_id = rec.payload.id.str();
        e.object_summary = summarize(rec.payload);
        e.modified_at = rec.modified_at;
        e.created_at = rec.created_at;
        e.colour_index = it->second % kPaletteSize;
        e.retracted = rec.retracted;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<TimelineEntry> build_timeline(const Session& session, WorkspaceStore& store, Timestamp now) {
    const auto records = store.profile_records(session, now);
    return order_timeline(records, false);
}

std::vector<TimelineEntry> model_history(const Session& session, std::string_view model_id, WorkspaceStore& store,
                                         Timestamp now) {
    const auto records = store.model_records(session, model_id, now);
    return order_timeline(records, true);
}

nlohmann::json to_json(const TimelineEntry& entry) {
    return {{"record_id", entry.record_id},
            {"model_id", entry.model_id},
            {"model_name", entry.model_name},
            {"object_kind", entry.object_kind},
            {"object_id", entry.object_id},
            {"object_summary", entry.object_summary},
            {"modified_at", entry.modified_at ? nlohmann::json(format_timestamp(*entry.modified_at)) : nlohmann::json()},
            {"created_at", format_timestamp(entry.created_at)},
            {"colour_index", entry.colour_index},
            {"retracted", entry.retracted}};
}

}  // namespace stixdesk
