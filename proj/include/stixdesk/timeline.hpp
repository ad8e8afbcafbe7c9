#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stixdesk/store.hpp"
#include "stixdesk/time.hpp"

namespace stixdesk {

inline constexpr int kPaletteSize = 8;

struct TimelineEntry {
    std::string record_id;
    std::string model_id;
    std::string model_name;
    std::string object_kind;
    std::string object_id;
    /// Kind, plus the object's `name` property when it has one.
    std::string object_summary;
    std::optional<Timestamp> modified_at;
    Timestamp created_at;
    /// First-appearance ordinal of the model in the ordered stream, modulo kPaletteSize.
    int colour_index = 0;
    bool retracted = false;

    bool operator==(const TimelineEntry&) const = default;
};

/// Orders records oldest-first by modified_at (ties: record key descending), then appends
/// records without modified_at ordered by created_at (same tie-break). Colours are assigned
/// from that order alone, so the result does not depend on the order of `records`.
/// Retracted records are dropped unless `keep_retracted` is set.
std::vector<TimelineEntry> order_timeline(std::span<const ProfileRecord> records, bool keep_retracted);

/// Chain of events for the caller's profile across all its models, retracted records excluded.
std::vector<TimelineEntry> build_timeline(const Session& session, WorkspaceStore& store, Timestamp now);

/// Forensic history of one model: same ordering, retracted records included and flagged.
std::vector<TimelineEntry> model_history(const Session& session, std::string_view model_id, WorkspaceStore& store,
                                         Timestamp now);

nlohmann::json to_json(const TimelineEntry& entry);

}  // namespace stixdesk
