#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stixdesk/catalog.hpp"
#include "stixdesk/stix.hpp"
#include "stixdesk/store.hpp"

namespace stixdesk {

struct ShareReport {
    std::string model_id;
    int checked_count = 0;
    std::vector<ValidationFinding> findings;
    /// True when no finding is missing-required. Vocabulary findings are reported but do not count.
    bool shareable = true;
};

struct DownloadFile {
    std::string filename;
    std::string media_type;
    std::string bytes;
};

/// Runs validate_object over every non-retracted record, in dashboard order.
ShareReport validate_model(const Session& session, std::string_view model_id, const Catalog& catalog,
                           WorkspaceStore& store, Timestamp now);

/// Bundle over the model's non-retracted payloads. A fresh bundle identifier is drawn
/// unless `bundle_id` is given. Works on incomplete models.
std::string preview_model_json(const Session& session, std::string_view model_id, const Catalog& catalog,
                               WorkspaceStore& store, Timestamp now,
                               std::optional<StixIdentifier> bundle_id = std::nullopt);

/// Same bytes as preview_model_json, named after the model.
DownloadFile download_model_json(const Session& session, std::string_view model_id, const Catalog& catalog,
                                 WorkspaceStore& store, Timestamp now,
                                 std::optional<StixIdentifier> bundle_id = std::nullopt);

/// Keeps [A-Za-z0-9._-], replaces everything else with '-', and never yields a dot-leading
/// or empty name. Appends ".json".
std::string download_filename(std::string_view model_name);

nlohmann::json to_json(const ValidationFinding& finding);
nlohmann::json to_json(const ShareReport& report);

}  // namespace stixdesk
