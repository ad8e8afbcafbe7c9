#include "stixdesk/share.hpp"

#include <algorithm>

namespace stixdesk {

namespace {

std::vector<StixObject> active_payloads(const Session& session, std::string_view model_id, WorkspaceStore& store,
                                        Timestamp now) {
    auto snapshot = store.fetch_model(session, model_id, now);
    std::vector<StixObject> out;
    out.reserve(snapshot.records.size());
    for (auto& rec : snapshot.records) out.push_back(std::move(rec.payload));
    return out;
}

}  // namespace

ShareReport validate_model(const Session& session, std::string_view model_id, const Catalog& catalog,
                           WorkspaceStore& store, Timestamp now) {
    ShareReport report;
    report.model_id = std::string(model_id);
    for (const auto& object : active_payloads(session, model_id, store, now)) {
        ++report.checked_count;
        auto findings = validate_object(object, catalog);
        report.findings.insert(report.findings.end(), findings.begin(), findings.end());
    }
    report.shareable = std::none_of(report.findings.begin(), report.findings.end(),
                                    [](const auto& f) { return f.problem == Problem::MissingRequired; });
    return report;
}

std::string preview_model_json(const Session& session, std::string_view model_id, const Catalog&,
                               WorkspaceStore& store, Timestamp now, std::optional<StixIdentifier> bundle_id) {
    const auto objects = active_payloads(session, model_id, store, now);
    return serialize_bundle(objects, bundle_id ? *bundle_id : StixIdentifier::generate("bundle"));
}

DownloadFile download_model_json(const Session& session, std::string_view model_id, const Catalog&,
                                 WorkspaceStore& store, Timestamp now, std::optional<StixIdentifier> bundle_id) {
    // The model name and payloads come from one snapshot read.
    auto snapshot = store.fetch_model(session, model_id, now);
    std::vector<StixObject> objects;
    for (auto& rec : snapshot.records) objects.push_back(std::move(rec.payload));
    return {download_filename(snapshot.model.name), "application/json",
            serialize_bundle(objects, bundle_id ? *bundle_id : StixIdentifier::generate("bundle"))};
}

std::string download_filename(std::string_view model_name) {
    std::string out;
    out.reserve(model_name.size() + 5);
    for (char c : model_name) {
        const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
                          c == '_' || c == '-';
        out.push_back(keep ? c : '-');
    }
    if (out.empty()) out = "model";
    if (out.front() == '.') out.front() = '-';
    return out + ".json";
}

nlohmann::json to_json(const ValidationFinding& finding) {
    return {{"object_id", finding.object_id.str()},
            {"property", finding.property},
            {"problem", to_string(finding.problem)}};
}

nlohmann::json to_json(const ShareReport& report) {
    nlohmann::json findings = nlohmann::json::array();
    for (const auto& f : report.findings) findings.push_back(to_json(f));
    return {{"model_id", report.model_id},
            {"checked_count", report.checked_count},
            {"findings", std::move(findings)},
            {"shareable", report.shareable}};
}

}  // namespace stixdesk
