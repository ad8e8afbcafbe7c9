#pragma once

// Shared test helpers. The oracles here read the catalog file with plain JSON access and
// never call the library's own validation, ordering, or serialization routines.

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "stixdesk/catalog.hpp"
#include "stixdesk/config.hpp"
#include "stixdesk/gateway.hpp"
#include "stixdesk/stix.hpp"
#include "stixdesk/store.hpp"
#include "stixdesk/timeline.hpp"

namespace testsupport {

using nlohmann::json;
using stixdesk::Timestamp;

std::filesystem::path catalog_dir();
std::filesystem::path definitions_path();
std::filesystem::path vocabularies_path();

/// The shipped catalog, loaded once.
std::shared_ptr<const stixdesk::Catalog> shipped_catalog();
/// The shipped definitions file as raw JSON.
const json& raw_definitions();
const json& raw_vocabularies();

/// A fixed instant used as the start of deterministic test clocks.
Timestamp base_time();

/// Settable clock shared between a test and the code under test.
class ManualClock {
public:
    explicit ManualClock(Timestamp start = base_time());
    Timestamp now() const;
    void advance(std::chrono::milliseconds by);
    void set(Timestamp t);
    stixdesk::Clock clock() const;

private:
    std::shared_ptr<std::atomic<std::int64_t>> ms_;
};

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Store over a private in-memory database with cheap password hashing.
std::unique_ptr<stixdesk::WorkspaceStore> memory_store(int page_size = 10,
                                                        std::chrono::milliseconds idle = std::chrono::minutes{10});

// Oracles ------------------------------------------------------------------------------

/// (object id, property, problem text)
using FindingKey = std::tuple<std::string, std::string, std::string>;

/// Missing-required findings from a linear scan of the raw definitions file over the
/// serialized object: a required property is missing when its key is absent or its value
/// is null, "", [], or {}.
std::set<FindingKey> brute_force_missing(const json& definitions, const json& object);

/// Same as above for every object of a serialized bundle.
std::set<FindingKey> brute_force_missing_bundle(const json& definitions, const json& bundle);

std::set<FindingKey> keys_of(const std::vector<stixdesk::ValidationFinding>& findings, bool missing_only);

/// Each string names a broken timeline law; empty when `entries` is a valid timeline over
/// `records` (retracted records dropped unless `keep_retracted`).
std::vector<std::string> timeline_violations(const std::vector<stixdesk::TimelineEntry>& entries,
                                             const std::vector<stixdesk::ProfileRecord>& records, bool keep_retracted);

// Generators -----------------------------------------------------------------------------

/// Strings aimed at SQL, JSON, shell, path, and encoding handling.
const std::vector<std::string>& hostile_strings();

/// Random UTF-8 text up to `max_len` code points, mixing ASCII, controls, and multi-byte characters.
std::string random_text(std::mt19937_64& rng, std::size_t max_len);

/// Object of a random kind with a random subset of its properties set to shape-correct
/// values; string-shaped properties sometimes receive hostile or random text.
stixdesk::StixObject random_object(const stixdesk::Catalog& catalog, std::mt19937_64& rng, Timestamp now);

std::vector<stixdesk::StixObject> random_objects(const stixdesk::Catalog& catalog, std::mt19937_64& rng,
                                                 Timestamp now, std::size_t max_count);

/// Random record set for timeline checks, spread over a few models with repeated
/// timestamps, missing modified_at values, and retracted rows.
std::vector<stixdesk::ProfileRecord> random_profile_records(const stixdesk::Catalog& catalog, std::mt19937_64& rng);

// HTTP -----------------------------------------------------------------------------------

/// Gateway on an ephemeral loopback port over a database file in a temp dir.
class TestService {
public:
    explicit TestService(std::chrono::milliseconds idle = std::chrono::minutes{10}, int page_size = 10,
                         std::optional<stixdesk::Clock> clock = std::nullopt);
    ~TestService();

    int port() const { return port_; }
    std::shared_ptr<stixdesk::WorkspaceStore> store() const { return store_; }
    const stixdesk::ServiceConfig& config() const { return config_; }

private:
    TempDir dir_;
    stixdesk::ServiceConfig config_;
    std::shared_ptr<stixdesk::WorkspaceStore> store_;
    std::unique_ptr<stixdesk::Gateway> gateway_;
    std::thread thread_;
    int port_ = 0;
};

struct Reply {
    int status = 0;
    std::string body;
    std::multimap<std::string, std::string> headers;
    json json_body() const;
    std::string header(const std::string& name) const;
};

/// HTTP client holding one session cookie.
class Agent {
public:
    explicit Agent(int port);
    ~Agent();
    Agent(Agent&&) noexcept;

    Reply get(const std::string& path);
    Reply post(const std::string& path, const json& body = json::object());
    Reply put(const std::string& path, const json& body);
    Reply patch(const std::string& path, const json& body);

    /// Registers (ignoring UsernameTaken) and logs in, keeping the cookie.
    Reply register_and_login(const std::string& username, const std::string& password, const std::string& profile);
    Reply login(const std::string& username, const std::string& password);
    const std::optional<std::string>& cookie() const { return cookie_; }
    void set_cookie(std::optional<std::string> c) { cookie_ = std::move(c); }

private:
    struct Client;
    std::unique_ptr<Client> client_;
    std::optional<std::string> cookie_;
};

}  // namespace testsupport
