#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stixdesk/catalog.hpp"
#include "stixdesk/stix.hpp"
#include "stixdesk/time.hpp"

namespace stixdesk {

namespace sql {
class Database;
}

enum class Role { User, Administrator };

/// The five sharing groups. Users of one profile see and edit each other's models.
enum class Profile { CyberSecurityManagers, NetworkAdministrators, Management, Analysts, ExternalUsers };

std::string_view to_string(Role r) noexcept;
std::string_view to_string(Profile p) noexcept;
std::optional<Role> parse_role(std::string_view text) noexcept;
std::optional<Profile> parse_profile(std::string_view text) noexcept;
inline constexpr Profile kAllProfiles[] = {Profile::CyberSecurityManagers, Profile::NetworkAdministrators,
                                           Profile::Management, Profile::Analysts, Profile::ExternalUsers};

struct UserAccount {
    std::string user_id;
    std::string username;
    std::string password_digest;
    Role role = Role::User;
    Profile profile = Profile::Analysts;
    bool active = true;
};

/// `token` is the bearer secret; the store keeps only its digest.
struct Session {
    std::string token;
    std::string user_id;
    Timestamp last_activity;
};

struct Model {
    std::string model_id;
    std::string name;
    std::string owner;
    std::string owner_name;
    Profile profile = Profile::Analysts;
    Timestamp created_at;
    Timestamp modified_at;

    bool operator==(const Model&) const = default;
};

/// `modified_at` stays unset until the record is first edited, retracted, or restored.
struct ObjectRecord {
    std::string record_id;
    std::string model_id;
    StixObject payload;
    Timestamp created_at;
    std::optional<Timestamp> modified_at;
    bool retracted = false;

    bool operator==(const ObjectRecord&) const = default;
};

template <class T>
struct Page {
    std::vector<T> items;
    int page_index = 1;
    int page_size = 10;
    int total_count = 0;
};

struct ModelSnapshot {
    Model model;
    std::vector<ObjectRecord> records;  ///< active records, dashboard order
};

/// A record joined with its model's name, as consumed by the timeline.
struct ProfileRecord {
    ObjectRecord record;
    std::string model_name;

    bool operator==(const ProfileRecord&) const = default;
};

enum class PasswordHashing { Interactive, Fast };

struct StoreConfig {
    /// SQLite path, `:memory:`, or a `file:` URI.
    std::string database = ":memory:";
    int page_size = 10;
    std::chrono::milliseconds session_idle = std::chrono::minutes{10};
    PasswordHashing hashing = PasswordHashing::Interactive;
};

/// Profile-scoped persistence of users, sessions, models, and object records.
///
/// Every call that takes a Session first revalidates its token against the session table:
/// an unknown, logged-out, or idle-expired token raises SessionExpired, and a valid one has
/// its last activity bumped to `now`. Writers require the caller's profile to equal the
/// model's. Administrators may additionally read every profile. A model or record that is
/// missing or belongs to another profile raises the same Error{Forbidden} with the same
/// message, so identifiers cannot be probed. All statements use bound
/// parameters. Calls are serialized internally and each mutation is one transaction.
class WorkspaceStore {
public:
    WorkspaceStore(StoreConfig config, std::shared_ptr<const Catalog> catalog);
    ~WorkspaceStore();
    WorkspaceStore(const WorkspaceStore&) = delete;
    WorkspaceStore& operator=(const WorkspaceStore&) = delete;

    const StoreConfig& config() const noexcept { return config_; }
    const Catalog& catalog() const noexcept { return *catalog_; }

    // Accounts and sessions ------------------------------------------------

    /// Throws UsernameTaken, WeakPassword (fewer than 8 characters), InvalidArgument (empty username).
    UserAccount register_user(std::string_view username, std::string_view password, Profile profile, Role role,
                              Timestamp now);
    /// Same error for unknown user, wrong password, and deactivated account: BadCredentials.
    Session authenticate(std::string_view username, std::string_view password, Timestamp now);
    void logout(const Session& session);
    /// Validates and touches the session.
    UserAccount current_user(const Session& session, Timestamp now);

    /// Creates the first administrator. Throws AdministratorExists if one already exists.
    UserAccount bootstrap_administrator(std::string_view username, std::string_view password, Profile profile,
                                        Timestamp now);
    bool has_administrator();
    /// Administrator only (Forbidden otherwise).
    UserAccount create_user(const Session& admin, std::string_view username, std::string_view password,
                            Profile profile, Role role, Timestamp now);
    /// Administrator only. Drops the user's sessions. Throws NotFound.
    void deactivate_user(const Session& admin, std::string_view username, Timestamp now);

    // Models and records ---------------------------------------------------

    Model create_model(const Session& session, std::string_view name, Timestamp now);
    Model rename_model(const Session& session, std::string_view model_id, std::string_view new_name, Timestamp now);
    ObjectRecord add_object(const Session& session, std::string_view model_id, const StixObject& object,
                            Timestamp now);
    /// Replaces the payload wholesale. The new payload must keep the record's identifier.
    ObjectRecord update_object(const Session& session, std::string_view record_id, const StixObject& object,
                               Timestamp now);
    /// Read-modify-write of one payload inside a single transaction, so concurrent edits of
    /// the same record serialize instead of overwriting each other's changes.
    ObjectRecord modify_object(const Session& session, std::string_view record_id,
                               const std::function<StixObject(StixObject)>& edit, Timestamp now);
    ObjectRecord retract_object(const Session& session, std::string_view record_id, Timestamp now);
    ObjectRecord restore_object(const Session& session, std::string_view record_id, Timestamp now);
    ObjectRecord get_object(const Session& session, std::string_view record_id, Timestamp now);

    Page<Model> list_models(const Session& session, int page_index, Timestamp now);
    Page<ObjectRecord> list_objects(const Session& session, std::string_view model_id, int page_index,
                                    Timestamp now);
    ModelSnapshot fetch_model(const Session& session, std::string_view model_id, Timestamp now);

    /// Every record of every model of the caller's profile, retracted ones included,
    /// ordered by record key descending.
    std::vector<ProfileRecord> profile_records(const Session& session, Timestamp now);
    /// Every record of one model, retracted ones included, in dashboard order.
    std::vector<ProfileRecord> model_records(const Session& session, std::string_view model_id, Timestamp now);

    /// Row count per table; used to check that writes touch nothing else.
    std::map<std::string, std::int64_t> table_row_counts();

private:
    struct Actor;
    Actor require_session(const Session& session, Timestamp now);
    Model load_model(std::string_view model_id);
    std::optional<Model> find_model(std::string_view model_id);
    std::optional<ObjectRecord> find_record(std::string_view record_id);
    ObjectRecord load_record_for_write(const Actor& actor, std::string_view record_id);
    void check_read(const Actor& actor, const Model& model) const;
    void check_write(const Actor& actor, const Model& model) const;
    UserAccount insert_user(std::string_view username, std::string_view password, Profile profile, Role role,
                            Timestamp now);
    ObjectRecord write_payload(ObjectRecord record, const StixObject& object, Timestamp now);
    ObjectRecord set_retracted(const Session& session, std::string_view record_id, bool retracted, Timestamp now);
    void bump_model(std::string_view model_id, Timestamp now);
    std::vector<ProfileRecord> query_records(std::string_view sql, std::string_view key);

    StoreConfig config_;
    std::shared_ptr<const Catalog> catalog_;
    std::unique_ptr<sql::Database> db_;
    std::string dummy_digest_;
    std::recursive_mutex mutex_;
};

}  // namespace stixdesk
