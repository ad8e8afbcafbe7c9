#include "stixdesk/store.hpp"

#include <algorithm>

#include "crypto.hpp"
#include "sqlite.hpp"
#include "stixdesk/error.hpp"

namespace stixdesk {

using nlohmann::json;

std::string_view to_string(Role r) noexcept { return r == Role::Administrator ? "Administrator" : "User"; }

std::string_view to_string(Profile p) noexcept {
    switch (p) {
        case Profile::CyberSecurityManagers: return "Cyber-security managers";
        case Profile::NetworkAdministrators: return "Network administrators";
        case Profile::Management: return "Management";
        case Profile::Analysts: return "Analysts";
        case Profile::ExternalUsers: return "External users";
    }
    return "";
}

std::optional<Role> parse_role(std::string_view text) noexcept {
    if (text == "User") return Role::User;
    if (text == "Administrator") return Role::Administrator;
    return std::nullopt;
}

std::optional<Profile> parse_profile(std::string_view text) noexcept {
    for (auto p : kAllProfiles)
        if (to_string(p) == text) return p;
    return std::nullopt;
}

namespace {

/// One message for missing and foreign models and records, so callers cannot tell them apart.
constexpr const char* kNotAccessible = "resource is not accessible";

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS users (
    user_id TEXT PRIMARY KEY,
    username TEXT NOT NULL UNIQUE,
    password_digest TEXT NOT NULL,
    role TEXT NOT NULL,
    profile TEXT NOT NULL,
    active INTEGER NOT NULL DEFAULT 1,
    created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS sessions (
    token_digest TEXT PRIMARY KEY,
    user_id TEXT NOT NULL REFERENCES users(user_id),
    last_activity INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS models (
    model_id TEXT PRIMARY KEY,
    name TEXT NOT NULL,
    owner TEXT NOT NULL REFERENCES users(user_id),
    profile TEXT NOT NULL,
    created_at INTEGER NOT NULL,
    modified_at INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS models_by_profile ON models(profile, modified_at DESC, model_id DESC);
CREATE TABLE IF NOT EXISTS records (
    record_id TEXT PRIMARY KEY,
    model_id TEXT NOT NULL REFERENCES models(model_id),
    stix_id TEXT NOT NULL,
    kind TEXT NOT NULL,
    payload TEXT NOT NULL,
    created_at INTEGER NOT NULL,
    modified_at INTEGER,
    retracted INTEGER NOT NULL DEFAULT 0,
    UNIQUE (model_id, stix_id)
);
CREATE INDEX IF NOT EXISTS records_by_model ON records(model_id);
)sql";

constexpr std::string_view kModelColumns =
    "SELECT m.model_id, m.name, m.owner, u.username, m.profile, m.created_at, m.modified_at "
    "FROM models m JOIN users u ON u.user_id = m.owner ";

constexpr std::string_view kRecordColumns =
    "SELECT r.record_id, r.model_id, r.payload, r.created_at, r.modified_at, r.retracted, m.name "
    "FROM records r JOIN models m ON m.model_id = r.model_id ";

constexpr std::size_t kKeyBytes = 16;
constexpr std::size_t kTokenBytes = 32;
constexpr std::size_t kMinPasswordLength = 8;

Model read_model(const sql::Statement& st) {
    Model m;
    m.model_id = st.text(0);
    m.name = st.text(1);
    m.owner = st.text(2);
    m.owner_name = st.text(3);
    m.profile = parse_profile(st.text(4)).value_or(Profile::Analysts);
    m.created_at = from_epoch_ms(st.int64(5));
    m.modified_at = from_epoch_ms(st.int64(6));
    return m;
}

std::string require_name(std::string_view name) {
    if (name.empty()) throw Error(ErrorCode::EmptyName, "name must not be empty");
    return std::string(name);
}

Timestamp later(Timestamp a, std::optional<Timestamp> b) { return b ? std::max(a, *b) : a; }

int page_count(int total, int size) { return std::max(1, (total + size - 1) / size); }

void check_page(int page_index, int total, int size) {
    if (page_index < 1 || page_index > page_count(total, size)) {
        throw Error(ErrorCode::PageOutOfRange, "page " + std::to_string(page_index) + " is out of range (1.." +
                                                   std::to_string(page_count(total, size)) + ")");
    }
}

}  // namespace

struct WorkspaceStore::Actor {
    std::string user_id;
    std::string username;
    Role role = Role::User;
    Profile profile = Profile::Analysts;
};

WorkspaceStore::WorkspaceStore(StoreConfig config, std::shared_ptr<const Catalog> catalog)
    : config_(std::move(config)), catalog_(std::move(catalog)) {
    if (!catalog_) throw Error(ErrorCode::InvalidArgument, "store needs a catalog");
    if (config_.page_size < 1) throw Error(ErrorCode::InvalidArgument, "page size must be positive");
    db_ = std::make_unique<sql::Database>(config_.database);
    db_->exec("PRAGMA foreign_keys = ON");
    db_->exec(kSchema);
    dummy_digest_ = crypto::hash_password(crypto::random_hex(16), config_.hashing == PasswordHashing::Fast
                                                                      ? crypto::HashCost::Minimal
                                                                      : crypto::HashCost::Interactive);
}

WorkspaceStore::~WorkspaceStore() = default;

// ---------------------------------------------------------------------------
// Accounts and sessions

UserAccount WorkspaceStore::insert_user(std::string_view username, std::string_view password, Profile profile,
                                        Role role, Timestamp now) {
    if (username.empty()) throw Error(ErrorCode::InvalidArgument, "username must not be empty");
    if (password.size() < kMinPasswordLength)
        throw Error(ErrorCode::WeakPassword, "password must have at least 8 characters");

    auto exists = db_->prepare("SELECT 1 FROM users WHERE username = ?1");
    exists.bind(1, username);
    if (exists.step()) throw Error(ErrorCode::UsernameTaken, "username is already registered");

    UserAccount user;
    user.user_id = crypto::random_hex(kKeyBytes);
    user.username = std::string(username);
    user.password_digest = crypto::hash_password(
        password, config_.hashing == PasswordHashing::Fast ? crypto::HashCost::Minimal : crypto::HashCost::Interactive);
    user.role = role;
    user.profile = profile;

    db_->prepare(
           "INSERT INTO users (user_id, username, password_digest, role, profile, active, created_at) "
           "VALUES (?1, ?2, ?3, ?4, ?5, 1, ?6)")
        .bind(1, user.user_id)
        .bind(2, user.username)
        .bind(3, user.password_digest)
        .bind(4, to_string(role))
        .bind(5, to_string(profile))
        .bind(6, to_epoch_ms(now))
        .run();
    return user;
}

UserAccount WorkspaceStore::register_user(std::string_view username, std::string_view password, Profile profile,
                                          Role role, Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto user = insert_user(username, password, profile, role, now);
    tx.commit();
    return user;
}

Session WorkspaceStore::authenticate(std::string_view username, std::string_view password, Timestamp now) {
    std::lock_guard lock(mutex_);
    auto st = db_->prepare("SELECT user_id, password_digest, active FROM users WHERE username = ?1");
    st.bind(1, username);
    if (!st.step()) {
        // Spend the same hashing work as a real check so unknown names are not faster.
        crypto::verify_password(dummy_digest_, password);
        throw Error(ErrorCode::BadCredentials, "invalid username or password");
    }
    const auto user_id = st.text(0);
    const auto digest = st.text(1);
    const bool active = st.int64(2) != 0;
    if (!crypto::verify_password(digest, password) || !active)
        throw Error(ErrorCode::BadCredentials, "invalid username or password");

    Session session{crypto::random_hex(kTokenBytes), user_id, now};
    db_->prepare("INSERT INTO sessions (token_digest, user_id, last_activity) VALUES (?1, ?2, ?3)")
        .bind(1, crypto::token_digest(session.token))
        .bind(2, user_id)
        .bind(3, to_epoch_ms(now))
        .run();
    return session;
}

void WorkspaceStore::logout(const Session& session) {
    std::lock_guard lock(mutex_);
    db_->prepare("DELETE FROM sessions WHERE token_digest = ?1").bind(1, crypto::token_digest(session.token)).run();
}

WorkspaceStore::Actor WorkspaceStore::require_session(const Session& session, Timestamp now) {
    const auto digest = crypto::token_digest(session.token);
    auto st = db_->prepare(
        "SELECT s.last_activity, u.user_id, u.username, u.role, u.profile, u.active "
        "FROM sessions s JOIN users u ON u.user_id = s.user_id WHERE s.token_digest = ?1");
    st.bind(1, digest);
    if (!st.step()) throw Error(ErrorCode::SessionExpired, "session is not valid; log in again");

    const auto last = from_epoch_ms(st.int64(0));
    Actor actor{st.text(1), st.text(2), parse_role(st.text(3)).value_or(Role::User),
                parse_profile(st.text(4)).value_or(Profile::Analysts)};
    const bool active = st.int64(5) != 0;
    if (!active || now - last > config_.session_idle) {
        db_->prepare("DELETE FROM sessions WHERE token_digest = ?1").bind(1, digest).run();
        throw Error(ErrorCode::SessionExpired, "session expired after inactivity; log in again");
    }
    db_->prepare("UPDATE sessions SET last_activity = ?2 WHERE token_digest = ?1")
        .bind(1, digest)
        .bind(2, to_epoch_ms(std::max(now, last)))
        .run();
    return actor;
}

UserAccount WorkspaceStore::current_user(const Session& session, Timestamp now) {
    std::lock_guard lock(mutex_);
    auto actor = require_session(session, now);
    return UserAccount{actor.user_id, actor.username, {}, actor.role, actor.profile, true};
}

bool WorkspaceStore::has_administrator() {
    std::lock_guard lock(mutex_);
    auto st = db_->prepare("SELECT 1 FROM users WHERE role = ?1 LIMIT 1");
    st.bind(1, to_string(Role::Administrator));
    return st.step();
}

UserAccount WorkspaceStore::bootstrap_administrator(std::string_view username, std::string_view password,
                                                    Profile profile, Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto st = db_->prepare("SELECT 1 FROM users WHERE role = ?1 LIMIT 1");
    st.bind(1, to_string(Role::Administrator));
    if (st.step()) throw Error(ErrorCode::AdministratorExists, "an administrator account already exists");
    auto user = insert_user(username, password, profile, Role::Administrator, now);
    tx.commit();
    return user;
}

UserAccount WorkspaceStore::create_user(const Session& admin, std::string_view username, std::string_view password,
                                        Profile profile, Role role, Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto actor = require_session(admin, now);
    if (actor.role != Role::Administrator) throw Error(ErrorCode::Forbidden, "administrator role required");
    auto user = insert_user(username, password, profile, role, now);
    tx.commit();
    return user;
}

void WorkspaceStore::deactivate_user(const Session& admin, std::string_view username, Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto actor = require_session(admin, now);
    if (actor.role != Role::Administrator) throw Error(ErrorCode::Forbidden, "administrator role required");
    auto st = db_->prepare("SELECT user_id FROM users WHERE username = ?1");
    st.bind(1, username);
    if (!st.step()) throw Error(ErrorCode::NotFound, "no such user");
    const auto user_id = st.text(0);
    db_->prepare("UPDATE users SET active = 0 WHERE user_id = ?1").bind(1, user_id).run();
    db_->prepare("DELETE FROM sessions WHERE user_id = ?1").bind(1, user_id).run();
    tx.commit();
}

// ---------------------------------------------------------------------------
// Access helpers

std::optional<Model> WorkspaceStore::find_model(std::string_view model_id) {
    auto st = db_->prepare(std::string(kModelColumns) + "WHERE m.model_id = ?1");
    st.bind(1, model_id);
    if (!st.step()) return std::nullopt;
    return read_model(st);
}

Model WorkspaceStore::load_model(std::string_view model_id) {
    auto model = find_model(model_id);
    if (!model) throw Error(ErrorCode::Forbidden, kNotAccessible);
    return *model;
}

std::optional<ObjectRecord> WorkspaceStore::find_record(std::string_view record_id) {
    auto rows = query_records(std::string(kRecordColumns) + "WHERE r.record_id = ?1", record_id);
    if (rows.empty()) return std::nullopt;
    return std::move(rows.front().record);
}

void WorkspaceStore::check_read(const Actor& actor, const Model& model) const {
    if (actor.profile != model.profile && actor.role != Role::Administrator)
        throw Error(ErrorCode::Forbidden, kNotAccessible);
}

void WorkspaceStore::check_write(const Actor& actor, const Model& model) const {
    if (actor.profile != model.profile) throw Error(ErrorCode::Forbidden, kNotAccessible);
}

ObjectRecord WorkspaceStore::load_record_for_write(const Actor& actor, std::string_view record_id) {
    auto record = find_record(record_id);
    if (!record) throw Error(ErrorCode::Forbidden, kNotAccessible);
    check_write(actor, load_model(record->model_id));
    return std::move(*record);
}

void WorkspaceStore::bump_model(std::string_view model_id, Timestamp now) {
    db_->prepare("UPDATE models SET modified_at = MAX(modified_at, ?2) WHERE model_id = ?1")
        .bind(1, model_id)
        .bind(2, to_epoch_ms(now))
        .run();
}

std::vector<ProfileRecord> WorkspaceStore::query_records(std::string_view sql, std::string_view key) {
    auto st = db_->prepare(sql);
    st.bind(1, key);
    std::vector<ProfileRecord> out;
    while (st.step()) {
        ProfileRecord row;
        row.record.record_id = st.text(0);
        row.record.model_id = st.text(1);
        row.record.payload = object_from_json(json::parse(st.text(2)), *catalog_);
        row.record.created_at = from_epoch_ms(st.int64(3));
        if (auto m = st.optional_int64(4)) row.record.modified_at = from_epoch_ms(*m);
        row.record.retracted = st.int64(5) != 0;
        row.model_name = st.text(6);
        out.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Models

Model WorkspaceStore::create_model(const Session& session, std::string_view name, Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto actor = require_session(session, now);
    Model model;
    model.model_id = crypto::random_hex(kKeyBytes);
    model.name = require_name(name);
    model.owner = actor.user_id;
    model.owner_name = actor.username;
    model.profile = actor.profile;
    model.created_at = now;
    model.modified_at = now;
    db_->prepare(
           "INSERT INTO models (model_id, name, owner, profile, created_at, modified_at) "
           "VALUES (?1, ?2, ?3, ?4, ?5, ?5)")
        .bind(1, model.model_id)
        .bind(2, model.name)
        .bind(3, model.owner)
        .bind(4, to_string(model.profile))
        .bind(5, to_epoch_ms(now))
        .run();
    tx.commit();
    return model;
}

Model WorkspaceStore::rename_model(const Session& session, std::string_view model_id, std::string_view new_name,
                                   Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto actor = require_session(session, now);
    auto name = require_name(new_name);
    check_write(actor, load_model(model_id));
    db_->prepare("UPDATE models SET name = ?2, modified_at = MAX(modified_at, ?3) WHERE model_id = ?1")
        .bind(1, model_id)
        .bind(2, name)
        .bind(3, to_epoch_ms(now))
        .run();
    auto model = load_model(model_id);
    tx.commit();
    return model;
}

Page<Model> WorkspaceStore::list_models(const Session& session, int page_index, Timestamp now) {
    std::lock_guard lock(mutex_);
    auto actor = require_session(session, now);
    const auto profile = to_string(actor.profile);

    auto count = db_->prepare("SELECT COUNT(*) FROM models WHERE profile = ?1");
    count.bind(1, profile);
    count.step();
    Page<Model> page;
    page.page_index = page_index;
    page.page_size = config_.page_size;
    page.total_count = static_cast<int>(count.int64(0));
    check_page(page_index, page.total_count, page.page_size);

    auto st = db_->prepare(std::string(kModelColumns) +
                           "WHERE m.profile = ?1 ORDER BY m.modified_at DESC, m.model_id DESC LIMIT ?2 OFFSET ?3");
    st.bind(1, profile)
        .bind(2, std::int64_t{page.page_size})
        .bind(3, std::int64_t{(page_index - 1) * page.page_size});
    while (st.step()) page.items.push_back(read_model(st));
    return page;
}

ModelSnapshot WorkspaceStore::fetch_model(const Session& session, std::string_view model_id, Timestamp now) {
    std::lock_guard lock(mutex_);
    auto actor = require_session(session, now);
    auto model = find_model(model_id);
    // Nonexistent and foreign models are indistinguishable to the caller.
    if (!model || (model->profile != actor.profile && actor.role != Role::Administrator))
        throw Error(ErrorCode::Forbidden, kNotAccessible);
    ModelSnapshot snap{*model, {}};
    for (auto& row : query_records(std::string(kRecordColumns) +
                                       "WHERE r.model_id = ?1 AND r.retracted = 0 "
                                       "ORDER BY COALESCE(r.modified_at, r.created_at) DESC, r.record_id DESC",
                                   model_id)) {
        snap.records.push_back(std::move(row.record));
    }
    return snap;
}

// ---------------------------------------------------------------------------
// Records

ObjectRecord WorkspaceStore::add_object(const Session& session, std::string_view model_id, const StixObject& object,
                                        Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto actor = require_session(session, now);
    check_write(actor, load_model(model_id));
    catalog_->lookup(object.kind);
    if (object.id.kind() != object.kind)
        throw Error(ErrorCode::InvalidIdentifier, "identifier does not match object kind");

    auto dup = db_->prepare("SELECT 1 FROM records WHERE model_id = ?1 AND stix_id = ?2");
    dup.bind(1, model_id).bind(2, object.id.str());
    if (dup.step()) throw Error(ErrorCode::DuplicateIdentifier, "model already holds " + object.id.str());

    ObjectRecord record;
    record.record_id = crypto::random_hex(kKeyBytes);
    record.model_id = std::string(model_id);
    record.payload = object;
    record.created_at = now;
    db_->prepare(
           "INSERT INTO records (record_id, model_id, stix_id, kind, payload, created_at, modified_at, retracted) "
           "VALUES (?1, ?2, ?3, ?4, ?5, ?6, NULL, 0)")
        .bind(1, record.record_id)
        .bind(2, record.model_id)
        .bind(3, object.id.str())
        .bind(4, object.kind)
        .bind(5, object_to_json(object).dump())
        .bind(6, to_epoch_ms(now))
        .run();
    bump_model(model_id, now);
    tx.commit();
    return record;
}

ObjectRecord WorkspaceStore::write_payload(ObjectRecord record, const StixObject& object, Timestamp now) {
    if (record.retracted) throw Error(ErrorCode::Retracted, "object is retracted; restore it before editing");
    if (object.id != record.payload.id || object.kind != record.payload.kind)
        throw Error(ErrorCode::InvalidArgument, "payload identifier differs from the stored object");
    catalog_->lookup(object.kind);

    record.payload = object;
    record.modified_at = later(now, record.modified_at);
    db_->prepare("UPDATE records SET payload = ?2, modified_at = ?3 WHERE record_id = ?1")
        .bind(1, record.record_id)
        .bind(2, object_to_json(object).dump())
        .bind(3, to_epoch_ms(*record.modified_at))
        .run();
    bump_model(record.model_id, now);
    return record;
}

ObjectRecord WorkspaceStore::update_object(const Session& session, std::string_view record_id,
                                           const StixObject& object, Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto actor = require_session(session, now);
    auto record = write_payload(load_record_for_write(actor, record_id), object, now);
    tx.commit();
    return record;
}

ObjectRecord WorkspaceStore::modify_object(const Session& session, std::string_view record_id,
                                           const std::function<StixObject(StixObject)>& edit, Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto actor = require_session(session, now);
    auto record = load_record_for_write(actor, record_id);
    if (record.retracted) throw Error(ErrorCode::Retracted, "object is retracted; restore it before editing");
    auto edited = edit(record.payload);
    record = write_payload(std::move(record), edited, now);
    tx.commit();
    return record;
}

ObjectRecord WorkspaceStore::set_retracted(const Session& session, std::string_view record_id, bool retracted,
                                           Timestamp now) {
    std::lock_guard lock(mutex_);
    sql::Transaction tx(*db_);
    auto actor = require_session(session, now);
    auto record = load_record_for_write(actor, record_id);
    record.retracted = retracted;
    record.modified_at = later(now, record.modified_at);
    db_->prepare("UPDATE records SET retracted = ?2, modified_at = ?3 WHERE record_id = ?1")
        .bind(1, record_id)
        .bind(2, std::int64_t{retracted ? 1 : 0})
        .bind(3, to_epoch_ms(*record.modified_at))
        .run();
    bump_model(record.model_id, now);
    tx.commit();
    return record;
}

ObjectRecord WorkspaceStore::retract_object(const Session& session, std::string_view record_id, Timestamp now) {
    return set_retracted(session, record_id, true, now);
}

ObjectRecord WorkspaceStore::restore_object(const Session& session, std::string_view record_id, Timestamp now) {
    return set_retracted(session, record_id, false, now);
}

ObjectRecord WorkspaceStore::get_object(const Session& session, std::string_view record_id, Timestamp now) {
    std::lock_guard lock(mutex_);
    auto actor = require_session(session, now);
    auto record = find_record(record_id);
    if (!record) throw Error(ErrorCode::Forbidden, kNotAccessible);
    check_read(actor, load_model(record->model_id));
    return std::move(*record);
}

Page<ObjectRecord> WorkspaceStore::list_objects(const Session& session, std::string_view model_id, int page_index,
                                                Timestamp now) {
    std::lock_guard lock(mutex_);
    auto actor = require_session(session, now);
    check_read(actor, load_model(model_id));

    auto count = db_->prepare("SELECT COUNT(*) FROM records WHERE model_id = ?1");
    count.bind(1, model_id);
    count.step();
    Page<ObjectRecord> page;
    page.page_index = page_index;
    page.page_size = config_.page_size;
    page.total_count = static_cast<int>(count.int64(0));
    check_page(page_index, page.total_count, page.page_size);

    auto st = db_->prepare(
        "SELECT record_id FROM records WHERE model_id = ?1 "
        "ORDER BY COALESCE(modified_at, created_at) DESC, record_id DESC LIMIT ?2 OFFSET ?3");
    st.bind(1, model_id)
        .bind(2, std::int64_t{page.page_size})
        .bind(3, std::int64_t{(page_index - 1) * page.page_size});
    std::vector<std::string> ids;
    while (st.step()) ids.push_back(st.text(0));
    for (const auto& id : ids) page.items.push_back(*find_record(id));
    return page;
}

std::vector<ProfileRecord> WorkspaceStore::profile_records(const Session& session, Timestamp now) {
    std::lock_guard lock(mutex_);
    auto actor = require_session(session, now);
    return query_records(std::string(kRecordColumns) + "WHERE m.profile = ?1 ORDER BY r.record_id DESC",
                         to_string(actor.profile));
}

std::vector<ProfileRecord> WorkspaceStore::model_records(const Session& session, std::string_view model_id,
                                                         Timestamp now) {
    std::lock_guard lock(mutex_);
    auto actor = require_session(session, now);
    check_read(actor, load_model(model_id));
    return query_records(std::string(kRecordColumns) +
                             "WHERE r.model_id = ?1 "
                             "ORDER BY COALESCE(r.modified_at, r.created_at) DESC, r.record_id DESC",
                         model_id);
}

std::map<std::string, std::int64_t> WorkspaceStore::table_row_counts() {
    std::lock_guard lock(mutex_);
    std::map<std::string, std::int64_t> out;
    // Table names are fixed identifiers, never user input.
    for (const char* table : {"users", "sessions", "models", "records"}) {
        auto st = db_->prepare(std::string("SELECT COUNT(*) FROM ") + table);
        st.step();
        out[table] = st.int64(0);
    }
    return out;
}

}  // namespace stixdesk
