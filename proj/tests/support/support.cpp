#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <httplib.h>

#include "stixdesk/error.hpp"
#include "stixdesk/fixture.hpp"

#ifndef STIXDESK_TEST_CATALOG_DIR
#error "STIXDESK_TEST_CATALOG_DIR must be defined"
#endif

namespace testsupport {

using namespace stixdesk;

std::filesystem::path catalog_dir() { return STIXDESK_TEST_CATALOG_DIR; }
std::filesystem::path definitions_path() { return catalog_dir() / "STIX2.1.json"; }
std::filesystem::path vocabularies_path() { return catalog_dir() / "STIX2.1-vocabularies.json"; }

std::shared_ptr<const Catalog> shipped_catalog() {
    static const auto catalog =
        std::make_shared<const Catalog>(Catalog::load(definitions_path(), vocabularies_path()));
    return catalog;
}

namespace {
json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}
}  // namespace

const json& raw_definitions() {
    static const json j = read_json(definitions_path());
    return j;
}

const json& raw_vocabularies() {
    static const json j = read_json(vocabularies_path());
    return j;
}

Timestamp base_time() { return from_epoch_ms(1'700'000'000'000); }

ManualClock::ManualClock(Timestamp start) : ms_(std::make_shared<std::atomic<std::int64_t>>(to_epoch_ms(start))) {}
Timestamp ManualClock::now() const { return from_epoch_ms(ms_->load()); }
void ManualClock::advance(std::chrono::milliseconds by) { ms_->fetch_add(by.count()); }
void ManualClock::set(Timestamp t) { ms_->store(to_epoch_ms(t)); }
Clock ManualClock::clock() const {
    return [ms = ms_] { return from_epoch_ms(ms->load()); };
}

TempDir::TempDir() {
    std::random_device rd;
    const auto name = "stixdesk-test-" + std::to_string(rd()) + "-" + std::to_string(rd());
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::unique_ptr<WorkspaceStore> memory_store(int page_size, std::chrono::milliseconds idle) {
    StoreConfig cfg;
    cfg.database = ":memory:";
    cfg.page_size = page_size;
    cfg.session_idle = idle;
    cfg.hashing = PasswordHashing::Fast;
    return std::make_unique<WorkspaceStore>(cfg, shipped_catalog());
}

// Oracles ------------------------------------------------------------------------------

namespace {

bool absent(const json& object, const std::string& key) {
    auto it = object.find(key);
    if (it == object.end() || it->is_null()) return true;
    if (it->is_string()) return it->get_ref<const std::string&>().empty();
    if (it->is_array() || it->is_object()) return it->empty();
    return false;
}

const json* raw_definition(const json& definitions, const std::string& kind) {
    for (const auto& d : definitions.at("objects"))
        if (d.at("kind") == kind) return &d;
    return nullptr;
}

}  // namespace

std::set<FindingKey> brute_force_missing(const json& definitions, const json& object) {
    std::set<FindingKey> out;
    const auto* def = raw_definition(definitions, object.at("type").get<std::string>());
    if (!def) throw std::runtime_error("oracle: unknown type " + object.at("type").dump());
    const auto id = object.at("id").get<std::string>();
    for (const char* section : {"common_properties", "specific_properties"}) {
        for (const auto& p : def->at(section)) {
            if (p.value("required", false) && absent(object, p.at("name").get<std::string>()))
                out.emplace(id, p.at("name").get<std::string>(), "missing-required");
        }
    }
    return out;
}

std::set<FindingKey> brute_force_missing_bundle(const json& definitions, const json& bundle) {
    std::set<FindingKey> out;
    for (const auto& o : bundle.at("objects")) out.merge(brute_force_missing(definitions, o));
    return out;
}

std::set<FindingKey> keys_of(const std::vector<ValidationFinding>& findings, bool missing_only) {
    std::set<FindingKey> out;
    for (const auto& f : findings) {
        if (missing_only && f.problem != Problem::MissingRequired) continue;
        out.emplace(f.object_id.str(), f.property, std::string(to_string(f.problem)));
    }
    return out;
}

std::vector<std::string> timeline_violations(const std::vector<TimelineEntry>& entries,
                                             const std::vector<ProfileRecord>& records, bool keep_retracted) {
    std::vector<std::string> bad;

    std::multiset<std::string> expected;
    for (const auto& r : records)
        if (keep_retracted || !r.record.retracted) expected.insert(r.record.record_id);
    std::multiset<std::string> got;
    for (const auto& e : entries) got.insert(e.record_id);
    if (got != expected) bad.push_back("entry set differs from eligible records");

    std::map<std::string, const ProfileRecord*> by_id;
    for (const auto& r : records) by_id[r.record.record_id] = &r;

    bool seen_untimed = false;
    std::optional<Timestamp> last_timed;
    std::optional<Timestamp> last_untimed;
    std::map<std::string, int> colour_of_model;
    std::set<int> colours_in_use;
    int models_seen = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        auto it = by_id.find(e.record_id);
        if (it == by_id.end()) continue;
        const auto& rec = it->second->record;
        if (e.modified_at != rec.modified_at || e.created_at != rec.created_at || e.model_id != rec.model_id ||
            e.retracted != rec.retracted)
            bad.push_back("entry " + std::to_string(i) + " does not mirror its record");
        if (!keep_retracted && e.retracted) bad.push_back("retracted entry " + std::to_string(i));

        if (e.modified_at) {
            if (seen_untimed) bad.push_back("timed entry after untimed entry at " + std::to_string(i));
            if (last_timed && *e.modified_at < *last_timed)
                bad.push_back("modified_at decreases at " + std::to_string(i));
            last_timed = e.modified_at;
        } else {
            seen_untimed = true;
            if (last_untimed && e.created_at < *last_untimed)
                bad.push_back("created_at decreases among untimed entries at " + std::to_string(i));
            last_untimed = e.created_at;
        }

        if (i > 0) {
            const auto& p = entries[i - 1];
            const bool same_key = p.modified_at.has_value() == e.modified_at.has_value() &&
                                  (e.modified_at ? *p.modified_at == *e.modified_at : p.created_at == e.created_at);
            if (same_key && !(p.record_id > e.record_id))
                bad.push_back("tie not broken by descending record key at " + std::to_string(i));
        }

        auto [c, inserted] = colour_of_model.emplace(e.model_id, e.colour_index);
        if (inserted) {
            if (e.colour_index != models_seen % kPaletteSize)
                bad.push_back("model " + e.model_id + " got colour out of first-appearance order");
            ++models_seen;
            colours_in_use.insert(e.colour_index);
        } else if (c->second != e.colour_index) {
            bad.push_back("model " + e.model_id + " has two colours");
        }
        if (e.colour_index < 0 || e.colour_index >= kPaletteSize) bad.push_back("colour out of palette");
    }
    if (models_seen <= kPaletteSize && static_cast<int>(colours_in_use.size()) != models_seen)
        bad.push_back("distinct models share a colour within palette size");
    return bad;
}

// Generators -----------------------------------------------------------------------------

const std::vector<std::string>& hostile_strings() {
    static const std::vector<std::string> corpus = {
        "'",
        "''",
        "\"",
        "' OR '1'='1",
        "'; DROP TABLE models; --",
        "\"; DROP TABLE users; --",
        "1); DELETE FROM records; --",
        "Robert'); DROP TABLE sessions;--",
        "admin'--",
        "' UNION SELECT password_digest, username FROM users --",
        "%",
        "_",
        "%_%' ESCAPE '\\",
        "?1 ?2 :name @name $name",
        "\\",
        "\\\\'",
        "/*",
        "*/ SELECT 1 /*",
        "--",
        ";",
        "\n",
        "\r\n",
        "\t",
        std::string("a\0b", 3),
        std::string(1, '\x01'),
        "\x7f",
        "<script>alert(1)</script>",
        "{\"type\":\"bundle\"}",
        "]}",
        "${jndi:ldap://x/a}",
        "$(rm -rf /)",
        "`id`",
        "../../../../etc/passwd",
        "..\\..\\windows\\win.ini",
        "C:\\",
        "\xc3\xa9\xe2\x82\xac\xf0\x9f\x98\x80",
        "\xe2\x80\xae" "abc",
        "\xef\xbb\xbf" "bom",
        "\xe0\xa4\x95\xe0\xa5\x8d\xe0\xa4\xb7",
        "\xd8\xa7\xd9\x84\xd8\xb9\xd8\xb1\xd8\xa8\xd9\x8a\xd8\xa9",
        "\xf0\x9f\x8f\xb4\xe2\x80\x8d\xe2\x98\xa0\xef\xb8\x8f",
        "NULL",
        "null",
        "0",
        "-1",
        "1e309",
        "true",
        "   ",
        std::string(4096, 'x'),
        "x' AND 1=(SELECT COUNT(*) FROM sqlite_master) AND 'a'='a",
        "'||(SELECT hex(randomblob(8)))||'",
        "PRAGMA writable_schema=1;",
        "ATTACH DATABASE '/tmp/evil.db' AS evil;",
    };
    return corpus;
}

std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
    static const std::vector<std::string> pieces = {"a", "Z", "0", " ", "'", "\"", "\\", "/", "%", ";", "-",
                                                    "\n", "\t", std::string(1, '\x01'), "\xc3\xa9",
                                                    "\xe2\x82\xac", "\xf0\x9f\x98\x80", "\xe4\xb8\xad"};
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::string out;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) out += pieces[pick(rng)];
    return out;
}

StixObject random_object(const Catalog& catalog, std::mt19937_64& rng, Timestamp now) {
    const auto kinds = catalog.list_kinds();
    std::uniform_int_distribution<std::size_t> pick_kind(0, kinds.size() - 1);
    const auto& def = *kinds[pick_kind(rng)];
    auto object = new_object(catalog, def.kind, now);
    std::bernoulli_distribution keep(0.5);
    std::bernoulli_distribution odd_text(0.3);
    std::uniform_int_distribution<std::size_t> pick_hostile(0, hostile_strings().size() - 1);
    for (const auto* section : {&def.common_properties, &def.specific_properties}) {
        for (const auto& prop : *section) {
            if (!keep(rng)) continue;
            PropertyValue value = sample_value(prop, catalog, rng);
            if (prop.shape == ValueShape::String && odd_text(rng)) {
                value = keep(rng) ? hostile_strings()[pick_hostile(rng)] : random_text(rng, 24);
            }
            if (value.is_empty()) continue;
            object.properties[prop.name] = std::move(value);
        }
    }
    if (object.created && keep(rng))
        object.modified = *object.created + std::chrono::milliseconds{std::uniform_int_distribution<int>(0, 90'000)(rng)};
    return object;
}

std::vector<StixObject> random_objects(const Catalog& catalog, std::mt19937_64& rng, Timestamp now,
                                       std::size_t max_count) {
    std::uniform_int_distribution<std::size_t> count(0, max_count);
    std::vector<StixObject> out;
    const auto n = count(rng);
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_object(catalog, rng, now));
    return out;
}

std::vector<ProfileRecord> random_profile_records(const Catalog& catalog, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> model_count(1, 11);
    std::uniform_int_distribution<int> record_count(0, 40);
    std::uniform_int_distribution<int> offset(0, 6);
    std::bernoulli_distribution timed(0.7);
    std::bernoulli_distribution retracted(0.2);
    const int models = model_count(rng);
    const int records = record_count(rng);
    std::vector<ProfileRecord> out;
    std::set<std::string> used;
    for (int i = 0; i < records; ++i) {
        ProfileRecord r;
        const int m = std::uniform_int_distribution<int>(0, models - 1)(rng);
        r.record.model_id = "model-" + std::to_string(m);
        r.model_name = "name-" + std::to_string(m);
        std::string key;
        do {
            key = "r" + std::to_string(std::uniform_int_distribution<int>(0, 999)(rng));
        } while (!used.insert(key).second);
        r.record.record_id = key;
        r.record.payload = random_object(catalog, rng, base_time());
        r.record.created_at = base_time() + std::chrono::seconds{offset(rng)};
        if (timed(rng)) r.record.modified_at = r.record.created_at + std::chrono::seconds{offset(rng)};
        r.record.retracted = retracted(rng);
        out.push_back(std::move(r));
    }
    return out;
}

// HTTP -----------------------------------------------------------------------------------

TestService::TestService(std::chrono::milliseconds idle, int page_size, std::optional<Clock> clock) {
    config_.bind_address = "127.0.0.1";
    config_.port = 0;
    config_.database = (dir_.path() / "service.db").string();
    config_.session_idle = idle;
    config_.page_size = page_size;
    config_.catalog_dir = catalog_dir();
    config_.web_dir = dir_.path() / "web";
    config_.hashing = PasswordHashing::Fast;
    std::filesystem::create_directories(config_.web_dir);
    std::ofstream(config_.web_dir / "index.html") << "<!doctype html><title>console</title>";
    store_ = std::make_shared<WorkspaceStore>(config_.store_config(), shipped_catalog());
    gateway_ = std::make_unique<Gateway>(config_, shipped_catalog(), store_, clock.value_or(system_now));
    port_ = gateway_->bind();
    thread_ = std::thread([g = gateway_.get()] { g->run(); });
}

TestService::~TestService() {
    gateway_->stop();
    if (thread_.joinable()) thread_.join();
}

json Reply::json_body() const { return json::parse(body); }

std::string Reply::header(const std::string& name) const {
    for (const auto& [k, v] : headers) {
        if (k.size() == name.size() && std::equal(k.begin(), k.end(), name.begin(), [](char a, char b) {
                return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
            }))
            return v;
    }
    return {};
}

struct Agent::Client {
    httplib::Client http;
    explicit Client(int port) : http("127.0.0.1", port) {}
};

Agent::Agent(int port) : client_(std::make_unique<Client>(port)) {
    client_->http.set_connection_timeout(5);
    client_->http.set_read_timeout(30);
}

Agent::~Agent() = default;
Agent::Agent(Agent&&) noexcept = default;

namespace {

httplib::Headers request_headers(const std::optional<std::string>& cookie) {
    httplib::Headers h;
    if (cookie) h.emplace("Cookie", "sid=" + *cookie);
    return h;
}

Reply wrap(const httplib::Result& r, std::optional<std::string>& cookie) {
    if (!r) throw std::runtime_error("http request failed: " + httplib::to_string(r.error()));
    Reply reply{r->status, r->body, {r->headers.begin(), r->headers.end()}};
    const auto set_cookie = r->get_header_value("Set-Cookie");
    if (set_cookie.rfind("sid=", 0) == 0) {
        const auto end = set_cookie.find(';');
        auto value = set_cookie.substr(4, end == std::string::npos ? std::string::npos : end - 4);
        if (value.empty()) {
            cookie.reset();
        } else {
            cookie = value;
        }
    }
    return reply;
}

}  // namespace

Reply Agent::get(const std::string& path) { return wrap(client_->http.Get(path, request_headers(cookie_)), cookie_); }
Reply Agent::post(const std::string& path, const json& body) {
    return wrap(client_->http.Post(path, request_headers(cookie_), body.dump(), "application/json"), cookie_);
}
Reply Agent::put(const std::string& path, const json& body) {
    return wrap(client_->http.Put(path, request_headers(cookie_), body.dump(), "application/json"), cookie_);
}
Reply Agent::patch(const std::string& path, const json& body) {
    return wrap(client_->http.Patch(path, request_headers(cookie_), body.dump(), "application/json"), cookie_);
}

Reply Agent::login(const std::string& username, const std::string& password) {
    return post("/api/auth/login", {{"username", username}, {"password", password}});
}

Reply Agent::register_and_login(const std::string& username, const std::string& password,
                                const std::string& profile) {
    auto r = post("/api/auth/register", {{"username", username}, {"password", password}, {"profile", profile}});
    if (r.status != 201 && r.status != 409) return r;
    return login(username, password);
}

}  // namespace testsupport
