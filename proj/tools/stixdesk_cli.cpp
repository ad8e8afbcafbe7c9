// Command-line entry point: the HTTP service plus offline validate, timeline, export,
// administrator bootstrap, and fixture seeding.

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stixdesk/catalog.hpp"
#include "stixdesk/config.hpp"
#include "stixdesk/error.hpp"
#include "stixdesk/fixture.hpp"
#include "stixdesk/gateway.hpp"
#include "stixdesk/share.hpp"
#include "stixdesk/stix.hpp"
#include "stixdesk/store.hpp"
#include "stixdesk/timeline.hpp"

using namespace stixdesk;

namespace {

constexpr int kExitFindings = 1;
constexpr int kExitInput = 2;

struct Common {
    std::string config_file;
    std::string database;
    std::string catalog_dir;
};

ServiceConfig resolve(const Common& common) {
    auto cfg = load_config(common.config_file.empty() ? std::nullopt
                                                      : std::optional<std::filesystem::path>(common.config_file));
    if (!common.database.empty()) cfg.database = common.database;
    if (!common.catalog_dir.empty()) cfg.catalog_dir = common.catalog_dir;
    return cfg;
}

std::shared_ptr<const Catalog> load_catalog(const ServiceConfig& cfg) {
    return std::make_shared<const Catalog>(Catalog::load(cfg.definitions_file(), cfg.vocabularies_file()));
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::FileUnreadable, "cannot read " + path);
    return ss.str();
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::cout << bytes;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write " + path);
}

std::string password_or_env(const std::string& given) {
    if (!given.empty()) return given;
    if (auto v = process_env("STIXDESK_PASSWORD")) return *v;
    throw Error(ErrorCode::InvalidArgument, "no password: pass --password or set STIXDESK_PASSWORD");
}

Profile profile_arg(const std::string& text) {
    if (auto p = parse_profile(text)) return *p;
    throw Error(ErrorCode::InvalidArgument, "unknown profile \"" + text + "\"");
}

Gateway* g_gateway = nullptr;

void on_signal(int) {
    if (g_gateway) g_gateway->stop();
}

int run_serve(const Common& common) {
    const auto cfg = resolve(common);
    auto catalog = load_catalog(cfg);
    auto store = std::make_shared<WorkspaceStore>(cfg.store_config(), catalog);
    Gateway gateway(cfg, catalog, store);
    const int port = gateway.bind();
    std::cerr << "listening on " << cfg.bind_address << ":" << port << "\n";
    g_gateway = &gateway;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    gateway.run();
    g_gateway = nullptr;
    return 0;
}

int run_validate(const Common& common, const std::string& bundle_path) {
    const auto cfg = resolve(common);
    const auto catalog = load_catalog(cfg);
    const auto bundle = parse_bundle(*catalog, read_all(bundle_path));
    bool missing = false;
    for (const auto& object : bundle.objects) {
        for (const auto& f : validate_object(object, *catalog)) {
            std::cout << f.object_id.str() << ' ' << f.property << ' ' << to_string(f.problem) << '\n';
            missing = missing || f.problem == Problem::MissingRequired;
        }
    }
    return missing ? kExitFindings : 0;
}

struct Login {
    std::string username;
    std::string password;
};

int run_timeline(const Common& common, const Login& login, const std::string& out) {
    const auto cfg = resolve(common);
    const auto catalog = load_catalog(cfg);
    WorkspaceStore store(cfg.store_config(), catalog);
    const auto now = system_now();
    const auto session = store.authenticate(login.username, password_or_env(login.password), now);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : build_timeline(session, store, now)) entries.push_back(to_json(e));
    store.logout(session);
    write_output(out, entries.dump(2) + "\n");
    return 0;
}

int run_export(const Common& common, const Login& login, const std::string& model_id, const std::string& out) {
    const auto cfg = resolve(common);
    const auto catalog = load_catalog(cfg);
    WorkspaceStore store(cfg.store_config(), catalog);
    const auto now = system_now();
    const auto session = store.authenticate(login.username, password_or_env(login.password), now);
    const auto file = download_model_json(session, model_id, *catalog, store, now);
    store.logout(session);
    write_output(out.empty() ? file.filename : out, file.bytes);
    return 0;
}

int run_bootstrap(const Common& common, const Login& login, const std::string& profile) {
    const auto cfg = resolve(common);
    const auto catalog = load_catalog(cfg);
    WorkspaceStore store(cfg.store_config(), catalog);
    const auto admin =
        store.bootstrap_administrator(login.username, password_or_env(login.password), profile_arg(profile), system_now());
    std::cout << "created administrator " << admin.username << "\n";
    return 0;
}

int run_seed(const Common& common, std::uint64_t seed) {
    const auto cfg = resolve(common);
    const auto catalog = load_catalog(cfg);
    WorkspaceStore store(cfg.store_config(), catalog);
    const auto fixture = seed_desk_fixture(store, *catalog, system_now(), seed);
    nlohmann::ordered_json summary;
    summary["models"] = fixture.model_ids.size();
    summary["objects"] = fixture.object_count;
    summary["clean_model"] = fixture.clean_model_id;
    summary["incomplete_model"] = fixture.incomplete_model_id;
    summary["users"] = nlohmann::ordered_json::array();
    for (const auto& u : fixture.users)
        summary["users"].push_back({{"username", u.username}, {"password", u.password}, {"profile", to_string(u.profile)}});
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stixdesk: collaborative STIX 2.1 modelling workspace"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--config", common.config_file, "JSON config file; environment variables override it");
    app.add_option("--db", common.database, "Database path, overriding config and DB_URL");
    app.add_option("--catalog-dir", common.catalog_dir, "Directory holding the catalog files");

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");

    std::string bundle_path;
    auto* validate = app.add_subcommand(
        "validate", "Check a bundle file; prints `object-id property problem` per finding. "
                    "Exit 0: no missing required properties, 1: some missing, 2: unreadable or malformed input");
    validate->add_option("bundle", bundle_path, "Bundle JSON file")->required();

    Login login;
    std::string out;
    auto* timeline = app.add_subcommand("timeline", "Write the user's profile timeline as JSON");
    timeline->add_option("--user", login.username, "Username")->required();
    timeline->add_option("--password", login.password, "Password (default: $STIXDESK_PASSWORD)");
    timeline->add_option("--out", out, "Output file, or - for stdout");

    std::string model_id;
    auto* exporter = app.add_subcommand("export", "Write a model's bundle file");
    exporter->add_option("--user", login.username, "Username")->required();
    exporter->add_option("--password", login.password, "Password (default: $STIXDESK_PASSWORD)");
    exporter->add_option("--model", model_id, "Model identifier")->required();
    exporter->add_option("--out", out, "Output file (default: named after the model), or - for stdout");

    std::string profile = std::string(to_string(Profile::CyberSecurityManagers));
    auto* bootstrap = app.add_subcommand("bootstrap-admin", "Create the first administrator; refuses if one exists");
    bootstrap->add_option("--user", login.username, "Username")->required();
    bootstrap->add_option("--password", login.password, "Password (default: $STIXDESK_PASSWORD)");
    bootstrap->add_option("--profile", profile, "Profile")->capture_default_str();

    std::uint64_t seed = 1;
    auto* seeder = app.add_subcommand("seed", "Populate an empty database with the demo workspace");
    seeder->add_option("--seed", seed, "Random seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve) return run_serve(common);
        if (*validate) return run_validate(common, bundle_path);
        if (*timeline) return run_timeline(common, login, out);
        if (*exporter) return run_export(common, login, model_id, out);
        if (*bootstrap) return run_bootstrap(common, login, profile);
        if (*seeder) return run_seed(common, seed);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
