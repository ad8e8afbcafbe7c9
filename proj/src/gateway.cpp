#include "stixdesk/gateway.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "stixdesk/error.hpp"
#include "stixdesk/share.hpp"
#include "stixdesk/stix.hpp"
#include "stixdesk/timeline.hpp"

namespace stixdesk {

using nlohmann::json;

namespace {

constexpr const char* kCookieName = "sid";
constexpr const char* kJson = "application/json";

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::SessionExpired:
        case ErrorCode::BadCredentials: return 401;
        case ErrorCode::Forbidden: return 403;
        case ErrorCode::NotFound:
        case ErrorCode::UnknownVocabulary: return 404;
        case ErrorCode::UsernameTaken:
        case ErrorCode::AdministratorExists:
        case ErrorCode::Retracted:
        case ErrorCode::DuplicateIdentifier: return 409;
        case ErrorCode::StoreUnavailable:
        case ErrorCode::FileUnreadable:
        case ErrorCode::MalformedCatalog:
        case ErrorCode::DanglingVocabularyReference:
        case ErrorCode::BindFailure: return 503;
        default: return 400;
    }
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
    send_json(res, status, {{"code", code}, {"message", message}});
}

/// Model and object routes answer both Forbidden and NotFound with this exact response.
void send_concealed(httplib::Response& res) { send_error(res, 404, "NotFound", "resource not found"); }

json to_json(const UserAccount& u) {
    return {{"user_id", u.user_id}, {"username", u.username}, {"role", to_string(u.role)},
            {"profile", to_string(u.profile)}};
}

json to_json(const Model& m) {
    return {{"model_id", m.model_id},
            {"name", m.name},
            {"owner", m.owner},
            {"owner_name", m.owner_name},
            {"profile", to_string(m.profile)},
            {"created_at", format_timestamp(m.created_at)},
            {"modified_at", format_timestamp(m.modified_at)}};
}

json to_json(const ObjectRecord& r) {
    return {{"record_id", r.record_id},
            {"model_id", r.model_id},
            {"kind", r.payload.kind},
            {"object", json::parse(object_to_json(r.payload).dump())},
            {"created_at", format_timestamp(r.created_at)},
            {"modified_at", r.modified_at ? json(format_timestamp(*r.modified_at)) : json()},
            {"retracted", r.retracted}};
}

template <class T>
json page_json(const Page<T>& page) {
    json items = json::array();
    for (const auto& item : page.items) items.push_back(to_json(item));
    return {{"items", std::move(items)},
            {"page_index", page.page_index},
            {"page_size", page.page_size},
            {"total_count", page.total_count}};
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        auto j = json::parse(req.body);
        if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedJson, e.what());
    }
}

std::string text_field(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string())
        throw Error(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be a string");
    return it->get<std::string>();
}

int page_param(const httplib::Request& req) {
    if (!req.has_param("page")) return 1;
    const auto text = req.get_param_value("page");
    try {
        std::size_t used = 0;
        const int page = std::stoi(text, &used);
        if (used == text.size()) return page;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::PageOutOfRange, "page must be an integer");
}

std::optional<std::string> session_cookie(const httplib::Request& req) {
    const auto header = req.get_header_value("Cookie");
    std::string_view rest = header;
    while (!rest.empty()) {
        const auto semi = rest.find(';');
        auto part = rest.substr(0, semi);
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        const auto eq = part.find('=');
        if (eq != std::string_view::npos && part.substr(0, eq) == kCookieName) return std::string(part.substr(eq + 1));
        if (semi == std::string_view::npos) break;
        rest.remove_prefix(semi + 1);
    }
    return std::nullopt;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StixObject apply_properties(StixObject object, const Catalog& catalog, const json& properties, Timestamp now,
                            json& warnings) {
    if (!properties.is_object()) throw Error(ErrorCode::InvalidArgument, "\"properties\" must be an object");
    const auto& def = catalog.lookup(object.kind);
    for (const auto& [name, value] : properties.items()) {
        const auto* prop = def.find_property(name);
        if (!prop) throw Error(ErrorCode::UnknownProperty, "\"" + name + "\" is not a property of " + object.kind);
        auto result = set_property(std::move(object), catalog, name, value_from_json(value, *prop), now);
        object = std::move(result.object);
        if (result.warning) warnings.push_back(to_json(*result.warning));
    }
    return object;
}

}  // namespace

struct Gateway::Impl {
    ServiceConfig config;
    std::shared_ptr<const Catalog> catalog;
    std::shared_ptr<WorkspaceStore> store;
    Clock clock;
    httplib::Server server;
    std::string definitions_bytes;
    std::string vocabularies_bytes;

    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;
    using Authed = std::function<void(const Session&, const httplib::Request&, httplib::Response&)>;

    /// Runs `fn`, translating library errors. With `conceal`, Forbidden and NotFound collapse
    /// into the same 404 response.
    Handler guarded(Handler fn, bool conceal) {
        return [fn = std::move(fn), conceal](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const Error& e) {
                if (conceal && (e.code() == ErrorCode::Forbidden || e.code() == ErrorCode::NotFound)) {
                    send_concealed(res);
                } else {
                    send_error(res, status_for(e.code()), to_string(e.code()), e.what());
                }
            } catch (const std::exception&) {
                send_error(res, 500, "InternalError", "internal error");
            }
        };
    }

    Handler authed(Authed fn, bool conceal = true) {
        return guarded(
            [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
                auto token = session_cookie(req);
                if (!token) {
                    send_error(res, 401, "Unauthenticated", "log in first");
                    return;
                }
                fn(Session{*token, {}, {}}, req, res);
            },
            conceal);
    }

    std::string cookie(const std::string& value, bool expire) const {
        std::string c = std::string(kCookieName) + "=" + value + "; Path=/; HttpOnly; SameSite=Strict";
        if (config.secure_cookies) c += "; Secure";
        if (expire) c += "; Max-Age=0";
        return c;
    }

    void routes();
};

Gateway::Gateway(ServiceConfig config, std::shared_ptr<const Catalog> catalog, std::shared_ptr<WorkspaceStore> store,
                 Clock clock)
    : impl_(std::make_unique<Impl>()) {
    impl_->config = std::move(config);
    impl_->catalog = std::move(catalog);
    impl_->store = std::move(store);
    impl_->clock = std::move(clock);
    impl_->definitions_bytes = read_file(impl_->config.definitions_file());
    impl_->vocabularies_bytes = read_file(impl_->config.vocabularies_file());
    impl_->routes();
}

Gateway::~Gateway() { stop(); }

int Gateway::bind() {
    auto& srv = impl_->server;
    const auto& cfg = impl_->config;
    if (cfg.port == 0) {
        const int port = srv.bind_to_any_port(cfg.bind_address);
        if (port < 0) throw Error(ErrorCode::BindFailure, "cannot bind " + cfg.bind_address);
        return port;
    }
    if (!srv.bind_to_port(cfg.bind_address, cfg.port))
        throw Error(ErrorCode::BindFailure, "cannot bind " + cfg.bind_address + ":" + std::to_string(cfg.port));
    return cfg.port;
}

void Gateway::run() { impl_->server.listen_after_bind(); }

void Gateway::stop() {
    if (impl_) impl_->server.stop();
}

bool Gateway::running() const { return impl_->server.is_running(); }

void Gateway::Impl::routes() {
    auto& srv = server;
    srv.set_payload_max_length(4 * 1024 * 1024);

    srv.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
        if (req.path.rfind("/api/", 0) == 0) {
            res.set_header("Cache-Control", "no-store");
            res.set_header("Pragma", "no-cache");
        }
        res.set_header("X-Content-Type-Options", "nosniff");
    });

    if (std::filesystem::is_directory(config.web_dir)) srv.set_mount_point("/", config.web_dir.string());

    srv.Get("/spec/STIX2.1.json", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(definitions_bytes, kJson);
    });
    srv.Get("/spec/STIX2.1-vocabularies.json", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(vocabularies_bytes, kJson);
    });

    // Accounts --------------------------------------------------------------

    srv.Post("/api/auth/register", guarded(
                                       [this](const httplib::Request& req, httplib::Response& res) {
                                           const auto body = parse_body(req);
                                           auto profile = parse_profile(text_field(body, "profile"));
                                           if (!profile) throw Error(ErrorCode::InvalidArgument, "unknown profile");
                                           // Self-registration never grants the administrator role.
                                           auto user = store->register_user(text_field(body, "username"),
                                                                            text_field(body, "password"), *profile,
                                                                            Role::User, clock());
                                           send_json(res, 201, to_json(user));
                                       },
                                       false));

    srv.Post("/api/auth/login", guarded(
                                    [this](const httplib::Request& req, httplib::Response& res) {
                                        const auto body = parse_body(req);
                                        const auto now = clock();
                                        auto session = store->authenticate(text_field(body, "username"),
                                                                           text_field(body, "password"), now);
                                        auto user = store->current_user(session, now);
                                        res.set_header("Set-Cookie", cookie(session.token, false));
                                        send_json(res, 200, to_json(user));
                                    },
                                    false));

    srv.Post("/api/auth/logout", [this](const httplib::Request& req, httplib::Response& res) {
        if (auto token = session_cookie(req)) store->logout(Session{*token, {}, {}});
        res.set_header("Set-Cookie", cookie("", true));
        res.status = 204;
    });

    srv.Get("/api/auth/me", authed([this](const Session& s, const httplib::Request&, httplib::Response& res) {
                send_json(res, 200, to_json(store->current_user(s, clock())));
            }));

    srv.Post("/api/admin/users",
             authed(
                 [this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                     // Session problems take precedence over body errors.
                     store->current_user(s, clock());
                     const auto body = parse_body(req);
                     auto profile = parse_profile(text_field(body, "profile"));
                     if (!profile) throw Error(ErrorCode::InvalidArgument, "unknown profile");
                     auto role = body.contains("role") ? parse_role(text_field(body, "role")) : Role::User;
                     if (!role) throw Error(ErrorCode::InvalidArgument, "unknown role");
                     auto user = store->create_user(s, text_field(body, "username"), text_field(body, "password"),
                                                    *profile, *role, clock());
                     send_json(res, 201, to_json(user));
                 },
                 false));

    srv.Post("/api/admin/users/:username/deactivate",
             authed(
                 [this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                     store->deactivate_user(s, req.path_params.at("username"), clock());
                     res.status = 204;
                 },
                 false));

    // Catalog ---------------------------------------------------------------

    srv.Get("/api/catalog", guarded(
                                [this](const httplib::Request& req, httplib::Response& res) {
                                    std::optional<Category> category;
                                    if (req.has_param("category")) {
                                        category = parse_category(req.get_param_value("category"));
                                        if (!category) throw Error(ErrorCode::InvalidArgument, "unknown category");
                                    }
                                    json defs = json::array();
                                    for (const auto* def : catalog->list_kinds(category)) defs.push_back(to_json(*def));
                                    send_json(res, 200, {{"version", catalog->version()}, {"definitions", defs}});
                                },
                                false));

    srv.Get("/api/catalog/vocabularies/:name", guarded(
                                                   [this](const httplib::Request& req, httplib::Response& res) {
                                                       send_json(res, 200,
                                                                 to_json(catalog->vocabulary(req.path_params.at("name"))));
                                                   },
                                                   false));

    // Models ----------------------------------------------------------------

    srv.Get("/api/models", authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                send_json(res, 200, page_json(store->list_models(s, page_param(req), clock())));
            }));

    srv.Post("/api/models", authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                 const auto body = parse_body(req);
                 send_json(res, 201, to_json(store->create_model(s, text_field(body, "name"), clock())));
             }));

    srv.Get("/api/models/:id", authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                auto snap = store->fetch_model(s, req.path_params.at("id"), clock());
                json objects = json::array();
                for (const auto& r : snap.records) objects.push_back(to_json(r));
                send_json(res, 200, {{"model", to_json(snap.model)}, {"objects", objects}});
            }));

    srv.Patch("/api/models/:id", authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_body(req);
                  send_json(res, 200,
                            to_json(store->rename_model(s, req.path_params.at("id"), text_field(body, "name"), clock())));
              }));

    srv.Get("/api/models/:id/objects",
            authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                send_json(res, 200,
                          page_json(store->list_objects(s, req.path_params.at("id"), page_param(req), clock())));
            }));

    srv.Post("/api/models/:id/objects",
             authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                 const auto body = parse_body(req);
                 const auto now = clock();
                 auto object = new_object(*catalog, text_field(body, "kind"), now);
                 json warnings = json::array();
                 if (auto it = body.find("properties"); it != body.end())
                     object = apply_properties(std::move(object), *catalog, *it, now, warnings);
                 auto record = store->add_object(s, req.path_params.at("id"), object, now);
                 send_json(res, 201, {{"record", to_json(record)}, {"warnings", warnings}});
             }));

    srv.Get("/api/models/:id/preview",
            authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                res.set_content(preview_model_json(s, req.path_params.at("id"), *catalog, *store, clock()), kJson);
            }));

    srv.Get("/api/models/:id/download",
            authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                auto file = download_model_json(s, req.path_params.at("id"), *catalog, *store, clock());
                res.set_header("Content-Disposition", "attachment; filename=\"" + file.filename + "\"");
                res.set_content(file.bytes, file.media_type);
            }));

    srv.Get("/api/models/:id/validate",
            authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                send_json(res, 200, to_json(validate_model(s, req.path_params.at("id"), *catalog, *store, clock())));
            }));

    srv.Get("/api/models/:id/history",
            authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                json entries = json::array();
                for (const auto& e : model_history(s, req.path_params.at("id"), *store, clock()))
                    entries.push_back(to_json(e));
                send_json(res, 200, {{"entries", entries}});
            }));

    srv.Get("/api/timeline", authed([this](const Session& s, const httplib::Request&, httplib::Response& res) {
                json entries = json::array();
                for (const auto& e : build_timeline(s, *store, clock())) entries.push_back(to_json(e));
                send_json(res, 200, {{"entries", entries}});
            }));

    // Objects ---------------------------------------------------------------

    srv.Get("/api/objects/:id", authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                send_json(res, 200, to_json(store->get_object(s, req.path_params.at("id"), clock())));
            }));

    srv.Put("/api/objects/:id", authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                auto it = body.find("properties");
                if (it == body.end()) throw Error(ErrorCode::InvalidArgument, "\"properties\" is required");
                const auto now = clock();
                json warnings = json::array();
                auto record = store->modify_object(
                    s, req.path_params.at("id"),
                    [&](StixObject object) {
                        warnings = json::array();
                        return apply_properties(std::move(object), *catalog, *it, now, warnings);
                    },
                    now);
                send_json(res, 200, {{"record", to_json(record)}, {"warnings", warnings}});
            }));

    srv.Post("/api/objects/:id/retract",
             authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                 send_json(res, 200, to_json(store->retract_object(s, req.path_params.at("id"), clock())));
             }));

    srv.Post("/api/objects/:id/restore",
             authed([this](const Session& s, const httplib::Request& req, httplib::Response& res) {
                 send_json(res, 200, to_json(store->restore_object(s, req.path_params.at("id"), clock())));
             }));
}

}  // namespace stixdesk
