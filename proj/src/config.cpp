#include "stixdesk/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "stixdesk/error.hpp"

namespace stixdesk {

std::optional<std::string> process_env(const char* name) {
    if (const char* v = std::getenv(name)) return std::string(v);
    return std::nullopt;
}

namespace {

int to_int(const std::string& text, const char* what, int min) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(text, &used);
        if (used == text.size() && value >= min) return value;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be an integer >= " + std::to_string(min));
}

bool to_bool(const std::string& text) { return text == "1" || text == "true" || text == "yes"; }

PasswordHashing to_hashing(const std::string& text) {
    if (text == "interactive") return PasswordHashing::Interactive;
    if (text == "fast") return PasswordHashing::Fast;
    throw Error(ErrorCode::InvalidArgument, "password hashing must be \"interactive\" or \"fast\"");
}

}  // namespace

ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
    ServiceConfig cfg;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read config " + file->string());
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
        }
        try {
            if (j.contains("bind_address")) cfg.bind_address = j.at("bind_address").get<std::string>();
            if (j.contains("port")) cfg.port = j.at("port").get<int>();
            if (j.contains("database")) cfg.database = j.at("database").get<std::string>();
            if (j.contains("session_idle_minutes"))
                cfg.session_idle = std::chrono::minutes{j.at("session_idle_minutes").get<int>()};
            if (j.contains("session_idle_seconds"))
                cfg.session_idle = std::chrono::seconds{j.at("session_idle_seconds").get<int>()};
            if (j.contains("page_size")) cfg.page_size = j.at("page_size").get<int>();
            if (j.contains("catalog_dir")) cfg.catalog_dir = j.at("catalog_dir").get<std::string>();
            if (j.contains("web_dir")) cfg.web_dir = j.at("web_dir").get<std::string>();
            if (j.contains("secure_cookies")) cfg.secure_cookies = j.at("secure_cookies").get<bool>();
            if (j.contains("password_hashing")) cfg.hashing = to_hashing(j.at("password_hashing").get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
        }
    }

    if (auto v = env("PORT")) cfg.port = to_int(*v, "PORT", 0);
    if (auto v = env("BIND_ADDRESS")) cfg.bind_address = *v;
    if (auto v = env("DB_URL")) cfg.database = *v;
    if (auto v = env("SESSION_IDLE_MINUTES")) cfg.session_idle = std::chrono::minutes{to_int(*v, "SESSION_IDLE_MINUTES", 1)};
    if (auto v = env("SESSION_IDLE_SECONDS")) cfg.session_idle = std::chrono::seconds{to_int(*v, "SESSION_IDLE_SECONDS", 1)};
    if (auto v = env("PAGE_SIZE")) cfg.page_size = to_int(*v, "PAGE_SIZE", 1);
    if (auto v = env("CATALOG_DIR")) cfg.catalog_dir = *v;
    if (auto v = env("WEB_DIR")) cfg.web_dir = *v;
    if (auto v = env("SECURE_COOKIES")) cfg.secure_cookies = to_bool(*v);
    if (auto v = env("PASSWORD_HASHING")) cfg.hashing = to_hashing(*v);

    if (cfg.page_size < 1) throw Error(ErrorCode::InvalidArgument, "page_size must be positive");
    if (cfg.port < 0 || cfg.port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range");
    if (cfg.session_idle.count() <= 0) throw Error(ErrorCode::InvalidArgument, "session idle limit must be positive");
    return cfg;
}

}  // namespace stixdesk
