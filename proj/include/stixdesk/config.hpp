#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "stixdesk/store.hpp"

namespace stixdesk {

struct ServiceConfig {
    std::string bind_address = "127.0.0.1";
    int port = 8080;
    std::string database = "stixdesk.db";
    std::chrono::milliseconds session_idle = std::chrono::minutes{10};
    int page_size = 10;
    std::filesystem::path catalog_dir = "data/catalog";
    std::filesystem::path web_dir = "web";
    /// Marks the session cookie Secure. Set when TLS terminates in front of the service.
    bool secure_cookies = false;
    PasswordHashing hashing = PasswordHashing::Interactive;

    std::filesystem::path definitions_file() const { return catalog_dir / "STIX2.1.json"; }
    std::filesystem::path vocabularies_file() const { return catalog_dir / "STIX2.1-vocabularies.json"; }
    StoreConfig store_config() const { return {database, page_size, session_idle, hashing}; }
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// Reads process environment variables.
std::optional<std::string> process_env(const char* name);

/// Defaults, then the JSON config file (when given), then environment overrides:
/// PORT, BIND_ADDRESS, DB_URL, SESSION_IDLE_MINUTES, SESSION_IDLE_SECONDS, PAGE_SIZE,
/// CATALOG_DIR, WEB_DIR, SECURE_COOKIES, PASSWORD_HASHING (interactive|fast). Throws Error{InvalidArgument} on bad values.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env = process_env);

}  // namespace stixdesk
