#pragma once

#include <memory>

#include "stixdesk/catalog.hpp"
#include "stixdesk/config.hpp"
#include "stixdesk/store.hpp"
#include "stixdesk/time.hpp"

namespace stixdesk {

/// JSON API under /api, the catalog files under /spec, and the web console from web_dir.
///
/// Sessions travel in an http-only `sid` cookie. Forbidden and not-found outcomes on model
/// and object routes produce the same 404 body, so identifiers cannot be probed.
class Gateway {
public:
    Gateway(ServiceConfig config, std::shared_ptr<const Catalog> catalog, std::shared_ptr<WorkspaceStore> store,
            Clock clock = system_now);
    ~Gateway();
    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Binds the configured address; port 0 picks a free port. Returns the bound port.
    /// Throws Error{BindFailure}.
    int bind();
    /// Serves until stop(). Call bind() first.
    void run();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace stixdesk
