#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stixdesk {

enum class ErrorCode {
    FileUnreadable,
    MalformedCatalog,
    DanglingVocabularyReference,
    UnknownKind,
    UnknownVocabulary,
    UnknownProperty,
    ShapeMismatch,
    DuplicateIdentifier,
    MalformedJson,
    NotABundle,
    InvalidIdentifier,
    UsernameTaken,
    WeakPassword,
    BadCredentials,
    SessionExpired,
    EmptyName,
    NotFound,
    Forbidden,
    Retracted,
    PageOutOfRange,
    AdministratorExists,
    InvalidArgument,
    StoreUnavailable,
    BindFailure,
};

/// Machine-readable name, e.g. "SessionExpired". Used verbatim in API error bodies.
std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code is stable; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace stixdesk
