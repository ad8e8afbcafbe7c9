#include "stixdesk/error.hpp"

namespace stixdesk {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::FileUnreadable: return "FileUnreadable";
        case ErrorCode::MalformedCatalog: return "MalformedCatalog";
        case ErrorCode::DanglingVocabularyReference: return "DanglingVocabularyReference";
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::UnknownVocabulary: return "UnknownVocabulary";
        case ErrorCode::UnknownProperty: return "UnknownProperty";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::DuplicateIdentifier: return "DuplicateIdentifier";
        case ErrorCode::MalformedJson: return "MalformedJson";
        case ErrorCode::NotABundle: return "NotABundle";
        case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
        case ErrorCode::UsernameTaken: return "UsernameTaken";
        case ErrorCode::WeakPassword: return "WeakPassword";
        case ErrorCode::BadCredentials: return "BadCredentials";
        case ErrorCode::SessionExpired: return "SessionExpired";
        case ErrorCode::EmptyName: return "EmptyName";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::Forbidden: return "Forbidden";
        case ErrorCode::Retracted: return "Retracted";
        case ErrorCode::PageOutOfRange: return "PageOutOfRange";
        case ErrorCode::AdministratorExists: return "AdministratorExists";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::StoreUnavailable: return "StoreUnavailable";
        case ErrorCode::BindFailure: return "BindFailure";
    }
    return "Unknown";
}

}  // namespace stixdesk
