#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hopwise {

enum class ErrorCode {
    MissingStateClause,
    MissingActionClause,
    MissingGoalClause,
    MarkerOrderViolation,
    NotIfThenFormat,
    DimensionMismatch,
    EmptyFile,
    UnknownRelation,
    BackendUnavailable,
    MalformedResponse,
    ParseError,
    UnresolvableRole,
    MissingQuestionForm,
    UnsupportedTemplate,
    ReplyKindMismatch,
    SessionAlreadyClosed,
    StorageFailure,
    InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingStateClause: return "MissingStateClause";
    case ErrorCode::MissingActionClause: return "MissingActionClause";
    case ErrorCode::MissingGoalClause: return "MissingGoalClause";
    case ErrorCode::MarkerOrderViolation: return "MarkerOrderViolation";
    case ErrorCode::NotIfThenFormat: return "NotIfThenFormat";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnresolvableRole: return "UnresolvableRole";
    case ErrorCode::MissingQuestionForm: return "MissingQuestionForm";
    case ErrorCode::UnsupportedTemplate: return "UnsupportedTemplate";
    case ErrorCode::ReplyKindMismatch: return "ReplyKindMismatch";
    case ErrorCode::SessionAlreadyClosed: return "SessionAlreadyClosed";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace hopwise
