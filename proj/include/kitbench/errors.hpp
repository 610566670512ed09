#pragma once

#include <stdexcept>
#include <string>

namespace kitbench {

/// Failure categories surfaced by validators and bounded searches.
enum class ErrorKind {
    ParseError,
    NonAssociative,
    MissingInverse,
    BadIdentity,
    DanglingId,
    UnknownObject,
    NotEndomorphism,
    GroupTooLarge,
    TypeMismatch,
    NotConjugationClosed,
    SearchSpaceTooLarge,
    BaseMismatch,
    NotBoolean,
    BudgetExceeded,
    IndexOutOfRange,
    NotEndo,
    UnknownElement,
    NotSubgroup,
    NotStabilized,
    ProbeBudgetExceeded,
    UsageError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::NonAssociative: return "NonAssociative";
        case ErrorKind::MissingInverse: return "MissingInverse";
        case ErrorKind::BadIdentity: return "BadIdentity";
        case ErrorKind::DanglingId: return "DanglingId";
        case ErrorKind::UnknownObject: return "UnknownObject";
        case ErrorKind::NotEndomorphism: return "NotEndomorphism";
        case ErrorKind::GroupTooLarge: return "GroupTooLarge";
        case ErrorKind::TypeMismatch: return "TypeMismatch";
        case ErrorKind::NotConjugationClosed: return "NotConjugationClosed";
        case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
        case ErrorKind::BaseMismatch: return "BaseMismatch";
        case ErrorKind::NotBoolean: return "NotBoolean";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::NotEndo: return "NotEndo";
        case ErrorKind::UnknownElement: return "UnknownElement";
        case ErrorKind::NotSubgroup: return "NotSubgroup";
        case ErrorKind::NotStabilized: return "NotStabilized";
        case ErrorKind::ProbeBudgetExceeded: return "ProbeBudgetExceeded";
        case ErrorKind::UsageError: return "UsageError";
    }
    return "Error";
}

} // namespace kitbench
