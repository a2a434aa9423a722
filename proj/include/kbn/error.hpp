#ifndef KBN_ERROR_HPP
#define KBN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace kbn {

enum class ErrorKind {
    CycleDetected,
    UnknownVariable,
    DuplicateEdge,
    ArityMismatch,
    MalformedRow,
    DuplicateConstraint,
    VariableInTwoTiers,
    ConstraintConflict,
    UnsatisfiableSeed,
    OverlappingRoles,
    NoAdmissibleConnector,
    DegenerateTruth,
    VariableSetMismatch,
    TooFewVariables,
    TooManyVariables,
    IllegalRate,
    Timeout,
    InvalidArgument,
    Io,
};

std::string_view error_kind_name(ErrorKind kind);

// Every library failure is reported through this type; kind() is stable and
// is what the CLI serialises.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), m_kind(kind) {}

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

}  // namespace kbn

#endif  // KBN_ERROR_HPP
