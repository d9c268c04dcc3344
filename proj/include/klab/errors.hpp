// Error taxonomy shared by all modules. Codes map onto CLI exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace klab {

// Broad failure classes. `retryable` errors are handled internally by
// generator loops (fresh seed / larger field); `exhausted` surfaces as
// exit code 2; `validation` as exit code 3.
enum class ErrorKind {
    validation,
    retryable,
    exhausted,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string what) : std::runtime_error(std::move(what)), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

#define KLAB_DEFINE_ERROR(Name, Kind)                                              \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& msg) : Error(ErrorKind::Kind, msg) {}     \
    }

KLAB_DEFINE_ERROR(DivisionByZero, internal);
KLAB_DEFINE_ERROR(SpecMismatch, validation);
KLAB_DEFINE_ERROR(ZeroPolynomial, validation);
KLAB_DEFINE_ERROR(AmbientMismatch, validation);
KLAB_DEFINE_ERROR(NotInSpan, retryable);
KLAB_DEFINE_ERROR(HilbertMismatch, retryable);
KLAB_DEFINE_ERROR(InsufficientPoints, retryable);
KLAB_DEFINE_ERROR(SpecialtyViolation, retryable);
KLAB_DEFINE_ERROR(DegreeUnavailable, internal);
KLAB_DEFINE_ERROR(RetriesExhausted, exhausted);
KLAB_DEFINE_ERROR(ConicSpaceDegenerate, retryable);
KLAB_DEFINE_ERROR(RankDeficientParametrization, validation);
KLAB_DEFINE_ERROR(FormatVersionMismatch, validation);
KLAB_DEFINE_ERROR(MalformedFile, validation);
KLAB_DEFINE_ERROR(UnsupportedModel, validation);
KLAB_DEFINE_ERROR(BoundViolation, validation);

#undef KLAB_DEFINE_ERROR

} // namespace klab
