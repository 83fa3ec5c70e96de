#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace krein {

/// Base for all toolkit errors.  `code()` is a stable machine-readable name
/// suitable for programmatic dispatch (the CLI forwards it verbatim).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define KREIN_ERROR_TYPE(Name)                                               \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

KREIN_ERROR_TYPE(NonSquare);
KREIN_ERROR_TYPE(NumericalBreakdown);
KREIN_ERROR_TYPE(SpectrumHit);
KREIN_ERROR_TYPE(BoundaryHit);
KREIN_ERROR_TYPE(DimensionMismatch);
KREIN_ERROR_TYPE(RankDeficientBasis);
KREIN_ERROR_TYPE(SelfadjointnessViolation);
KREIN_ERROR_TYPE(NotJSelfadjoint);
KREIN_ERROR_TYPE(NotAnEigenvalue);
KREIN_ERROR_TYPE(TransportFailure);
KREIN_ERROR_TYPE(MultiplicityTooLarge);
KREIN_ERROR_TYPE(DegenerateForm);
KREIN_ERROR_TYPE(InvalidRule);
KREIN_ERROR_TYPE(ParseError);
KREIN_ERROR_TYPE(ValidationError);

#undef KREIN_ERROR_TYPE

} // namespace krein
