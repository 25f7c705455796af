#pragma once

#include <stdexcept>
#include <string>

namespace bandspec {

// Base for all toolkit errors; `code()` is a stable machine-readable id
// used by the CLI when emitting error records.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define BANDSPEC_DEFINE_ERROR(Name)                         \
    class Name : public Error {                             \
    public:                                                 \
        explicit Name(const std::string& what)              \
            : Error(#Name, what) {}                         \
    }

BANDSPEC_DEFINE_ERROR(NonIntegerPitch);
BANDSPEC_DEFINE_ERROR(DegenerateDomain);
BANDSPEC_DEFINE_ERROR(OutOfDomain);
BANDSPEC_DEFINE_ERROR(ParseError);
BANDSPEC_DEFINE_ERROR(NonMonotoneSamples);
BANDSPEC_DEFINE_ERROR(RangeMismatch);
BANDSPEC_DEFINE_ERROR(DegenerateTriangle);
BANDSPEC_DEFINE_ERROR(WrongTag);
BANDSPEC_DEFINE_ERROR(NoConvergence);
BANDSPEC_DEFINE_ERROR(FactorizationFailure);
BANDSPEC_DEFINE_ERROR(DimensionTooLarge);
BANDSPEC_DEFINE_ERROR(RootNotBracketed);
BANDSPEC_DEFINE_ERROR(BracketInvalid);

#undef BANDSPEC_DEFINE_ERROR

} // namespace bandspec
