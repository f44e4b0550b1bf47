#pragma once

#include <stdexcept>
#include <string>

namespace segre {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* name() const noexcept { return "Error"; }
};

#define SEGRE_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& what) : Error(what) {}    \
        const char* name() const noexcept override { return #Name; } \
    }

// algebra
SEGRE_DEFINE_ERROR(VarSpaceMismatch);
SEGRE_DEFINE_ERROR(UnknownVariable);
SEGRE_DEFINE_ERROR(UnpairedVariable);
SEGRE_DEFINE_ERROR(TruncationUnsound);
SEGRE_DEFINE_ERROR(TruncationRequired);
SEGRE_DEFINE_ERROR(DimensionMismatch);
SEGRE_DEFINE_ERROR(ParseError);
SEGRE_DEFINE_ERROR(DivisionByZero);

// manifold / chains
SEGRE_DEFINE_ERROR(RealityViolation);
SEGRE_DEFINE_ERROR(SingularInput);
SEGRE_DEFINE_ERROR(OffManifold);

// invariants / lie / orbit
SEGRE_DEFINE_ERROR(NotAHypersurface);
SEGRE_DEFINE_ERROR(WitnessNotFound);
SEGRE_DEFINE_ERROR(WrongDimensions);
SEGRE_DEFINE_ERROR(ChartMismatch);
SEGRE_DEFINE_ERROR(RankAssumptionViolated);

// cli
SEGRE_DEFINE_ERROR(UsageError);
SEGRE_DEFINE_ERROR(ManifestError);

#undef SEGRE_DEFINE_ERROR

}  // namespace segre
