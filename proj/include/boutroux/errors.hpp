#pragma once

#include <stdexcept>
#include <string>

namespace boutroux {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BOUTROUX_DEFINE_ERROR(Name)              \
    class Name : public Error {                  \
    public:                                      \
        explicit Name(const std::string& what)   \
            : Error(#Name ": " + what) {}        \
    }

BOUTROUX_DEFINE_ERROR(NonConvergence);
BOUTROUX_DEFINE_ERROR(SingularSylvester);
BOUTROUX_DEFINE_ERROR(DegenerateHull);
BOUTROUX_DEFINE_ERROR(OnCutEvaluation);
BOUTROUX_DEFINE_ERROR(TangentialCrossing);
BOUTROUX_DEFINE_ERROR(ClearanceFailure);
BOUTROUX_DEFINE_ERROR(IllConditionedSystem);
BOUTROUX_DEFINE_ERROR(StepFloorReached);
BOUTROUX_DEFINE_ERROR(MultiplicityAmbiguity);
BOUTROUX_DEFINE_ERROR(StiffRegion);
BOUTROUX_DEFINE_ERROR(ConfigError);
BOUTROUX_DEFINE_ERROR(IoError);

#undef BOUTROUX_DEFINE_ERROR

}  // namespace boutroux
