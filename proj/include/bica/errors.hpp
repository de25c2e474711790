#pragma once

#include <stdexcept>
#include <string>

namespace bica {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BICA_DEFINE_ERROR(NAME)                    \
    class NAME : public Error {                    \
    public:                                        \
        using Error::Error;                        \
    };

BICA_DEFINE_ERROR(InvalidData)
BICA_DEFINE_ERROR(RankDeficient)
BICA_DEFINE_ERROR(InvalidDimension)
BICA_DEFINE_ERROR(DegenerateSample)
BICA_DEFINE_ERROR(InvalidGrid)
BICA_DEFINE_ERROR(InvalidDf)
BICA_DEFINE_ERROR(CalibrationFailed)
BICA_DEFINE_ERROR(ModelDiverged)
BICA_DEFINE_ERROR(DegenerateUpdate)
BICA_DEFINE_ERROR(InvalidSpec)
BICA_DEFINE_ERROR(DegenerateSignal)

#undef BICA_DEFINE_ERROR

} // namespace bica
