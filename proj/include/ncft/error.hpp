#pragma once

#include <stdexcept>
#include <string>

namespace ncft {

// Every library failure derives from ncft::Error so callers can catch the
// whole family at once; the concrete type names the violated contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NCFT_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& what) : Error(what) {}   \
    }

NCFT_DEFINE_ERROR(MissingSymbol);
NCFT_DEFINE_ERROR(ParseError);
NCFT_DEFINE_ERROR(EmptyWord);
NCFT_DEFINE_ERROR(ParentMismatch);
NCFT_DEFINE_ERROR(NotComparable);
NCFT_DEFINE_ERROR(NotAUnionOfBlocks);
NCFT_DEFINE_ERROR(NoW);
NCFT_DEFINE_ERROR(MissingValue);
NCFT_DEFINE_ERROR(LengthMismatch);
NCFT_DEFINE_ERROR(GeneralBackingRejected);
NCFT_DEFINE_ERROR(TruncationMismatch);
NCFT_DEFINE_ERROR(NotNormalized);
NCFT_DEFINE_ERROR(BadSupport);
NCFT_DEFINE_ERROR(SymbolicCoefficient);
NCFT_DEFINE_ERROR(UnknownSuite);

#undef NCFT_DEFINE_ERROR

} // namespace ncft
