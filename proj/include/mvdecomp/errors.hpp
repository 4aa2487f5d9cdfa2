#pragma once

#include <stdexcept>
#include <string>

namespace mvd {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define MVD_DEFINE_ERROR(NAME)                                                 \
    struct NAME : Error {                                                      \
        NAME() : Error(#NAME) {}                                               \
        explicit NAME(const std::string& what_)                                \
            : Error(std::string(#NAME) + ": " + what_) {}                      \
    }

// scalar / polynomial
MVD_DEFINE_ERROR(DivisionByZero);
MVD_DEFINE_ERROR(DuplicateAbscissa);
MVD_DEFINE_ERROR(NotExactMode);
MVD_DEFINE_ERROR(NotFloatMode);
MVD_DEFINE_ERROR(ZeroPolynomial);
MVD_DEFINE_ERROR(ParseError);

// linear algebra
MVD_DEFINE_ERROR(SizeMismatch);
MVD_DEFINE_ERROR(DimensionMismatch);
MVD_DEFINE_ERROR(IndexOutOfRange);
MVD_DEFINE_ERROR(EmptyInput);
MVD_DEFINE_ERROR(RankDeficient);
MVD_DEFINE_ERROR(AmbientMismatch);
MVD_DEFINE_ERROR(NotDirectSum);
MVD_DEFINE_ERROR(SingularMatrix);
MVD_DEFINE_ERROR(IllConditioned);

// decomposition pipeline
MVD_DEFINE_ERROR(InvalidDecomposition);
MVD_DEFINE_ERROR(HypothesisViolation);
MVD_DEFINE_ERROR(NotDisjointRows);
MVD_DEFINE_ERROR(BlockRankMismatch);
MVD_DEFINE_ERROR(PairingFailure);
MVD_DEFINE_ERROR(DegenerateSpectrum);

// minrank / generators
MVD_DEFINE_ERROR(BasisNotIndependent);
MVD_DEFINE_ERROR(SpecInvalid);

#undef MVD_DEFINE_ERROR

} // namespace mvd
