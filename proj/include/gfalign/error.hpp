#ifndef GFALIGN_ERROR_HPP
#define GFALIGN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace gfalign {

enum class Errc {
    NotPrime,
    DegreeTooLarge,
    FieldTooLarge,
    InvalidArgument,
    NonMonic,
    NotIrreducible,
    DivisionByZero,
    CtxMismatch,
    NoNonResidue,
    ParseError,
    DimensionMismatch,
    NonSquare,
    Inconsistent,
    Underdetermined,
    FullyConnected,
    ZeroCoefficient,
    ZeroH,
    Infeasible,
    SearchExhausted,
    ConditionsNotMet,
    VerificationFailed,
    DecodeAmbiguous,
    TooLargeForExhaustive,
};

constexpr std::string_view errc_name(Errc e) {
    switch (e) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::DegreeTooLarge: return "DegreeTooLarge";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonMonic: return "NonMonic";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::CtxMismatch: return "CtxMismatch";
    case Errc::NoNonResidue: return "NoNonResidue";
    case Errc::ParseError: return "ParseError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonSquare: return "NonSquare";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::Underdetermined: return "Underdetermined";
    case Errc::FullyConnected: return "FullyConnected";
    case Errc::ZeroCoefficient: return "ZeroCoefficient";
    case Errc::ZeroH: return "ZeroH";
    case Errc::Infeasible: return "Infeasible";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::ConditionsNotMet: return "ConditionsNotMet";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::DecodeAmbiguous: return "DecodeAmbiguous";
    case Errc::TooLargeForExhaustive: return "TooLargeForExhaustive";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace gfalign

#endif // GFALIGN_ERROR_HPP
