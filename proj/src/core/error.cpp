#include "hazstereo/core/error.hpp"

namespace hazstereo {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::LevelOutOfRange: return "LevelOutOfRange";
        case Errc::FactorMismatch: return "FactorMismatch";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::EmptyMask: return "EmptyMask";
        case Errc::EmptyRegion: return "EmptyRegion";
        case Errc::DegenerateInput: return "DegenerateInput";
        case Errc::WindowTooLarge: return "WindowTooLarge";
        case Errc::NonPositiveDepth: return "NonPositiveDepth";
        case Errc::MalformedHeader: return "MalformedHeader";
        case Errc::TruncatedPayload: return "TruncatedPayload";
        case Errc::WrongBitDepth: return "WrongBitDepth";
        case Errc::ParseError: return "ParseError";
        case Errc::IncompleteGrid: return "IncompleteGrid";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace hazstereo
