#include "brach/errors.hpp"

namespace brach {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::domain_error: return "DomainError";
        case Errc::non_positive_radius: return "NonPositiveRadius";
        case Errc::non_positive_exponent: return "NonPositiveExponent";
        case Errc::start_level_singularity: return "StartLevelSingularity";
        case Errc::symmetry_mismatch: return "SymmetryMismatch";
        case Errc::singular_start: return "SingularStart";
        case Errc::no_turning_point: return "NoTurningPoint";
        case Errc::target_unreachable: return "TargetUnreachable";
        case Errc::no_bracket: return "NoBracket";
        case Errc::no_intersection: return "NoIntersection";
        case Errc::above_start_level: return "AboveStartLevel";
        case Errc::unreachable: return "Unreachable";
        case Errc::quadrature_failure: return "QuadratureFailure";
        case Errc::parse_error: return "ParseError";
        case Errc::config_error: return "ConfigError";
    }
    return "UnknownError";
}

}  // namespace brach
