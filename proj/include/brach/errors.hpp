#pragma once

#include <stdexcept>
#include <string>

namespace brach {

enum class Errc {
    domain_error,
    non_positive_radius,
    non_positive_exponent,
    start_level_singularity,
    symmetry_mismatch,
    singular_start,
    no_turning_point,
    target_unreachable,
    no_bracket,
    no_intersection,
    above_start_level,
    unreachable,
    quadrature_failure,
    parse_error,
    config_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace brach
