#pragma once

#include <string>
#include <string_view>

#include "copekit/certifier.hpp"

namespace copekit {

inline constexpr std::string_view kFormatVersion = "1";

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
/// Rationals are strings "p" or "p/q"; floats are numbers printed losslessly.
std::string emit_cope(const CopeMatrix& c);
std::string emit_model(const ModelFactorization& m);
/// Certificates embed the matrix so that parse_certificate can re-verify.
std::string emit_certificate(const Certificate& cert);

/// Parses and validates. Throws ParseError naming the offending field for
/// malformed JSON, shape mismatches and stochasticity violations.
CopeMatrix parse_cope(std::string_view text);
/// Same without the stochasticity checks (shapes are still enforced).
CopeMatrix parse_cope_unchecked(std::string_view text);
ModelFactorization parse_model(std::string_view text);
/// Throws ParseError when the embedded evidence does not re-verify.
Certificate parse_certificate(std::string_view text);

}  // namespace copekit
