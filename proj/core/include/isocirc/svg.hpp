#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "isocirc/certarith.hpp"
#include "isocirc/circular.hpp"
#include "isocirc/pingpong.hpp"

namespace isocirc {

struct SvgOptions {
  bool domains = false;     // one filled arc per attracting domain
  bool intervals = false;   // the J_i and K_j^± arcs
  std::size_t orbit = 0;    // first N orbit points of x_{e_1} in enumeration order
  std::optional<CoverDatum> cover;  // draw the orbit on the degree-d cover circle
  // Extra points (angle in [0, 1), label), e.g. a dynamical realization.
  std::vector<std::pair<ExactRational, std::string>> points;
};

// 1024x1024 picture of the boundary circle. Byte-stable for fixed inputs.
std::string export_svg(const Configuration& config, const SvgOptions& options = {});

}  // namespace isocirc
