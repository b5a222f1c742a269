#pragma once

#include <map>
#include <memory>
#include <string>

#include "isocirc/circular.hpp"
#include "isocirc/cover.hpp"
#include "isocirc/pingpong.hpp"

namespace fixtures {

// Built configurations are shared across test cases; each build certifies the whole suite.
inline std::shared_ptr<const isocirc::Configuration> config(const std::string& spec) {
  static std::map<std::string, std::shared_ptr<const isocirc::Configuration>> cache;
  auto& slot = cache[spec];
  if (!slot) slot = std::make_shared<const isocirc::Configuration>(isocirc::Configuration::build(isocirc::GroupSpec::parse(spec)));
  return slot;
}

inline isocirc::CoverDatum datum(const std::string& spec, long d) {
  const auto s = isocirc::GroupSpec::parse(spec);
  auto c = isocirc::cover_datum(s, (d - 1) / s.torsion_product());
  if (!c || c->d != d) throw std::invalid_argument("fixture: invalid degree");
  return *c;
}

inline isocirc::OrderHandle order(const std::string& spec, long d) { return isocirc::OrderHandle(config(spec), datum(spec, d)); }

}  // namespace fixtures
