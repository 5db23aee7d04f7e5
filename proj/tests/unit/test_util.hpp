// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "recip/latcore.hpp"

namespace recip::test {

inline std::string data_path(const std::string& name) { return std::string(RECIP_TEST_DATA) + "/" + name; }

inline LatticeVector lv(std::initializer_list<long> xs) {
  LatticeVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline JumpModel pm1() { return JumpModel::from_integer_columns({{-1}, {1}}); }
inline JumpModel m345() { return JumpModel::from_integer_columns({{3}, {4}, {5}}); }

}  // namespace recip::test
