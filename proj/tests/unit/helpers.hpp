#pragma once

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "drsub/forest.hpp"
#include "drsub/io.hpp"

namespace testing {

inline drsub::io::InstanceFile fixture(const std::string& name) {
  return drsub::io::load_instance(std::string(DRSUB_TEST_DATA) + "/" + name);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <class F>
drsub::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const drsub::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return drsub::ErrorCode::InvalidArgument;
}

}  // namespace testing
