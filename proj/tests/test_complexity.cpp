#include <doctest.h>

#include <cmath>

#include "wds/complexity.hpp"
#include "wds/patterns.hpp"

using namespace wds;

TEST_CASE("orthogonal transform counts") {
  CHECK(ops_ofdm(64) == 384.0);  // 64 * log2(64)
  CHECK(ops_ofdm(1) == 0.0);
  CHECK(ops_ofdm(1024) == 10240.0);
  CHECK_THROWS(ops_ofdm(0));
}

TEST_CASE("compressed transform counts follow the closed form") {
  auto direct = [](int q, double a) {
    double m = q / a;
    return m * std::log2(m);
  };
  for (double a : {0.94, 0.8, 0.7, 0.5}) {
    CHECK(ops_sefdm(64, a) == doctest::Approx(direct(64, a)).epsilon(1e-12));
    double pruned = (64.0 / a) * std::log2(64.0);
    CHECK(ops_sefdm_pruned(64, a) == doctest::Approx(pruned).epsilon(1e-12));
  }
  CHECK(ops_sefdm(64, 1.0) == doctest::Approx(384.0));
  CHECK(ops_sefdm(64, 0.94) == doctest::Approx(414.5875).epsilon(1e-4));
  CHECK(ops_sefdm_pruned(64, 0.94) == doctest::Approx(408.5106).epsilon(1e-4));
  CHECK(ops_sefdm(64, 0.5) == doctest::Approx(896.0));  // 128 * 7
  CHECK(ops_sefdm_pruned(64, 0.5) == doctest::Approx(768.0));  // 128 * 6
  CHECK_THROWS(ops_sefdm(64, 0.0));
  CHECK_THROWS(ops_sefdm(64, 1.5));
}

TEST_CASE("pruning never raises the count") {
  for (const auto& [name, p] : builtin_patterns())
    for (double a : p.alphas) {
      CHECK(ops_sefdm_pruned(64, a) <= ops_sefdm(64, a));
      CHECK(ops_sefdm_pruned(256, a) <= ops_sefdm(256, a));
    }
  // Mild compression stays within a modest overhead of plain OFDM.
  for (double a : pattern_by_name("type-iii").alphas) {
    double ratio = ops_sefdm_pruned(64, a) / ops_ofdm(64);
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 1.15);
  }
}
