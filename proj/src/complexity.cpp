#include "wds/complexity.hpp"

#include <cmath>
#include <stdexcept>

namespace wds {

namespace {

void check(int q, double alpha) {
  if (q < 1) throw std::invalid_argument("complexity: Q must be >= 1");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("complexity: alpha out of (0, 1]");
}

}  // namespace

double ops_ofdm(int q) {
  check(q, 1.0);
  return q * std::log2(static_cast<double>(q));
}

double ops_sefdm(int q, double alpha) {
  check(q, alpha);
  double m = q / alpha;
  return m * std::log2(m);
}

double ops_sefdm_pruned(int q, double alpha) {
  check(q, alpha);
  return (q / alpha) * std::log2(static_cast<double>(q));
}

}  // namespace wds
