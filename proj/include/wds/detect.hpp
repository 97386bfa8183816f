#pragma once

#include <cstdint>
#include <vector>

#include "wds/sefdm.hpp"

namespace wds {

struct DetectorResult {
  CVec hard_symbols;
  std::vector<std::uint8_t> bits;
  long metadata = 0;  // iterations (ID) or visited nodes (SD/ML)
};

struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(double cond)
      : std::runtime_error("zero forcing: correlation matrix is numerically singular"),
        condition(cond) {}
  double condition;
};

struct DivergenceError : std::runtime_error {
  explicit DivergenceError(double rho)
      : std::runtime_error("iterative detection diverged: spectral radius of (C - e) exceeds 1"),
        spectral_radius(rho) {}
  double spectral_radius;
};

struct NodeBudgetError : std::runtime_error {
  explicit NodeBudgetError(DetectorResult partial)
      : std::runtime_error("sphere decoder: search node budget exceeded"),
        best(std::move(partial)) {}
  DetectorResult best;
};

// Nearest constellation point, lowest index on ties.
cxd slice(const Constellation& c, cxd v);

double spectral_radius(const CMat& m);

// Element-wise slicing of the matched-filter statistics.
DetectorResult detect_mf(const CVec& r, const Constellation& c);

// slice(C^-1 R); throws SingularMatrixError when cond(C) > 1e12.
DetectorResult detect_zf(const CMat& corr, const CVec& r, const Constellation& c);

// Hard-decision interference cancellation: S_z = slice(R - (C - e) S_{z-1}),
// S_0 = slice(R). Stops at a fixed point; a run that exhausts max_iter throws
// DivergenceError only when the spectral radius of (C - e) is >= 1.
DetectorResult detect_id(const CMat& corr, const CVec& r, const Constellation& c,
                         int max_iter = 20);

// Exact ML via depth-first tree search with ZF-initialized radius and
// Schnorr-Euchner child ordering.
DetectorResult detect_sd(const CMat& corr, const CVec& r, const Constellation& c,
                         long node_budget = 200'000'000L);

// Exhaustive argmin over all P^N candidates of ||R - C S||^2.
DetectorResult detect_ml(const CMat& corr, const CVec& r, const Constellation& c);

}  // namespace wds
