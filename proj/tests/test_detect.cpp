#include <doctest.h>

#include <random>

#include "wds/channel.hpp"
#include "wds/detect.hpp"
#include "wds/patterns.hpp"

using namespace wds;

namespace {

int symbol_errors(const CVec& a, const CVec& b) {
  int e = 0;
  for (int i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-9) ++e;
  return e;
}

}  // namespace

TEST_CASE("slice picks the nearest point") {
  const Constellation& q = Constellation::qpsk();
  const double a = 1.0 / std::sqrt(2.0);
  CHECK(slice(q, cxd(0.9, 0.1)) == cxd(a, a));
  CHECK(slice(q, cxd(-2.0, -0.3)) == cxd(-a, -a));
  CHECK(slice(q, cxd(0.1, -3.0)) == cxd(a, -a));
}

TEST_CASE("matched filter is exact when orthogonal") {
  SefdmConfig cfg(16, {2, 1}, 1.0);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    CVec s = random_qpsk(16, rng);
    CVec r = demodulate(cfg, modulate(cfg, s));
    DetectorResult res = detect_mf(r, Constellation::qpsk());
    CHECK(symbol_errors(res.hard_symbols, s) == 0);
  }
}

TEST_CASE("matched filter suffers from ICI alone at alpha below one") {
  SefdmConfig cfg(16, {2, 1}, 0.80);
  CMat c = correlation_matrix(cfg);
  std::mt19937_64 rng(2);
  int err = 0, total = 0;
  for (int t = 0; t < 200; ++t) {
    CVec s = random_qpsk(16, rng);
    CVec r = c * s;  // noiseless matched-filter statistics
    err += symbol_errors(detect_mf(r, Constellation::qpsk()).hard_symbols, s);
    total += 16;
  }
  // Self-interference alone causes errors, but not a majority of them.
  CHECK(err > 0);
  CHECK(err < total / 4);
}

TEST_CASE("zero forcing inverts the noiseless correlation exactly") {
  SefdmConfig cfg(12, {2, 1}, 0.75);
  CMat c = correlation_matrix(cfg);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    CVec s = random_qpsk(12, rng);
    DetectorResult res = detect_zf(c, c * s, Constellation::qpsk());
    CHECK(symbol_errors(res.hard_symbols, s) == 0);
  }
}

TEST_CASE("zero forcing reduces to MF at alpha one") {
  SefdmConfig cfg(8, {2, 1}, 1.0);
  CMat c = correlation_matrix(cfg);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.4);
  for (int t = 0; t < 100; ++t) {
    CVec r(8);
    for (int i = 0; i < 8; ++i) r[i] = cxd(g(rng), g(rng));
    CVec zf = detect_zf(c, r, Constellation::qpsk()).hard_symbols;
    CVec mf = detect_mf(r, Constellation::qpsk()).hard_symbols;
    CHECK(symbol_errors(zf, mf) == 0);
  }
}

TEST_CASE("correlation conditioning degrades with compression") {
  auto cond = [](const CMat& m) {
    Eigen::JacobiSVD<CMat> svd(m);
    return svd.singularValues()(0) / svd.singularValues()(m.cols() - 1);
  };
  SefdmConfig loose(64, {2, 1}, 0.9), tight(64, {2, 1}, 0.7);
  double c_loose = cond(correlation_matrix(loose));
  double c_tight = cond(correlation_matrix(tight));
  CHECK(c_tight > 100.0 * c_loose);
  if (c_tight > 1e12) {
    std::mt19937_64 rng(5);
    CVec s = random_qpsk(64, rng);
    CHECK_THROWS_AS(detect_zf(correlation_matrix(tight), correlation_matrix(tight) * s,
                              Constellation::qpsk()),
                    SingularMatrixError);
  }
}

TEST_CASE("iterative cancellation equals MF at alpha one") {
  SefdmConfig cfg(16, {2, 1}, 1.0);
  CMat c = correlation_matrix(cfg);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 0.5);
  for (int t = 0; t < 100; ++t) {
    CVec r(16);
    for (int i = 0; i < 16; ++i) r[i] = cxd(g(rng), g(rng));
    DetectorResult id = detect_id(c, r, Constellation::qpsk());
    DetectorResult mf = detect_mf(r, Constellation::qpsk());
    CHECK(symbol_errors(id.hard_symbols, mf.hard_symbols) == 0);
    CHECK(id.metadata == 1);  // fixed point immediately, ICI matrix is zero
  }
}

TEST_CASE("iterative cancellation recovers the mild-compression frame layout") {
  SefdmConfig cfg(52, {16, 13}, 0.94);
  CMat c = correlation_matrix(cfg);
  CHECK(spectral_radius(c - CMat::Identity(52, 52)) < 1.0);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    CVec s = random_qpsk(52, rng);
    DetectorResult res = detect_id(c, c * s, Constellation::qpsk());
    CHECK(symbol_errors(res.hard_symbols, s) == 0);
    CHECK(res.metadata <= 20);
  }
}

TEST_CASE("iterative cancellation reports divergence under deep compression") {
  SefdmConfig cfg(52, {16, 13}, 0.7);
  CMat c = correlation_matrix(cfg);
  CHECK(spectral_radius(c - CMat::Identity(52, 52)) >= 1.0);
  std::mt19937_64 rng(8);
  int failures = 0;
  for (int t = 0; t < 20; ++t) {
    CVec s = random_qpsk(52, rng);
    try {
      DetectorResult res = detect_id(c, c * s, Constellation::qpsk());
      if (symbol_errors(res.hard_symbols, s) > 0) ++failures;
    } catch (const DivergenceError& e) {
      CHECK(e.spectral_radius >= 1.0);
      ++failures;
    }
  }
  // The true symbol vector is always a fixed point of the hard-decision
  // update, so a few runs still land on it; most cannot.
  CHECK(failures >= 10);
  CHECK_THROWS(detect_id(c, CVec::Zero(52), Constellation::qpsk(), 0));
}

TEST_CASE("sphere decoder is exact on noiseless input") {
  SefdmConfig cfg(8, {2, 1}, 0.8);
  CMat c = correlation_matrix(cfg);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    CVec s = random_qpsk(8, rng);
    DetectorResult res = detect_sd(c, c * s, Constellation::qpsk());
    CHECK(symbol_errors(res.hard_symbols, s) == 0);
  }
}

TEST_CASE("sphere decoder matches exhaustive ML on noisy input") {
  SefdmConfig cfg(8, {2, 1}, 0.8);
  CMat c = correlation_matrix(cfg);
  CMat f = subcarrier_matrix(cfg, cfg.effective_bcf());
  std::mt19937_64 rng(10);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    CVec s = random_qpsk(8, rng);
    CVec y = awgn(modulate(cfg, s), NoiseSpec::at(10.0), rng);
    CVec r = f.adjoint() * y;
    CVec sd = detect_sd(c, r, Constellation::qpsk()).hard_symbols;
    CVec ml = detect_ml(c, r, Constellation::qpsk()).hard_symbols;
    CHECK(symbol_errors(sd, ml) == 0);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("ML floor sits below the matched filter at deep compression") {
  SefdmConfig cfg(8, {2, 1}, 0.7);
  CMat c = correlation_matrix(cfg);
  std::mt19937_64 rng(11);
  int mf_err = 0, ml_err = 0;
  for (int t = 0; t < 300; ++t) {
    CVec s = random_qpsk(8, rng);
    CVec r = c * s;
    mf_err += symbol_errors(detect_mf(r, Constellation::qpsk()).hard_symbols, s);
    ml_err += symbol_errors(detect_ml(c, r, Constellation::qpsk()).hard_symbols, s);
  }
  CHECK(ml_err == 0);
  CHECK(mf_err > 0);
}

TEST_CASE("ML guards and degenerate sizes") {
  const Constellation& q = Constellation::qpsk();
  // N = 1 reduces to plain slicing.
  CMat c1 = CMat::Identity(1, 1);
  CVec r1(1);
  r1[0] = cxd(-0.2, 0.9);
  CHECK(detect_ml(c1, r1, q).hard_symbols[0] == slice(q, r1[0]));
  // 2^(2*13) > 2^24 candidates must be refused.
  SefdmConfig big(13, {2, 1}, 0.8);
  CMat cb = correlation_matrix(big);
  CHECK_THROWS(detect_ml(cb, CVec::Zero(13), q));
}

TEST_CASE("sphere decoder node budget surfaces the best partial answer") {
  SefdmConfig cfg(8, {2, 1}, 0.75);
  CMat c = correlation_matrix(cfg);
  std::mt19937_64 rng(12);
  CVec s = random_qpsk(8, rng);
  try {
    detect_sd(c, c * s, Constellation::qpsk(), 2);
    FAIL("expected NodeBudgetError");
  } catch (const NodeBudgetError& e) {
    CHECK(e.best.hard_symbols.size() == 8);
  }
  CHECK_THROWS(detect_sd(CMat::Identity(40, 40), CVec::Zero(40), Constellation::qpsk()));
}
