#include <doctest.h>

#include <cmath>
#include <random>

#include "wds/channel.hpp"

using namespace wds;

TEST_CASE("default profile constants") {
  ChannelProfile p = ChannelProfile::indoor_default();
  CHECK(p.cfo_hz() == doctest::Approx(4824.0));
  auto g = p.linear_tap_gains();
  double total = 0.0;
  for (double v : g) total += v;
  CHECK(total == doctest::Approx(1.0));
  CHECK(g[0] > g[1]);
  CHECK(g[1] > g[2]);
  auto off = p.tap_sample_offsets();
  REQUIRE(off.size() == 3);
  CHECK(off[0] == 0);
  CHECK(off[1] == 180);
  CHECK(off[2] == 340);
}

TEST_CASE("profile validation") {
  ChannelProfile p;
  p.tap_delays_s = {1e-6};
  p.tap_powers_db = {0.0};
  CHECK_THROWS(p.validate());  // first tap must be at delay zero
  p = ChannelProfile{};
  p.tap_powers_db.pop_back();
  CHECK_THROWS(p.validate());
  p = ChannelProfile{};
  p.k_factor = -1.0;
  CHECK_THROWS(p.validate());
}

TEST_CASE("awgn noiseless passthrough and calibration") {
  std::mt19937_64 rng(1);
  CVec x = CVec::Constant(64, cxd(0.6, -0.8));
  CVec y = awgn(x, NoiseSpec::noiseless(), rng);
  CHECK((y - x).cwiseAbs().maxCoeff() == 0.0);

  // At 0 dB the added noise power should match the measured signal power.
  CVec big = CVec::Constant(200000, cxd(1.0, 0.0));
  CVec noisy = awgn(big, NoiseSpec::at(0.0), rng);
  double np = (noisy - big).squaredNorm() / big.size();
  CHECK(np == doctest::Approx(1.0).epsilon(0.03));

  std::mt19937_64 a(42), b(42);
  CVec ya = awgn(big.head(100).eval(), NoiseSpec::at(10.0), a);
  CVec yb = awgn(big.head(100).eval(), NoiseSpec::at(10.0), b);
  CHECK((ya - yb).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cfo rotation") {
  CVec x = CVec::Constant(32, cxd(1.0, 0.0));
  CVec y = apply_cfo(x, 0.0, 20e6);
  CHECK((y - x).cwiseAbs().maxCoeff() == 0.0);

  // A shift equal to the sample rate winds an integer number of turns.
  CVec z = apply_cfo(x, 20e6, 20e6);
  CHECK((z - x).cwiseAbs().maxCoeff() < 1e-6);

  CVec w = apply_cfo(x, 5e6, 20e6);  // quarter turn per sample
  CHECK(std::abs(w[1] - cxd(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(w[2] - cxd(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("pure LOS single tap is a unit rotation") {
  ChannelProfile p;
  p.tap_delays_s = {0.0};
  p.tap_powers_db = {0.0};
  p.k_factor = std::numeric_limits<double>::infinity();
  p.max_doppler_hz = 0.0;
  FadingChannel ch(p, 7);
  CHECK(ch.n_taps() == 1);
  cxd h = ch.tap_gain(0, 0.0);
  CHECK(std::abs(h) == doctest::Approx(1.0));
  // No Doppler: the gain is constant in time.
  CHECK(std::abs(ch.tap_gain(0, 1.0) - h) < 1e-12);

  CVec x(4);
  x << cxd(1, 0), cxd(0, 1), cxd(-1, 0), cxd(0, -1);
  CVec y = ch.apply(x);
  CHECK((y - h * x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tap process varies slowly at 4 Hz Doppler") {
  ChannelProfile p = ChannelProfile::indoor_default();
  FadingChannel ch(p, 3);
  cxd h0 = ch.tap_gain(1, 0.0);
  // One symbol (4 us) apart the gain barely moves; a quarter second later
  // the 4 Hz process has decorrelated visibly.
  CHECK(std::abs(ch.tap_gain(1, 4e-6) - h0) < 1e-3);
  double drift = std::abs(ch.tap_gain(1, 0.25) - h0);
  CHECK(drift > 1e-2);
}

TEST_CASE("short blocks skip echoes beyond their length") {
  ChannelProfile p = ChannelProfile::indoor_default();
  FadingChannel ch(p, 5);
  CVec x = CVec::Constant(64, cxd(1.0, 0.0));
  CVec y = ch.apply(x);
  // Only the direct tap fits in 64 samples, so the output is a scaled copy.
  cxd h = ch.tap_gain(0, 0.0);
  CHECK((y - h * x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS(ch.apply(CVec()));
}

TEST_CASE("impair composition identities") {
  ChannelProfile p = ChannelProfile::awgn_only();
  CHECK(p.cfo_hz() == 0.0);
  std::mt19937_64 rng(9);
  CVec x = CVec::Constant(16, cxd(0.5, 0.5));
  CVec y = impair(x, p, NoiseSpec::noiseless(), rng);
  CHECK((y - x).cwiseAbs().maxCoeff() == 0.0);

  // With fading enabled the same seed gives the same realization.
  ChannelProfile f = ChannelProfile::indoor_default();
  std::mt19937_64 r1(11), r2(11);
  CVec y1 = impair(x, f, NoiseSpec::at(20.0), r1);
  CVec y2 = impair(x, f, NoiseSpec::at(20.0), r2);
  CHECK((y1 - y2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((y1 - x).cwiseAbs().maxCoeff() > 0.0);
}
