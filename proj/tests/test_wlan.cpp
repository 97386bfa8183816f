#include <doctest.h>

#include <cstdio>
#include <random>

#include "wds/channel.hpp"
#include "wds/wlan.hpp"

using namespace wds;

namespace {

std::vector<std::uint8_t> random_bits(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(bit(rng));
  return out;
}

WdsFrame make_test_frame(const std::string& pattern, int n_symbols,
                         std::uint64_t seed) {
  WlanConfig cfg = WlanConfig::standard();
  Schedule sched = make_schedule(pattern_by_name(pattern), n_symbols, seed);
  auto bits = random_bits(96 * n_symbols, seed + 1);
  return build_frame(cfg, sched, bits);
}

}  // namespace

TEST_CASE("wlan numerology") {
  WlanConfig cfg = WlanConfig::standard();
  CHECK(cfg.n_occupied() == 52);
  CHECK(cfg.psdu_symbol_len() == 80);
  SefdmConfig tight = cfg.sefdm_for(0.94);
  CHECK(tight.n_samples() == 64);
  CHECK(tight.dft_size() == 68);
  CHECK(cfg.sefdm_for(1.0).dft_size() == 64);
}

TEST_CASE("frame layout") {
  WdsFrame f = make_test_frame("type-iii", 20, 1);
  CHECK(f.preamble_len == 400);
  CHECK(f.samples.size() == 400 + 20 * 80);
  CHECK(f.payload_bits.size() == 1920);

  // Preamble does not leak the schedule.
  WdsFrame g = make_test_frame("type-i", 20, 99);
  CHECK((f.samples.head(400) - g.samples.head(400)).cwiseAbs().maxCoeff() == 0.0);

  WlanConfig cfg = WlanConfig::standard();
  Schedule sched = make_schedule(pattern_by_name("type-iii"), 5, 1);
  CHECK_THROWS(build_frame(cfg, sched, random_bits(96 * 4, 2)));
}

TEST_CASE("legit receiver inverts a noiseless frame") {
  WlanConfig cfg = WlanConfig::standard();
  WdsFrame f = make_test_frame("type-iii", 20, 3);
  auto rx = legit_receive(f.samples, cfg, f.schedule);
  CHECK(ber(f.payload_bits, rx) == 0.0);

  // With the schedule shifted by one class the demodulation alphas are wrong.
  Schedule wrong = f.schedule;
  for (int& c : wrong.class_indices)
    c = (c + 1) % wrong.pattern.n_classes();
  auto bad = legit_receive(f.samples, cfg, wrong);
  CHECK(ber(f.payload_bits, bad) > 0.05);
}

TEST_CASE("alpha one frames look like plain OFDM to everyone") {
  WlanConfig cfg = WlanConfig::standard();
  WdsFrame f = make_test_frame("ofdm", 10, 4);
  auto legit = legit_receive(f.samples, cfg, f.schedule);
  auto eve = eve_scenario1_receive(f.samples, cfg);
  CHECK(ber(f.payload_bits, legit) == 0.0);
  CHECK(legit == eve);
}

TEST_CASE("scenario one fails on compressed symbols even without noise") {
  WlanConfig cfg = WlanConfig::standard();
  // All symbols at the deepest Type-III compression.
  Schedule sched = make_schedule(pattern_by_name("type-iii"), 20, 5);
  for (int& c : sched.class_indices) c = 4;  // alpha = 0.94
  auto bits = random_bits(96 * 20, 6);
  WdsFrame f = build_frame(cfg, sched, bits);
  auto eve = eve_scenario1_receive(f.samples, cfg);
  CHECK(ber(bits, eve) > 0.05);
  // The legitimate side still reads the same frame cleanly.
  CHECK(ber(bits, legit_receive(f.samples, cfg, sched)) == 0.0);
}

TEST_CASE("scenario two with an oracle classifier matches the legit receiver") {
  WlanConfig cfg = WlanConfig::standard();
  WdsFrame f = make_test_frame("type-iii", 15, 7);
  int symbol_idx = 0;
  SymbolClassifier oracle = [&](const CVec&) {
    return f.schedule.class_indices[symbol_idx++];
  };
  Scenario2Result res = eve_scenario2_receive(f.samples, cfg, f.schedule.pattern,
                                              oracle, f.schedule);
  CHECK(ber(f.payload_bits, res.bits) == 0.0);
  CHECK(res.confusion.total() == 15);
  CHECK(res.confusion.accuracy() == doctest::Approx(1.0));
}

TEST_CASE("scenario two confusion matrix scores against the true schedule") {
  WlanConfig cfg = WlanConfig::standard();
  WdsFrame f = make_test_frame("type-iii", 30, 8);
  SymbolClassifier always_first = [](const CVec&) { return 0; };
  Scenario2Result res = eve_scenario2_receive(f.samples, cfg, f.schedule.pattern,
                                              always_first, f.schedule);
  CHECK(res.confusion.total() == 30);
  CHECK(res.confusion.counts.col(0).sum() == 30);
  // Symbols whose true class is 0 still decode; the others mostly do not.
  int n_class0 = 0;
  for (int c : f.schedule.class_indices) n_class0 += (c == 0) ? 1 : 0;
  CHECK(res.confusion.counts(0, 0) == n_class0);
  CHECK(ber(f.payload_bits, res.bits) > 0.02);
}

TEST_CASE("blind synchronization finds a delayed frame") {
  WlanConfig cfg = WlanConfig::standard();
  WdsFrame f = make_test_frame("type-iii", 8, 9);
  CVec padded = CVec::Zero(150 + f.samples.size());
  padded.tail(f.samples.size()) = f.samples;
  RxOptions opts;
  opts.known_timing = false;
  auto rx = legit_receive(padded, cfg, f.schedule, opts);
  CHECK(ber(f.payload_bits, rx) == 0.0);

  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  CVec garbage(2000);
  for (int i = 0; i < 2000; ++i) garbage[i] = cxd(g(rng), g(rng));
  CHECK_THROWS_AS(legit_receive(garbage, cfg, f.schedule, opts), SyncError);
  CHECK_THROWS_AS(legit_receive(CVec::Zero(100), cfg, f.schedule, opts), SyncError);
}

TEST_CASE("receiver survives the impaired channel at high SNR") {
  WlanConfig cfg = WlanConfig::standard();
  WdsFrame f = make_test_frame("type-iii", 10, 11);
  ChannelProfile p = ChannelProfile::awgn_only();
  p.cfo_ppm = 2.0;  // CFO only, no fading
  std::mt19937_64 rng(12);
  CVec y = impair(f.samples, p, NoiseSpec::at(30.0), rng);
  auto rx = legit_receive(y, cfg, f.schedule);
  CHECK(ber(f.payload_bits, rx) < 0.01);
}

TEST_CASE("ber helper") {
  CHECK(ber({}, {}) == 0.0);
  CHECK(ber({0, 1, 1, 0}, {0, 1, 1, 0}) == 0.0);
  CHECK(ber({0, 1, 1, 0}, {1, 1, 1, 1}) == doctest::Approx(0.5));
  CHECK_THROWS(ber({0, 1}, {0}));
}

TEST_CASE("iq file round trip") {
  CVec x(5);
  x << cxd(1, -2), cxd(0.5, 0.25), cxd(-3, 0), cxd(0, 4), cxd(1e-9, -1e9);
  save_iq("iq_rt.bin", x);
  CVec back = load_iq("iq_rt.bin");
  std::remove("iq_rt.bin");
  REQUIRE(back.size() == 5);
  CHECK((back - x).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(load_iq("no_such_iq.bin"));
}
