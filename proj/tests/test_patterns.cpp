#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <map>

#include "wds/classify.hpp"
#include "wds/detect.hpp"
#include "wds/patterns.hpp"

using namespace wds;

TEST_CASE("builtin pattern tables") {
  const auto& all = builtin_patterns();
  REQUIRE(all.count("ofdm") == 1);
  REQUIRE(all.count("type-i") == 1);
  REQUIRE(all.count("type-ii") == 1);
  REQUIRE(all.count("type-iii") == 1);

  CHECK(pattern_by_name("ofdm").alphas == std::vector<double>{1.0});
  CHECK(pattern_by_name("type-i").alphas == std::vector<double>{1.0, 0.9, 0.8, 0.7});
  CHECK(pattern_by_name("type-i").delta == 0.1);
  CHECK(pattern_by_name("type-ii").alphas ==
        std::vector<double>{1.0, 0.95, 0.90, 0.85, 0.80, 0.75, 0.70});
  CHECK(pattern_by_name("type-ii").delta == 0.05);
  CHECK(pattern_by_name("type-iii").alphas ==
        std::vector<double>{1.0, 0.985, 0.97, 0.955, 0.94});
  CHECK(pattern_by_name("type-iii").delta == 0.015);
  CHECK(pattern_by_name("type-iii").n_classes() == 5);
  CHECK_THROWS(pattern_by_name("type-iv"));

  for (const auto& [name, p] : all) p.validate();
}

TEST_CASE("pattern validation") {
  BcfPattern p{"bad", {}, 0.1};
  CHECK_THROWS(p.validate());
  p.alphas = {0.9, 0.8};
  CHECK_THROWS(p.validate());  // must start at 1.0
  p.alphas = {1.0, 0.8, 0.8};
  CHECK_THROWS(p.validate());  // strictly decreasing
  p.alphas = {1.0, -0.1};
  CHECK_THROWS(p.validate());
  p.alphas = {1.0, 0.5};
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("schedule draws are uniform and reproducible") {
  const BcfPattern& p = pattern_by_name("type-iii");
  Schedule empty = make_schedule(p, 0, 1);
  CHECK(empty.size() == 0);
  CHECK_THROWS(make_schedule(p, -1, 1));

  Schedule a = make_schedule(p, 10000, 99);
  Schedule b = make_schedule(p, 10000, 99);
  CHECK(a.class_indices == b.class_indices);
  Schedule c = make_schedule(p, 10000, 100);
  CHECK(a.class_indices != c.class_indices);

  std::map<int, int> counts;
  for (int v : a.class_indices) ++counts[v];
  for (int k = 0; k < p.n_classes(); ++k) {
    double freq = counts[k] / 10000.0;
    CHECK(freq > 0.2 - 0.02);
    CHECK(freq < 0.2 + 0.02);
  }
  for (int i = 0; i < a.size(); ++i)
    CHECK(a.alpha(i) == p.alphas[a.class_indices[i]]);

  Schedule single = make_schedule(pattern_by_name("ofdm"), 50, 5);
  for (int v : single.class_indices) CHECK(v == 0);
}

TEST_CASE("dataset generation shape and counts") {
  const BcfPattern& p = pattern_by_name("type-i");
  DatasetGenConfig cfg;
  cfg.n_subcarriers = 32;
  cfg.rho = {2, 1};
  LabeledDataset ds = generate_dd(p, 3, cfg, ChannelProfile::awgn_only(), 7);
  CHECK(ds.records.size() == 12);
  CHECK(ds.n_classes() == 4);
  CHECK(ds.sample_len() == 64);
  CHECK(ds.mode == GenMode::DD);
  auto counts = ds.class_counts();
  for (int c : counts) CHECK(c == 3);
  ds.validate();
  CHECK_THROWS(generate_dd(p, 0, cfg, ChannelProfile::awgn_only(), 7));
}

TEST_CASE("DA reuses one source symbol vector per class") {
  const BcfPattern& p = pattern_by_name("type-i");
  DatasetGenConfig cfg;
  cfg.n_subcarriers = 16;
  cfg.rho = {2, 1};
  cfg.es_n0_grid_db = {std::numeric_limits<double>::infinity()};
  LabeledDataset da = generate_da(p, 4, cfg, ChannelProfile::awgn_only(), 13);
  // Noiseless AWGN-only channel: every record of a class is the same block.
  for (int c = 0; c < 4; ++c) {
    const CVec& first = da.records[c * 4].samples;
    for (int i = 1; i < 4; ++i)
      CHECK((da.records[c * 4 + i].samples - first).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((record_source_symbols(da, 0) - record_source_symbols(da, 1))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  LabeledDataset dd = generate_dd(p, 4, cfg, ChannelProfile::awgn_only(), 13);
  CHECK((dd.records[0].samples - dd.records[1].samples).cwiseAbs().maxCoeff() > 0.0);
  CHECK((record_source_symbols(dd, 0) - record_source_symbols(dd, 1))
            .cwiseAbs()
            .maxCoeff() > 0.0);
}

TEST_CASE("DD records demodulate back to their recorded source symbols") {
  const BcfPattern& p = pattern_by_name("type-iii");
  DatasetGenConfig cfg;
  cfg.n_subcarriers = 52;
  cfg.rho = {16, 13};
  cfg.es_n0_grid_db = {std::numeric_limits<double>::infinity()};
  LabeledDataset ds = generate_dd(p, 2, cfg, ChannelProfile::awgn_only(), 21);
  for (size_t i = 0; i < ds.records.size(); ++i) {
    const auto& rec = ds.records[i];
    SefdmConfig scfg(52, {16, 13}, ds.alphas[rec.label]);
    CVec r = demodulate(scfg, rec.samples);
    DetectorResult res = detect_id(correlation_matrix(scfg), r, Constellation::qpsk());
    CVec s = record_source_symbols(ds, static_cast<int>(i));
    CHECK((res.hard_symbols - s).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("class-conditional features separate compressed from orthogonal") {
  const BcfPattern p{"pair", {1.0, 0.7}, 0.3};
  DatasetGenConfig cfg;
  cfg.n_subcarriers = 64;
  cfg.rho = {8, 1};
  cfg.es_n0_grid_db = {30.0};
  LabeledDataset ds = generate_dd(p, 40, cfg, ChannelProfile::awgn_only(), 33);
  WaveletBank bank = WaveletBank::make(ds.sample_len(), 16);
  RVec mean0 = RVec::Zero(32), mean1 = RVec::Zero(32);
  for (const auto& rec : ds.records) {
    RVec f = extract_features(rec.samples, bank);
    (rec.label == 0 ? mean0 : mean1) += f;
  }
  mean0 /= 40.0;
  mean1 /= 40.0;
  CHECK((mean0 - mean1).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("dataset container round trip") {
  const BcfPattern& p = pattern_by_name("type-i");
  DatasetGenConfig cfg;
  cfg.n_subcarriers = 16;
  cfg.rho = {2, 1};
  LabeledDataset ds = generate_dd(p, 2, cfg, ChannelProfile::indoor_default(), 55);
  ds.save("ds_rt.bin");
  LabeledDataset back = LabeledDataset::load("ds_rt.bin");
  std::remove("ds_rt.bin");
  CHECK(back.pattern_name == ds.pattern_name);
  CHECK(back.alphas == ds.alphas);
  CHECK(back.mode == ds.mode);
  CHECK(back.seed == ds.seed);
  CHECK(back.n_subcarriers == 16);
  CHECK(back.rho_num == 2);
  CHECK(back.rho_den == 1);
  REQUIRE(back.records.size() == ds.records.size());
  for (size_t i = 0; i < ds.records.size(); ++i) {
    CHECK(back.records[i].label == ds.records[i].label);
    CHECK(back.records[i].es_n0_db == ds.records[i].es_n0_db);
    CHECK((back.records[i].samples - ds.records[i].samples).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS(LabeledDataset::load("no_such_ds.bin"));

  ds.write_manifest("ds_rt.csv");
  std::ifstream is("ds_rt.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "index,label,alpha,es_n0_db");
  int lines = 0;
  std::string line;
  while (std::getline(is, line)) ++lines;
  is.close();
  std::remove("ds_rt.csv");
  CHECK(lines == static_cast<int>(ds.records.size()));
}
