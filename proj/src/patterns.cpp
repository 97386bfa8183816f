#include "wds/patterns.hpp"

namespace wds {

void BcfPattern::validate() const {
  if (alphas.empty()) throw std::invalid_argument("BcfPattern: empty alpha list");
  if (alphas.front() != 1.0)
    throw std::invalid_argument("BcfPattern: alphas must start at 1.0");
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0) || alphas[i] > 1.0)
      throw std::invalid_argument("BcfPattern: alpha out of (0, 1]");
    if (i > 0 && alphas[i] >= alphas[i - 1])
      throw std::invalid_argument("BcfPattern: alphas must be strictly decreasing");
  }
}

const std::map<std::string, BcfPattern>& builtin_patterns() {
  static const std::map<std::string, BcfPattern> patterns = {
      {"ofdm", {"ofdm", {1.0}, 0.0}},
      {"type-i", {"type-i", {1.0, 0.9, 0.8, 0.7}, 0.1}},
      {"type-ii", {"type-ii", {1.0, 0.95, 0.90, 0.85, 0.80, 0.75, 0.70}, 0.05}},
      {"type-iii", {"type-iii", {1.0, 0.985, 0.97, 0.955, 0.94}, 0.015}},
  };
  return patterns;
}

const BcfPattern& pattern_by_name(const std::string& name) {
  auto it = builtin_patterns().find(name);
  if (it == builtin_patterns().end())
    throw std::invalid_argument("unknown BCF pattern: " + name);
  return it->second;
}

Schedule make_schedule(const BcfPattern& p, int n_symbols, std::uint64_t seed) {
  p.validate();
  if (n_symbols < 0) throw std::invalid_argument("make_schedule: negative length");
  Schedule s;
  s.pattern = p;
  s.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, p.n_classes() - 1);
  s.class_indices.resize(n_symbols);
  for (int& c : s.class_indices) c = pick(rng);
  return s;
}

CVec random_qpsk(int n, std::mt19937_64& rng) {
  const Constellation& c = Constellation::qpsk();
  std::uniform_int_distribution<int> pick(0, c.size() - 1);
  CVec s(n);
  for (int i = 0; i < n; ++i) s[i] = c.point(pick(rng));
  return s;
}

namespace {

CVec source_symbols(GenMode mode, std::uint64_t master, int record_index,
                    int label, int n) {
  std::uint64_t seed = (mode == GenMode::DD)
                           ? derive_seed(master, record_index, 1)
                           : derive_seed(master, label, 0xDA);
  std::mt19937_64 rng(seed);
  return random_qpsk(n, rng);
}

LabeledDataset generate(GenMode mode, const BcfPattern& p, int per_class,
                        const DatasetGenConfig& cfg, const ChannelProfile& profile,
                        std::uint64_t seed) {
  p.validate();
  if (per_class < 1) throw std::invalid_argument("dataset generation: per_class must be >= 1");
  LabeledDataset ds;
  ds.pattern_name = p.name;
  ds.alphas = p.alphas;
  ds.mode = mode;
  ds.seed = seed;
  ds.n_subcarriers = cfg.n_subcarriers;
  ds.rho_num = cfg.rho.num;
  ds.rho_den = cfg.rho.den;
  ds.sample_rate = cfg.sample_rate;
  ds.records.resize(static_cast<size_t>(p.n_classes()) * per_class);
  for (int c = 0; c < p.n_classes(); ++c) {
    SefdmConfig scfg(cfg.n_subcarriers, cfg.rho, p.alphas[c], cfg.sample_rate);
    for (int i = 0; i < per_class; ++i) {
      int idx = c * per_class + i;
      CVec s = source_symbols(mode, seed, idx, c, cfg.n_subcarriers);
      CVec x = modulate(scfg, s);
      std::mt19937_64 chan_rng(derive_seed(seed, idx, 2));
      std::uniform_int_distribution<size_t> pick(0, cfg.es_n0_grid_db.size() - 1);
      double es_n0 = cfg.es_n0_grid_db[pick(chan_rng)];
      DatasetRecord rec;
      rec.label = c;
      rec.es_n0_db = es_n0;
      rec.samples = impair(x, profile, NoiseSpec::at(es_n0), chan_rng);
      ds.records[idx] = std::move(rec);
    }
  }
  return ds;
}

}  // namespace

CVec record_source_symbols(const LabeledDataset& ds, int record_index) {
  return source_symbols(ds.mode, ds.seed, record_index,
                        ds.records[record_index].label, ds.n_subcarriers);
}

LabeledDataset generate_dd(const BcfPattern& p, int per_class,
                           const DatasetGenConfig& cfg, const ChannelProfile& profile,
                           std::uint64_t seed) {
  return generate(GenMode::DD, p, per_class, cfg, profile, seed);
}

LabeledDataset generate_da(const BcfPattern& p, int per_class,
                           const DatasetGenConfig& cfg, const ChannelProfile& profile,
                           std::uint64_t seed) {
  return generate(GenMode::DA, p, per_class, cfg, profile, seed);
}

}  // namespace wds
