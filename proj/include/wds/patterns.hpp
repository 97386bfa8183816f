#pragma once

#include <map>
#include <string>
#include <vector>

#include "wds/channel.hpp"
#include "wds/dataset.hpp"
#include "wds/sefdm.hpp"

namespace wds {

struct BcfPattern {
  std::string name;
  std::vector<double> alphas;  // strictly decreasing from 1.0
  double delta = 0.0;          // nominal BCF offset

  int n_classes() const { return static_cast<int>(alphas.size()); }
  void validate() const;
};

// Type-I (delta 0.1), Type-II (delta 0.05) and Type-III (delta 0.015) sets,
// plus a single-class "ofdm" baseline.
const std::map<std::string, BcfPattern>& builtin_patterns();
const BcfPattern& pattern_by_name(const std::string& name);

// Per-symbol class sequence, uniform i.i.d. draws, reproducible from seed.
struct Schedule {
  std::vector<int> class_indices;
  BcfPattern pattern;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(class_indices.size()); }
  double alpha(int i) const { return pattern.alphas[class_indices[i]]; }
};

Schedule make_schedule(const BcfPattern& p, int n_symbols, std::uint64_t seed);

struct DatasetGenConfig {
  int n_subcarriers = 256;
  Rational rho{8, 1};
  double sample_rate = 20e6;
  std::vector<double> es_n0_grid_db = {-20, -10, 0, 10, 20, 30, 40, 50};
};

// Reconstructs the QPSK source symbols of a record (DD: per-record draw,
// DA: per-class draw shared by every record of the class).
CVec record_source_symbols(const LabeledDataset& ds, int record_index);

// Data diversity: fresh random source symbols per record, independent
// channel realization each.
LabeledDataset generate_dd(const BcfPattern& p, int per_class,
                           const DatasetGenConfig& cfg, const ChannelProfile& profile,
                           std::uint64_t seed);

// Data augmentation: one fixed source symbol per class expanded through
// independent channels.
LabeledDataset generate_da(const BcfPattern& p, int per_class,
                           const DatasetGenConfig& cfg, const ChannelProfile& profile,
                           std::uint64_t seed);

// Random QPSK symbol vector from a seeded stream.
CVec random_qpsk(int n, std::mt19937_64& rng);

}  // namespace wds
