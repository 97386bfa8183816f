#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wds/common.hpp"

namespace wds {

enum class GenMode { DA, DD };

struct DatasetRecord {
  CVec samples;
  int label = 0;
  double es_n0_db = 0.0;
};

// Labeled symbol corpus shared by the pattern generators and the classifier.
struct LabeledDataset {
  std::vector<DatasetRecord> records;
  std::string pattern_name;
  std::vector<double> alphas;  // class index -> nominal bcf
  GenMode mode = GenMode::DD;
  std::uint64_t seed = 0;
  int n_subcarriers = 0;
  int rho_num = 1, rho_den = 1;
  double sample_rate = 20e6;

  int n_classes() const { return static_cast<int>(alphas.size()); }
  int sample_len() const { return records.empty() ? 0 : static_cast<int>(records.front().samples.size()); }
  std::vector<int> class_counts() const;
  void validate() const;

  // Binary container (magic WDSDATA1, little-endian) plus a CSV manifest.
  void save(const std::string& path) const;
  static LabeledDataset load(const std::string& path);
  void write_manifest(const std::string& csv_path) const;
};

}  // namespace wds
