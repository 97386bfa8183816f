#include "wds/dataset.hpp"

#include <fstream>

namespace wds {

namespace {

constexpr char kMagic[9] = "WDSDATA1";

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

std::vector<int> LabeledDataset::class_counts() const {
  std::vector<int> counts(n_classes(), 0);
  for (const auto& r : records) ++counts[r.label];
  return counts;
}

void LabeledDataset::validate() const {
  int q = sample_len();
  for (const auto& r : records) {
    if (r.samples.size() != q)
      throw std::invalid_argument("LabeledDataset: unequal record lengths");
    if (r.label < 0 || r.label >= n_classes())
      throw std::invalid_argument("LabeledDataset: label out of range");
  }
}

void LabeledDataset::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open dataset file for writing: " + path);
  os.write(kMagic, 8);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(pattern_name.size()));
  os.write(pattern_name.data(), static_cast<std::streamsize>(pattern_name.size()));
  put<std::uint8_t>(os, mode == GenMode::DA ? 0 : 1);
  put<std::uint64_t>(os, seed);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(records.size()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(sample_len()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(alphas.size()));
  for (double a : alphas) put<double>(os, a);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(n_subcarriers));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(rho_num));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(rho_den));
  put<double>(os, sample_rate);
  for (const auto& r : records) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(r.label));
    put<double>(os, r.es_n0_db);
    for (int i = 0; i < r.samples.size(); ++i) {
      put<double>(os, r.samples[i].real());
      put<double>(os, r.samples[i].imag());
    }
  }
}

LabeledDataset LabeledDataset::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open dataset file: " + path);
  char magic[8];
  is.read(magic, 8);
  if (std::string(magic, 8) != kMagic)
    throw std::runtime_error("not a WDS dataset file: " + path);
  LabeledDataset ds;
  auto name_len = get<std::uint32_t>(is);
  ds.pattern_name.resize(name_len);
  is.read(ds.pattern_name.data(), name_len);
  ds.mode = get<std::uint8_t>(is) == 0 ? GenMode::DA : GenMode::DD;
  ds.seed = get<std::uint64_t>(is);
  auto n_records = get<std::uint32_t>(is);
  auto q = get<std::uint32_t>(is);
  auto k = get<std::uint32_t>(is);
  ds.alphas.resize(k);
  for (auto& a : ds.alphas) a = get<double>(is);
  ds.n_subcarriers = static_cast<int>(get<std::uint32_t>(is));
  ds.rho_num = static_cast<int>(get<std::uint32_t>(is));
  ds.rho_den = static_cast<int>(get<std::uint32_t>(is));
  ds.sample_rate = get<double>(is);
  ds.records.resize(n_records);
  for (auto& r : ds.records) {
    r.label = static_cast<int>(get<std::uint32_t>(is));
    r.es_n0_db = get<double>(is);
    r.samples.resize(q);
    for (std::uint32_t i = 0; i < q; ++i) {
      double re = get<double>(is);
      double im = get<double>(is);
      r.samples[i] = cxd(re, im);
    }
  }
  if (!is) throw std::runtime_error("truncated dataset file: " + path);
  return ds;
}

void LabeledDataset::write_manifest(const std::string& csv_path) const {
  std::ofstream os(csv_path);
  if (!os) throw std::runtime_error("cannot open manifest for writing: " + csv_path);
  os << "index,label,alpha,es_n0_db\n";
  for (size_t i = 0; i < records.size(); ++i)
    os << i << "," << records[i].label << "," << alphas[records[i].label] << ","
       << records[i].es_n0_db << "\n";
}

}  // namespace wds
