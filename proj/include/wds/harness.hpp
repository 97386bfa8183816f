#pragma once

#include <map>
#include <string>
#include <vector>

#include "wds/channel.hpp"
#include "wds/classify.hpp"
#include "wds/patterns.hpp"

namespace wds {

extern const char* kVersion;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value experiment description. '#' starts a comment; whitespace
// around keys and values is ignored.
struct ExperimentConfig {
  std::string kind;  // ber | classify | mapping-ber | complexity | gen-dataset
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::map<std::string, std::string> kv;

  static ExperimentConfig from_file(const std::string& path, const std::string& kind);
  static ExperimentConfig from_string(const std::string& text, const std::string& kind);

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string str(const std::string& key, const std::string& def) const;
  std::string require(const std::string& key) const;
  long integer(const std::string& key, long def) const;
  double real(const std::string& key, double def) const;
  bool flag(const std::string& key, bool def) const;
  Rational rational(const std::string& key, Rational def) const;
  std::vector<double> real_list(const std::string& key, std::vector<double> def) const;

  ChannelProfile channel_profile() const;  // channel = awgn (default) | fading
};

// Rows of numeric cells under named columns, with ordered metadata echoed
// into every output as '#' comment lines. Identical content writes identical
// bytes; wall time never enters a table.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_metadata(const ExperimentConfig& cfg);
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

// Closed-form QPSK bit error rate over AWGN when Es/N0 is measured on the
// time-domain samples of a rho-times oversampled multicarrier block.
double qpsk_awgn_ber(double es_n0_db, double rho = 1.0);

ResultTable run_ber_sweep(const ExperimentConfig& cfg);
ResultTable run_classifier_study(const ExperimentConfig& cfg);
ResultTable run_mapping_ber(const ExperimentConfig& cfg);
ResultTable run_mapping_ber(const ExperimentConfig& cfg, const ConfusionMatrix& confusion);
ResultTable run_complexity(const ExperimentConfig& cfg);
void run_gen_dataset(const ExperimentConfig& cfg);

// Dispatches on cfg.kind, writes the primary CSV (or dataset) plus a JSON
// sidecar with wall time into cfg.out_dir. Returns the primary output path.
std::string run_experiment(const ExperimentConfig& cfg);

}  // namespace wds
