#pragma once

#include <string>
#include <vector>

#include "wds/dataset.hpp"
#include "wds/sefdm.hpp"

namespace wds {

// Complex Morlet filter bank on a geometric scale grid spanning normalized
// frequencies [1/Q, 1/2].
struct WaveletBank {
  double omega0 = 6.0;
  int signal_len = 0;
  std::vector<double> scales;  // strictly increasing

  static WaveletBank make(int signal_len, int n_scales = 32, double omega0 = 6.0);
  int n_scales() const { return static_cast<int>(scales.size()); }
};

// Magnitude of the circular convolution of x with each L2-normalized atom.
// Rows are scales, columns time.
RMat scalogram(const CVec& x, const WaveletBank& bank);

// Per scale: variance then interquartile range across time, concatenated.
// Quartiles use linear interpolation between order statistics.
RVec reduce_features(const RMat& sg);

struct BinaryLearner {
  int class_a = 0, class_b = 0;  // +1 label / -1 label
  RVec weights;
  double bias = 0.0;
};

struct TrainOptions {
  int epochs = 50;
  double lambda = 1e-3;
  std::uint64_t seed = 1;
};

// One-vs-one ECOC over K classes with linear max-margin learners trained by
// a seeded deterministic subgradient method on z-scored features.
struct EcocModel {
  int n_classes = 0;
  RVec feat_mean, feat_scale;
  std::vector<BinaryLearner> learners;
  std::uint64_t seed = 0;

  void save(const std::string& path) const;
  static EcocModel load(const std::string& path);
};

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Feature extraction pipeline shared by train/predict: records are
// normalized to unit RMS before the scalogram so features are power-blind.
RVec extract_features(const CVec& x, const WaveletBank& bank);

EcocModel train(const LabeledDataset& ds, const WaveletBank& bank,
                TrainOptions opts = {});

int predict_features(const EcocModel& m, const RVec& features);
int predict(const EcocModel& m, const CVec& x, const WaveletBank& bank);

struct ConfusionMatrix {
  Eigen::MatrixXi counts;  // rows = true, cols = predicted

  static ConfusionMatrix zero(int k) {
    ConfusionMatrix cm;
    cm.counts = Eigen::MatrixXi::Zero(k, k);
    return cm;
  }
  int n_classes() const { return static_cast<int>(counts.rows()); }
  long total() const { return counts.sum(); }
  double accuracy() const;
  RVec per_class_accuracy() const;
  std::string to_json() const;
  void save(const std::string& path) const;
  static ConfusionMatrix load(const std::string& path);
};

ConfusionMatrix evaluate(const EcocModel& m, const LabeledDataset& test,
                         const WaveletBank& bank);

// Single-carrier maximum-likelihood modulation classification; returns the
// index of the best candidate. Log-likelihoods use log-sum-exp.
int classify_modulation_ml(const CVec& r,
                           const std::vector<const Constellation*>& candidates,
                           double sigma2);

}  // namespace wds
