#include "wds/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "wds/fft.hpp"

namespace wds {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

WaveletBank WaveletBank::make(int signal_len, int n_scales, double omega0) {
  if (n_scales < 2) throw std::invalid_argument("WaveletBank: n_scales must be >= 2");
  if (signal_len < 8) throw std::invalid_argument("WaveletBank: signal too short");
  WaveletBank bank;
  bank.omega0 = omega0;
  bank.signal_len = signal_len;
  bank.scales.resize(n_scales);
  // Geometric grid of center frequencies from 1/2 down to 1/Q.
  double f_hi = 0.5, f_lo = 1.0 / signal_len;
  for (int i = 0; i < n_scales; ++i) {
    double f = f_hi * std::pow(f_lo / f_hi, static_cast<double>(i) / (n_scales - 1));
    bank.scales[i] = omega0 / (kTwoPi * f);
  }
  return bank;
}

RMat scalogram(const CVec& x, const WaveletBank& bank) {
  const int q = bank.signal_len;
  if (x.size() != q) throw std::invalid_argument("scalogram: input length != bank signal length");
  if (q < 8) throw std::invalid_argument("scalogram: input too short");
  CVec xf = fft::forward(x);
  RMat sg(bank.n_scales(), q);
  CVec prod(q);
  for (int si = 0; si < bank.n_scales(); ++si) {
    double s = bank.scales[si];
    double norm2 = 0.0;
    // Analytic Morlet window in frequency domain, positive frequencies only.
    for (int k = 0; k < q; ++k) {
      double w = 0.0;
      if (k <= q / 2) {
        double omega = kTwoPi * k / q;
        double d = s * omega - bank.omega0;
        w = std::exp(-0.5 * d * d);
      }
      norm2 += w * w;
      prod[k] = xf[k] * w;
    }
    double atom_l2 = std::sqrt(norm2 / q);  // time-domain L2 norm, Parseval
    CVec row = fft::inverse(prod) / static_cast<double>(q);
    for (int t = 0; t < q; ++t) sg(si, t) = std::abs(row[t]) / atom_l2;
  }
  return sg;
}

RVec reduce_features(const RMat& sg) {
  const int rows = static_cast<int>(sg.rows());
  const int n = static_cast<int>(sg.cols());
  RVec out(2 * rows);
  std::vector<double> buf(n);
  for (int r = 0; r < rows; ++r) {
    double mean = sg.row(r).mean();
    out[r] = (sg.row(r).array() - mean).square().sum() / n;
    for (int t = 0; t < n; ++t) buf[t] = sg(r, t);
    std::sort(buf.begin(), buf.end());
    auto quartile = [&](double p) {
      double pos = p * (n - 1);
      int lo = static_cast<int>(pos);
      double frac = pos - lo;
      return (lo + 1 < n) ? buf[lo] + frac * (buf[lo + 1] - buf[lo]) : buf[lo];
    };
    out[rows + r] = quartile(0.75) - quartile(0.25);
  }
  return out;
}

RVec extract_features(const CVec& x, const WaveletBank& bank) {
  double rms = std::sqrt(x.squaredNorm() / x.size());
  CVec xn = (rms > 0.0) ? CVec(x / rms) : x;
  return reduce_features(scalogram(xn, bank));
}

namespace {

BinaryLearner train_pegasos(const std::vector<RVec>& feats,
                            const std::vector<int>& labels,  // +1/-1
                            int class_a, int class_b,
                            const TrainOptions& opts, std::uint64_t seed) {
  const int m = static_cast<int>(feats.size());
  const int dim = static_cast<int>(feats.front().size());
  BinaryLearner lr;
  lr.class_a = class_a;
  lr.class_b = class_b;
  lr.weights = RVec::Zero(dim);
  lr.bias = 0.0;
  std::mt19937_64 rng(seed);
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  long t = 0;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int idx : order) {
      ++t;
      double eta = 1.0 / (opts.lambda * t);
      double y = labels[idx];
      double margin = y * (lr.weights.dot(feats[idx]) + lr.bias);
      lr.weights *= (1.0 - eta * opts.lambda);
      // The bias shrinks like a regularized coordinate; otherwise the huge
      // early step sizes leave it with an unbounded offset.
      lr.bias *= (1.0 - eta * opts.lambda);
      if (margin < 1.0) {
        lr.weights += eta * y * feats[idx];
        lr.bias += eta * y;
      }
    }
  }
  return lr;
}

}  // namespace

EcocModel train(const LabeledDataset& ds, const WaveletBank& bank, TrainOptions opts) {
  ds.validate();
  const int k = ds.n_classes();
  if (k < 2) throw TrainingError("training requires at least 2 classes");
  auto counts = ds.class_counts();
  for (int c = 0; c < k; ++c)
    if (counts[c] < 20)
      throw TrainingError("class " + std::to_string(c) + " has fewer than 20 records");

  std::vector<RVec> feats(ds.records.size());
  for (size_t i = 0; i < ds.records.size(); ++i)
    feats[i] = extract_features(ds.records[i].samples, bank);
  const int dim = static_cast<int>(feats.front().size());

  // Degenerate class: every record maps to the same feature vector.
  for (int c = 0; c < k; ++c) {
    const RVec* first = nullptr;
    bool degenerate = true;
    for (size_t i = 0; i < feats.size(); ++i) {
      if (ds.records[i].label != c) continue;
      if (!first) {
        first = &feats[i];
      } else if ((*first - feats[i]).cwiseAbs().maxCoeff() > 0.0) {
        degenerate = false;
        break;
      }
    }
    if (degenerate)
      throw TrainingError("class " + std::to_string(c) + " has all-identical features");
  }

  EcocModel model;
  model.n_classes = k;
  model.seed = opts.seed;
  model.feat_mean = RVec::Zero(dim);
  for (const auto& f : feats) model.feat_mean += f;
  model.feat_mean /= static_cast<double>(feats.size());
  model.feat_scale = RVec::Zero(dim);
  for (const auto& f : feats)
    model.feat_scale += (f - model.feat_mean).cwiseAbs2();
  model.feat_scale = (model.feat_scale / static_cast<double>(feats.size())).cwiseSqrt();
  for (int d = 0; d < dim; ++d)
    if (model.feat_scale[d] < 1e-12) model.feat_scale[d] = 1.0;

  for (auto& f : feats) f = (f - model.feat_mean).cwiseQuotient(model.feat_scale);

  int learner_idx = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      std::vector<RVec> sub;
      std::vector<int> lab;
      for (size_t i = 0; i < feats.size(); ++i) {
        int l = ds.records[i].label;
        if (l == a || l == b) {
          sub.push_back(feats[i]);
          lab.push_back(l == a ? +1 : -1);
        }
      }
      model.learners.push_back(
          train_pegasos(sub, lab, a, b, opts, derive_seed(opts.seed, learner_idx)));
      ++learner_idx;
    }
  return model;
}

int predict_features(const EcocModel& m, const RVec& features) {
  RVec x = (features - m.feat_mean).cwiseQuotient(m.feat_scale);
  std::vector<int> disagreements(m.n_classes, 0);
  for (const auto& lr : m.learners) {
    double score = lr.weights.dot(x) + lr.bias;
    int sign = score >= 0.0 ? +1 : -1;
    // One-vs-one column: +1 for class_a, -1 for class_b, 0 elsewhere.
    if (sign != +1) ++disagreements[lr.class_a];
    if (sign != -1) ++disagreements[lr.class_b];
  }
  int best = 0;
  for (int c = 1; c < m.n_classes; ++c)
    if (disagreements[c] < disagreements[best]) best = c;
  return best;
}

int predict(const EcocModel& m, const CVec& x, const WaveletBank& bank) {
  return predict_features(m, extract_features(x, bank));
}

double ConfusionMatrix::accuracy() const {
  long tot = total();
  return tot == 0 ? 0.0 : static_cast<double>(counts.trace()) / tot;
}

RVec ConfusionMatrix::per_class_accuracy() const {
  RVec acc(n_classes());
  for (int r = 0; r < n_classes(); ++r) {
    long row = counts.row(r).sum();
    acc[r] = row == 0 ? 0.0 : static_cast<double>(counts(r, r)) / row;
  }
  return acc;
}

std::string ConfusionMatrix::to_json() const {
  nlohmann::json j;
  j["n_classes"] = n_classes();
  j["rows_are_true_labels"] = true;
  auto rows = nlohmann::json::array();
  for (int r = 0; r < n_classes(); ++r) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < n_classes(); ++c) row.push_back(counts(r, c));
    rows.push_back(row);
  }
  j["counts"] = rows;
  j["accuracy"] = accuracy();
  auto pca = nlohmann::json::array();
  RVec acc = per_class_accuracy();
  for (int r = 0; r < n_classes(); ++r) pca.push_back(acc[r]);
  j["per_class_accuracy"] = pca;
  return j.dump(2);
}

void ConfusionMatrix::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write confusion matrix: " + path);
  os << to_json() << "\n";
}

ConfusionMatrix ConfusionMatrix::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read confusion matrix: " + path);
  nlohmann::json j;
  is >> j;
  int k = j["n_classes"];
  ConfusionMatrix cm = ConfusionMatrix::zero(k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) cm.counts(r, c) = j["counts"][r][c];
  return cm;
}

ConfusionMatrix evaluate(const EcocModel& m, const LabeledDataset& test,
                         const WaveletBank& bank) {
  test.validate();
  ConfusionMatrix cm = ConfusionMatrix::zero(m.n_classes);
  for (const auto& rec : test.records)
    ++cm.counts(rec.label, predict(m, rec.samples, bank));
  return cm;
}

int classify_modulation_ml(const CVec& r,
                           const std::vector<const Constellation*>& candidates,
                           double sigma2) {
  if (candidates.empty())
    throw std::invalid_argument("classify_modulation_ml: no candidates");
  if (r.size() == 0) throw std::invalid_argument("classify_modulation_ml: empty input");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("classify_modulation_ml: sigma2 must be > 0");
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (size_t ci = 0; ci < candidates.size(); ++ci) {
    const Constellation& con = *candidates[ci];
    double ll = 0.0;
    for (int n = 0; n < r.size(); ++n) {
      // log-sum-exp over constellation points
      double max_e = -std::numeric_limits<double>::infinity();
      std::vector<double> es(con.size());
      for (int p = 0; p < con.size(); ++p) {
        es[p] = -std::norm(r[n] - con.point(p)) / (2.0 * sigma2);
        max_e = std::max(max_e, es[p]);
      }
      double acc = 0.0;
      for (double e : es) acc += std::exp(e - max_e);
      ll += max_e + std::log(acc) - std::log(static_cast<double>(con.size())) -
            std::log(kTwoPi * sigma2);
    }
    if (ll > best_ll) {
      best_ll = ll;
      best = static_cast<int>(ci);
    }
  }
  return best;
}

namespace {

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

void put_vec(std::ostream& os, const RVec& v) {
  put<std::uint32_t>(os, static_cast<std::uint32_t>(v.size()));
  for (int i = 0; i < v.size(); ++i) put<double>(os, v[i]);
}

RVec get_vec(std::istream& is) {
  auto n = get<std::uint32_t>(is);
  RVec v(n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] = get<double>(is);
  return v;
}

}  // namespace

void EcocModel::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write model: " + path);
  os.write("WDSECOC1", 8);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(n_classes));
  put<std::uint64_t>(os, seed);
  put_vec(os, feat_mean);
  put_vec(os, feat_scale);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(learners.size()));
  for (const auto& lr : learners) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(lr.class_a));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(lr.class_b));
    put_vec(os, lr.weights);
    put<double>(os, lr.bias);
  }
}

EcocModel EcocModel::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read model: " + path);
  char magic[8];
  is.read(magic, 8);
  if (std::string(magic, 8) != "WDSECOC1")
    throw std::runtime_error("not a WDS model file: " + path);
  EcocModel m;
  m.n_classes = static_cast<int>(get<std::uint32_t>(is));
  m.seed = get<std::uint64_t>(is);
  m.feat_mean = get_vec(is);
  m.feat_scale = get_vec(is);
  auto n = get<std::uint32_t>(is);
  m.learners.resize(n);
  for (auto& lr : m.learners) {
    lr.class_a = static_cast<int>(get<std::uint32_t>(is));
    lr.class_b = static_cast<int>(get<std::uint32_t>(is));
    lr.weights = get_vec(is);
    lr.bias = get<double>(is);
  }
  if (!is) throw std::runtime_error("truncated model file: " + path);
  return m;
}

}  // namespace wds
