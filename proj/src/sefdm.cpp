#include "wds/sefdm.hpp"

#include <cmath>
#include <numbers>

#include "wds/fft.hpp"

namespace wds {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  Rational r = (slash == std::string::npos)
                   ? Rational{std::stoi(s), 1}
                   : Rational{std::stoi(s.substr(0, slash)),
                              std::stoi(s.substr(slash + 1))};
  if (r.num <= 0 || r.den <= 0)
    throw std::invalid_argument("parse_rational: ratio must be positive: " + s);
  return r;
}

SefdmConfig::SefdmConfig(int n_subcarriers, Rational oversampling, double bcf,
                         double sample_rate)
    : n_(n_subcarriers), rho_(oversampling), bcf_(bcf), sample_rate_(sample_rate) {
  if (n_ <= 0) throw std::invalid_argument("SefdmConfig: N must be positive");
  if (rho_.num <= 0 || rho_.den <= 0)
    throw std::invalid_argument("SefdmConfig: oversampling must be positive");
  if (!(bcf_ > 0.0) || bcf_ > 1.0)
    throw std::invalid_argument("SefdmConfig: bcf must be in (0, 1]");
  if (!(sample_rate_ > 0.0))
    throw std::invalid_argument("SefdmConfig: sample rate must be positive");
  long long prod = static_cast<long long>(n_) * rho_.num;
  if (prod % rho_.den != 0)
    throw std::invalid_argument("SefdmConfig: rho*N is not an integer");
  q_ = static_cast<int>(prod / rho_.den);
  m_ = (bcf_ == 1.0) ? q_ : static_cast<int>(std::lround(q_ / bcf_));
}

Constellation::Constellation(std::string label, std::vector<cxd> points,
                             std::vector<int> bit_labels)
    : label_(std::move(label)), points_(std::move(points)), bit_labels_(std::move(bit_labels)) {
  bits_per_symbol_ = 0;
  while ((1 << bits_per_symbol_) < static_cast<int>(points_.size())) ++bits_per_symbol_;
  index_of_bits_.assign(points_.size(), 0);
  for (int i = 0; i < static_cast<int>(points_.size()); ++i)
    index_of_bits_[bit_labels_[i]] = i;
}

const Constellation& Constellation::bpsk() {
  static const Constellation c("BPSK", {cxd(1, 0), cxd(-1, 0)}, {0, 1});
  return c;
}

const Constellation& Constellation::qpsk() {
  const double a = 1.0 / std::sqrt(2.0);
  // Gray map: 00->(1+j), 01->(-1+j), 11->(-1-j), 10->(1-j), scaled by 1/sqrt(2)
  static const Constellation c("QPSK",
                               {cxd(a, a), cxd(-a, a), cxd(-a, -a), cxd(a, -a)},
                               {0, 1, 3, 2});
  return c;
}

int Constellation::slice_index(cxd v) const {
  int best = 0;
  double best_d = std::norm(v - points_[0]);
  for (int i = 1; i < size(); ++i) {
    double d = std::norm(v - points_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

int Constellation::index_from_bits(const std::uint8_t* bits) const {
  int v = 0;
  for (int b = 0; b < bits_per_symbol_; ++b) v = (v << 1) | (bits[b] & 1);
  return index_of_bits_[v];
}

void Constellation::bits_from_index(int index, std::uint8_t* bits) const {
  int v = bit_labels_[index];
  for (int b = bits_per_symbol_ - 1; b >= 0; --b) {
    bits[b] = static_cast<std::uint8_t>(v & 1);
    v >>= 1;
  }
}

CVec Constellation::map_bits(const std::vector<std::uint8_t>& bits) const {
  if (bits.size() % bits_per_symbol_ != 0)
    throw std::invalid_argument("map_bits: bit count not a multiple of bits per symbol");
  CVec out(bits.size() / bits_per_symbol_);
  for (int i = 0; i < out.size(); ++i)
    out[i] = points_[index_from_bits(bits.data() + i * bits_per_symbol_)];
  return out;
}

std::vector<std::uint8_t> Constellation::demap_points(const CVec& symbols) const {
  std::vector<std::uint8_t> bits(symbols.size() * bits_per_symbol_);
  for (int i = 0; i < symbols.size(); ++i)
    bits_from_index(slice_index(symbols[i]), bits.data() + i * bits_per_symbol_);
  return bits;
}

CVec modulate_direct(const SefdmConfig& cfg, const CVec& s) {
  if (s.size() != cfg.n_subcarriers())
    throw std::invalid_argument("modulate_direct: symbol vector length != N");
  const int q = cfg.n_samples();
  const int n = cfg.n_subcarriers();
  const double alpha = cfg.bcf();
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  CVec x(q);
  for (int k = 0; k < q; ++k) {
    cxd acc(0, 0);
    for (int m = 0; m < n; ++m)
      acc += s[m] * std::polar(1.0, kTwoPi * m * k * alpha / q);
    x[k] = scale * acc;
  }
  return x;
}

CVec modulate(const SefdmConfig& cfg, const CVec& s) {
  if (s.size() != cfg.n_subcarriers())
    throw std::invalid_argument("modulate: symbol vector length != N");
  const int q = cfg.n_samples();
  const int m = cfg.dft_size();
  CVec padded = CVec::Zero(m);
  padded.head(s.size()) = s;
  CVec full = fft::inverse(padded);
  // IDFT above is unnormalized; 1/sqrt(M) then sqrt(M/Q) nets 1/sqrt(Q).
  return full.head(q) / std::sqrt(static_cast<double>(q));
}

CVec demodulate(const SefdmConfig& cfg, const CVec& y) {
  if (y.size() != cfg.n_samples())
    throw std::invalid_argument("demodulate: time sample length != Q");
  const int m = cfg.dft_size();
  CVec padded = CVec::Zero(m);
  padded.head(y.size()) = y;
  CVec full = fft::forward(padded);
  return full.head(cfg.n_subcarriers()) / std::sqrt(static_cast<double>(cfg.n_samples()));
}

CMat subcarrier_matrix(const SefdmConfig& cfg, double alpha) {
  const int q = cfg.n_samples();
  const int n = cfg.n_subcarriers();
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  CMat f(q, n);
  for (int k = 0; k < q; ++k)
    for (int m = 0; m < n; ++m)
      f(k, m) = scale * std::polar(1.0, kTwoPi * m * k * alpha / q);
  return f;
}

CMat correlation_matrix(const SefdmConfig& cfg) {
  const int q = cfg.n_samples();
  const int n = cfg.n_subcarriers();
  const int m = cfg.dft_size();
  // C(a,b) depends only on d = b - a; c_d = (1/Q) sum_k exp(j2*pi*d*k/M).
  std::vector<cxd> c(n);
  c[0] = cxd(1, 0);
  for (int d = 1; d < n; ++d) {
    cxd acc(0, 0);
    for (int k = 0; k < q; ++k) acc += std::polar(1.0, kTwoPi * d * k / m);
    c[d] = acc / static_cast<double>(q);
  }
  CMat out(n, n);
  for (int a = 0; a < n; ++a) {
    out(a, a) = c[0];
    for (int b = a + 1; b < n; ++b) {
      out(a, b) = c[b - a];
      out(b, a) = std::conj(c[b - a]);
    }
  }
  return out;
}

std::pair<double, double> power_decomposition(const SefdmConfig& cfg,
                                              const CVec& s, int k) {
  if (s.size() != cfg.n_subcarriers())
    throw std::invalid_argument("power_decomposition: symbol vector length != N");
  if (k < 0 || k >= cfg.n_samples())
    throw std::out_of_range("power_decomposition: sample index out of range");
  const int q = cfg.n_samples();
  const int n = cfg.n_subcarriers();
  const double alpha = cfg.bcf();
  double signal = s.squaredNorm() / q;
  cxd ici(0, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      ici += s[a] * std::conj(s[b]) * std::polar(1.0, kTwoPi * (a - b) * k * alpha / q);
    }
  return {signal, ici.real() / q};
}

}  // namespace wds
