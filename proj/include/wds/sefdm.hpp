#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wds/common.hpp"

namespace wds {

struct Rational {
  int num = 1;
  int den = 1;
  double value() const { return static_cast<double>(num) / den; }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

Rational parse_rational(const std::string& s);

// Waveform tuple (N, rho, alpha, Q, M, sample rate). Q = rho*N must be an
// exact integer and M = round(Q/alpha). All transforms realize the effective
// compression alpha' = Q/M; the nominal alpha is kept as the class label.
class SefdmConfig {
 public:
  SefdmConfig(int n_subcarriers, Rational oversampling, double bcf,
              double sample_rate = 20e6);

  int n_subcarriers() const { return n_; }
  Rational oversampling() const { return rho_; }
  double bcf() const { return bcf_; }
  int n_samples() const { return q_; }
  int dft_size() const { return m_; }
  double sample_rate() const { return sample_rate_; }

  double effective_bcf() const { return static_cast<double>(q_) / m_; }
  double symbol_duration() const { return q_ / sample_rate_; }
  double subcarrier_spacing() const { return bcf_ / symbol_duration(); }

  SefdmConfig with_bcf(double alpha) const { return {n_, rho_, alpha, sample_rate_}; }

 private:
  int n_;
  Rational rho_;
  double bcf_;
  int q_;
  int m_;
  double sample_rate_;
};

// Constellation with Gray bit labeling, unit average energy.
class Constellation {
 public:
  static const Constellation& bpsk();
  static const Constellation& qpsk();

  const std::string& label() const { return label_; }
  int size() const { return static_cast<int>(points_.size()); }
  int bits_per_symbol() const { return bits_per_symbol_; }
  cxd point(int i) const { return points_[i]; }
  const std::vector<cxd>& points() const { return points_; }

  // Nearest constellation point; ties broken by lowest point index.
  int slice_index(cxd v) const;

  // Gray map between point indices and bit groups.
  int index_from_bits(const std::uint8_t* bits) const;
  void bits_from_index(int index, std::uint8_t* bits) const;

  CVec map_bits(const std::vector<std::uint8_t>& bits) const;
  std::vector<std::uint8_t> demap_points(const CVec& symbols) const;

 private:
  Constellation(std::string label, std::vector<cxd> points, std::vector<int> bit_labels);
  std::string label_;
  std::vector<cxd> points_;
  std::vector<int> bit_labels_;     // point index -> bit group value
  std::vector<int> index_of_bits_;  // bit group value -> point index
  int bits_per_symbol_;
};

// Reference oracle, direct exponential sum with the nominal bcf. O(NQ).
CVec modulate_direct(const SefdmConfig& cfg, const CVec& s);

// Zero-padded M-point IDFT, truncated to Q samples, rescaled by sqrt(M/Q) so
// the output matches modulate_direct's 1/sqrt(Q) normalization at alpha'.
CVec modulate(const SefdmConfig& cfg, const CVec& s);

// Zero-padded M-point DFT truncated to N matched-filter statistics;
// equals the conjugate sub-carrier matrix product F^H y at alpha'.
CVec demodulate(const SefdmConfig& cfg, const CVec& y);

// C = F^H F at alpha'. Hermitian with exactly unit diagonal.
CMat correlation_matrix(const SefdmConfig& cfg);

// Sub-carrier matrix F (Q x N) with entries exp(j2*pi*n*k*alpha/Q)/sqrt(Q).
CMat subcarrier_matrix(const SefdmConfig& cfg, double alpha);

// Instantaneous-power split at sample k: (signal term, ICI double sum).
// Uses the nominal bcf, pairing with modulate_direct.
std::pair<double, double> power_decomposition(const SefdmConfig& cfg,
                                              const CVec& s, int k);

}  // namespace wds
