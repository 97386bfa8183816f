#pragma once

#include <limits>
#include <random>
#include <vector>

#include "wds/common.hpp"

namespace wds {

// Tapped-delay-line fading profile plus CFO bookkeeping. Tap powers are
// relative dB and get normalized to unit total linear gain.
struct ChannelProfile {
  bool fading_enabled = true;
  std::vector<double> tap_delays_s = {0.0, 9e-6, 1.7e-5};
  std::vector<double> tap_powers_db = {0.0, -2.0, -10.0};
  double k_factor = 4.0;  // linear; first tap Rician, inf = pure LOS
  double max_doppler_hz = 4.0;
  double cfo_ppm = 2.0;
  double carrier_freq_hz = 2.412e9;
  double sample_rate_hz = 20e6;

  static ChannelProfile indoor_default() { return {}; }
  static ChannelProfile awgn_only() {
    ChannelProfile p;
    p.fading_enabled = false;
    p.cfo_ppm = 0.0;
    return p;
  }

  double cfo_hz() const { return cfo_ppm * 1e-6 * carrier_freq_hz; }
  std::vector<double> linear_tap_gains() const;  // powers, sum = 1
  std::vector<int> tap_sample_offsets() const;
  void validate() const;
};

struct NoiseSpec {
  double es_n0_db = std::numeric_limits<double>::infinity();
  static NoiseSpec noiseless() { return {}; }
  static NoiseSpec at(double db) { return {db}; }
  bool is_noiseless() const { return std::isinf(es_n0_db); }
};

// One tapped-delay-line realization. Tap processes follow a sum-of-sinusoids
// approximation of the classical Doppler spectrum; the first tap carries a
// Rician LOS component with the profile's K-factor.
class FadingChannel {
 public:
  FadingChannel(const ChannelProfile& profile, std::uint64_t seed);

  cxd tap_gain(int tap, double t) const;
  // Block fading: gains frozen at t0 for the whole input block.
  CVec apply(const CVec& x, double t0 = 0.0) const;

  int n_taps() const { return static_cast<int>(offsets_.size()); }

 private:
  struct TapProcess {
    std::vector<double> doppler_hz;  // per-oscillator Doppler shift
    std::vector<double> phase;
    double amplitude;   // sqrt of normalized linear power
    bool rician = false;
    double los_frac = 0.0;  // K/(K+1)
    double los_doppler_hz = 0.0;
    double los_phase = 0.0;
  };
  std::vector<TapProcess> taps_;
  std::vector<int> offsets_;
};

// y = x + z with z circularly-symmetric complex Gaussian; the per-sample
// variance derives from the measured mean |x|^2 of the block.
CVec awgn(const CVec& x, const NoiseSpec& spec, std::mt19937_64& rng);

CVec apply_cfo(const CVec& x, double cfo_hz, double sample_rate);

// One-shot fading realization drawn from rng, evaluated at t = 0.
CVec fade(const CVec& x, const ChannelProfile& profile, std::mt19937_64& rng);

// fade -> cfo -> awgn.
CVec impair(const CVec& x, const ChannelProfile& profile, const NoiseSpec& noise,
            std::mt19937_64& rng);

}  // namespace wds
