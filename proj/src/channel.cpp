#include "wds/channel.hpp"

#include <cmath>
#include <numbers>

namespace wds {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kOscillators = 16;
}  // namespace

void ChannelProfile::validate() const {
  if (tap_delays_s.size() != tap_powers_db.size())
    throw std::invalid_argument("ChannelProfile: delay/power list length mismatch");
  if (tap_delays_s.empty() || tap_delays_s.front() != 0.0)
    throw std::invalid_argument("ChannelProfile: first tap delay must be 0");
  if (k_factor < 0.0)
    throw std::invalid_argument("ChannelProfile: K-factor must be >= 0");
  if (!(sample_rate_hz > 0.0))
    throw std::invalid_argument("ChannelProfile: sample rate must be positive");
}

std::vector<double> ChannelProfile::linear_tap_gains() const {
  std::vector<double> g(tap_powers_db.size());
  double total = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    g[i] = std::pow(10.0, tap_powers_db[i] / 10.0);
    total += g[i];
  }
  for (double& v : g) v /= total;
  return g;
}

std::vector<int> ChannelProfile::tap_sample_offsets() const {
  std::vector<int> off(tap_delays_s.size());
  for (size_t i = 0; i < off.size(); ++i)
    off[i] = static_cast<int>(std::lround(tap_delays_s[i] * sample_rate_hz));
  return off;
}

FadingChannel::FadingChannel(const ChannelProfile& profile, std::uint64_t seed) {
  profile.validate();
  offsets_ = profile.tap_sample_offsets();
  auto gains = profile.linear_tap_gains();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, kTwoPi);
  for (size_t i = 0; i < gains.size(); ++i) {
    TapProcess tp;
    tp.amplitude = std::sqrt(gains[i]);
    tp.doppler_hz.resize(kOscillators);
    tp.phase.resize(kOscillators);
    for (int o = 0; o < kOscillators; ++o) {
      tp.doppler_hz[o] = profile.max_doppler_hz * std::cos(uni(rng));
      tp.phase[o] = uni(rng);
    }
    if (i == 0 && profile.k_factor > 0.0) {
      tp.rician = true;
      tp.los_frac = std::isinf(profile.k_factor)
                        ? 1.0
                        : profile.k_factor / (profile.k_factor + 1.0);
      tp.los_doppler_hz = profile.max_doppler_hz * std::cos(uni(rng));
      tp.los_phase = uni(rng);
    }
    taps_.push_back(std::move(tp));
  }
}

cxd FadingChannel::tap_gain(int tap, double t) const {
  const TapProcess& tp = taps_[tap];
  cxd diffuse(0, 0);
  for (int o = 0; o < kOscillators; ++o)
    diffuse += std::polar(1.0, kTwoPi * tp.doppler_hz[o] * t + tp.phase[o]);
  diffuse /= std::sqrt(static_cast<double>(kOscillators));
  if (!tp.rician) return tp.amplitude * diffuse;
  cxd los = std::polar(1.0, kTwoPi * tp.los_doppler_hz * t + tp.los_phase);
  return tp.amplitude * (std::sqrt(tp.los_frac) * los +
                         std::sqrt(1.0 - tp.los_frac) * diffuse);
}

CVec FadingChannel::apply(const CVec& x, double t0) const {
  if (x.size() == 0)
    throw std::invalid_argument("FadingChannel: empty input");
  // Blocks shorter than a tap delay simply never see that echo; the profile's
  // 17 us span exceeds one 64-sample symbol at 20 MHz.
  std::vector<cxd> h(taps_.size());
  for (size_t i = 0; i < taps_.size(); ++i) h[i] = tap_gain(static_cast<int>(i), t0);
  CVec y = CVec::Zero(x.size());
  for (size_t i = 0; i < taps_.size(); ++i) {
    int d = offsets_[i];
    for (int k = d; k < x.size(); ++k) y[k] += h[i] * x[k - d];
  }
  return y;
}

CVec awgn(const CVec& x, const NoiseSpec& spec, std::mt19937_64& rng) {
  if (x.size() == 0) throw std::invalid_argument("awgn: empty input");
  if (spec.is_noiseless()) return x;
  double es = x.squaredNorm() / x.size();
  double sigma2 = es / std::pow(10.0, spec.es_n0_db / 10.0);
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
  CVec y(x.size());
  for (int k = 0; k < x.size(); ++k)
    y[k] = x[k] + cxd(gauss(rng), gauss(rng));
  return y;
}

CVec apply_cfo(const CVec& x, double cfo_hz, double sample_rate) {
  if (!(sample_rate > 0.0)) throw std::invalid_argument("apply_cfo: bad sample rate");
  CVec y(x.size());
  for (int k = 0; k < x.size(); ++k)
    y[k] = x[k] * std::polar(1.0, kTwoPi * cfo_hz * k / sample_rate);
  return y;
}

CVec fade(const CVec& x, const ChannelProfile& profile, std::mt19937_64& rng) {
  FadingChannel ch(profile, rng());
  return ch.apply(x);
}

CVec impair(const CVec& x, const ChannelProfile& profile, const NoiseSpec& noise,
            std::mt19937_64& rng) {
  CVec y = profile.fading_enabled ? fade(x, profile, rng) : x;
  if (profile.cfo_hz() != 0.0)
    y = apply_cfo(y, profile.cfo_hz(), profile.sample_rate_hz);
  return awgn(y, noise, rng);
}

}  // namespace wds
