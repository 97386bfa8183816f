#pragma once

#include <array>
#include <functional>

#include "wds/classify.hpp"
#include "wds/detect.hpp"
#include "wds/patterns.hpp"

namespace wds {

// 802.11a-shaped numerology: 48 data + 4 pilot sub-carriers, 64-point
// transform at rho = 16/13, 20 MHz.
struct WlanConfig {
  int fft_size = 64;
  int n_data = 48;
  int n_pilots = 4;
  int cp_len = 16;
  Rational rho{16, 13};
  double sample_rate = 20e6;

  // Occupied-index positions of the pilots (sub-carriers -21,-7,+7,+21 in
  // the standard ordering of the 52 occupied bins).
  std::array<int, 4> pilot_occ_idx = {5, 19, 32, 46};

  int n_occupied() const { return n_data + n_pilots; }
  int psdu_symbol_len() const { return fft_size + cp_len; }
  SefdmConfig sefdm_for(double alpha) const {
    return SefdmConfig(n_occupied(), rho, alpha, sample_rate);
  }
  static WlanConfig standard() { return {}; }
};

struct WdsFrame {
  CVec samples;  // preamble followed by PSDU symbols
  int preamble_len = 0;
  Schedule schedule;
  std::vector<std::uint8_t> payload_bits;
};

struct SyncError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Standard-sequence L-STF/L-LTF plus a fixed-content L-SIG; PSDU symbols
// carry 48 QPSK data + 4 polarity pilots modulated at the scheduled alpha
// with a 16-sample cyclic prefix. The preamble is schedule-independent.
WdsFrame build_frame(const WlanConfig& cfg, const Schedule& sched,
                     const std::vector<std::uint8_t>& bits);

struct RxOptions {
  bool known_timing = true;      // trust sample 0 as frame start
  double sync_threshold = 0.5;   // normalized STF correlation peak
};

// Pre-shared-schedule receiver: sync, LTF channel estimate, per-symbol
// demodulation at the scheduled alpha, pilot phase correction, ID detection.
std::vector<std::uint8_t> legit_receive(const CVec& stream, const WlanConfig& cfg,
                                        const Schedule& sched, RxOptions opts = {});

// Eavesdropper that treats every PSDU symbol as alpha = 1 OFDM with MF
// detection.
std::vector<std::uint8_t> eve_scenario1_receive(const CVec& stream,
                                                const WlanConfig& cfg,
                                                RxOptions opts = {});

struct Scenario2Result {
  std::vector<std::uint8_t> bits;
  ConfusionMatrix confusion;
};

// Classifier-in-the-loop eavesdropper: each PSDU symbol's 64 post-CP samples
// are classified, then demodulated and ID-detected at the predicted alpha.
// The true schedule is only used to score the confusion matrix.
using SymbolClassifier = std::function<int(const CVec&)>;

Scenario2Result eve_scenario2_receive(const CVec& stream, const WlanConfig& cfg,
                                      const BcfPattern& pattern,
                                      const SymbolClassifier& classifier,
                                      const Schedule& true_sched,
                                      RxOptions opts = {});

Scenario2Result eve_scenario2_receive(const CVec& stream, const WlanConfig& cfg,
                                      const EcocModel& model, const WaveletBank& bank,
                                      const BcfPattern& pattern,
                                      const Schedule& true_sched,
                                      RxOptions opts = {});

double ber(const std::vector<std::uint8_t>& tx, const std::vector<std::uint8_t>& rx);

// Interleaved float64 I/Q, little-endian.
void save_iq(const std::string& path, const CVec& samples);
CVec load_iq(const std::string& path);

}  // namespace wds
