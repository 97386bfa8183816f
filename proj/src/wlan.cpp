#include "wds/wlan.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "wds/fft.hpp"

namespace wds {

namespace {

constexpr int kFft = 64;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Frequency-domain short training sequence, indices -26..26.
const CVec& stf_freq() {
  static const CVec seq = [] {
    CVec s = CVec::Zero(53);
    const double a = std::sqrt(13.0 / 6.0);
    auto set = [&](int k, double re, double im) { s[k + 26] = cxd(a * re, a * im); };
    set(-24, 1, 1);
    set(-20, -1, -1);
    set(-16, 1, 1);
    set(-12, -1, -1);
    set(-8, -1, -1);
    set(-4, 1, 1);
    set(4, -1, -1);
    set(8, -1, -1);
    set(12, 1, 1);
    set(16, 1, 1);
    set(20, 1, 1);
    set(24, 1, 1);
    return s;
  }();
  return seq;
}

// Frequency-domain long training sequence, indices -26..26.
const CVec& ltf_freq() {
  static const CVec seq = [] {
    static const int lo[26] = {1, 1,  -1, -1, 1, 1,  -1, 1, -1, 1, 1, 1, 1,
                               1, 1,  -1, -1, 1, 1,  -1, 1, -1, 1, 1, 1, 1};
    static const int hi[26] = {1,  -1, -1, 1,  1,  -1, 1,  -1, 1,  -1, -1, -1, -1,
                               -1, 1,  1,  -1, -1, 1,  -1, 1,  -1, 1,  1,  1,  1};
    CVec s = CVec::Zero(53);
    for (int i = 0; i < 26; ++i) s[i] = cxd(lo[i], 0);
    for (int i = 0; i < 26; ++i) s[27 + i] = cxd(hi[i], 0);
    return s;
  }();
  return seq;
}

// Pilot polarity sequence p_0..p_126; L-SIG uses p_0, data symbol n uses
// p_{(n+1) mod 127}.
const std::array<int, 127>& polarity() {
  static const std::array<int, 127> p = {
      1,  1,  1,  1,  -1, -1, -1, 1,  -1, -1, -1, -1, 1,  1,  -1, 1,  -1, -1,
      1,  1,  -1, 1,  1,  -1, 1,  1,  1,  1,  1,  1,  -1, 1,  1,  1,  -1, 1,
      1,  -1, -1, 1,  1,  1,  -1, 1,  -1, -1, -1, 1,  -1, 1,  -1, -1, 1,  -1,
      -1, 1,  1,  1,  1,  1,  -1, -1, 1,  1,  -1, -1, 1,  -1, 1,  -1, 1,  1,
      -1, -1, -1, 1,  1,  -1, -1, -1, -1, 1,  -1, -1, 1,  -1, 1,  1,  1,  1,
      -1, 1,  -1, 1,  -1, 1,  -1, -1, -1, -1, -1, 1,  -1, 1,  1,  -1, 1,  -1,
      1,  1,  1,  -1, -1, 1,  -1, -1, -1, 1,  1,  1,  -1, -1, -1, -1, -1, -1,
      -1};
  return p;
}

// 64-point OFDM symbol from a -26..26 bin vector, 1/sqrt(64) normalized.
CVec ofdm64(const CVec& bins53) {
  CVec grid = CVec::Zero(kFft);
  for (int k = -26; k <= 26; ++k) grid[(k + kFft) % kFft] = bins53[k + 26];
  return fft::inverse(grid) / 8.0;
}

// Occupied bins in standard order: -26..-1 then +1..+26, pilots at
// -21, -7, +7, +21 (occupied indices 5, 19, 32, 46).
std::vector<int> standard_occupied_bins() {
  std::vector<int> bins;
  for (int k = -26; k <= 26; ++k)
    if (k != 0) bins.push_back(k);
  return bins;
}

const std::array<double, 4> kPilotBase = {1.0, 1.0, 1.0, -1.0};

std::vector<int> data_occ_indices(const WlanConfig& cfg) {
  std::vector<int> idx;
  for (int i = 0; i < cfg.n_occupied(); ++i) {
    bool pilot = false;
    for (int p : cfg.pilot_occ_idx) pilot |= (p == i);
    if (!pilot) idx.push_back(i);
  }
  return idx;
}

// Fixed signaling-field content: rate/length bits are not modeled, so the
// field carries a frozen BPSK sequence every frame. Indices -26..26.
const CVec& lsig_freq() {
  static const CVec bins = [] {
    std::mt19937_64 rng(0x5160);
    std::uniform_int_distribution<int> coin(0, 1);
    CVec b = CVec::Zero(53);
    for (int k = -26; k <= 26; ++k) {
      if (k == 0) continue;
      if (k == -21 || k == -7 || k == 7 || k == 21) {
        double base = (k == 21) ? -1.0 : 1.0;
        b[k + 26] = cxd(base * polarity()[0], 0.0);
      } else {
        b[k + 26] = cxd(coin(rng) ? 1.0 : -1.0, 0.0);
      }
    }
    return b;
  }();
  return bins;
}

// 400 samples: 160 STF, 32 + 2x64 LTF, 16 + 64 L-SIG.
const CVec& preamble() {
  static const CVec pre = [] {
    CVec stf = ofdm64(stf_freq());
    CVec ltf = ofdm64(ltf_freq());
    CVec sig = ofdm64(lsig_freq());
    CVec out(400);
    for (int t = 0; t < 160; ++t) out[t] = stf[t % kFft];
    for (int t = 0; t < 32; ++t) out[160 + t] = ltf[32 + t];
    out.segment(192, kFft) = ltf;
    out.segment(256, kFft) = ltf;
    out.segment(320, 16) = sig.tail(16);
    out.segment(336, kFft) = sig;
    return out;
  }();
  return pre;
}

CVec occupied_vector(const WlanConfig& cfg, const CVec& data_syms, int symbol_index) {
  CVec occ(cfg.n_occupied());
  const std::vector<int> didx = data_occ_indices(cfg);
  for (int i = 0; i < cfg.n_data; ++i) occ[didx[i]] = data_syms[i];
  int pol = polarity()[(symbol_index + 1) % 127];
  for (int i = 0; i < cfg.n_pilots; ++i)
    occ[cfg.pilot_occ_idx[i]] = cxd(kPilotBase[i] * pol, 0.0);
  return occ;
}

struct FrontEnd {
  int start = 0;
  CVec h_occ;  // per occupied index, standard bin order
};

int locate_frame(const CVec& stream, const RxOptions& opts) {
  if (opts.known_timing) return 0;
  const CVec& ref = preamble();
  const int w = 160;
  if (stream.size() < w) throw SyncError("stream shorter than the short training field");
  double ref_norm = ref.head(w).norm();
  double best = -1.0;
  int best_off = 0;
  for (int off = 0; off + w <= stream.size(); ++off) {
    auto seg = stream.segment(off, w);
    double den = ref_norm * seg.norm();
    if (den <= 0.0) continue;
    double c = std::abs(seg.dot(ref.head(w))) / den;
    if (c > best) {
      best = c;
      best_off = off;
    }
  }
  if (best < opts.sync_threshold)
    throw SyncError("preamble correlation below threshold");
  return best_off;
}

FrontEnd front_end(const CVec& stream, const WlanConfig& cfg, const RxOptions& opts) {
  FrontEnd fe;
  fe.start = locate_frame(stream, opts);
  if (stream.size() < fe.start + 400)
    throw SyncError("stream too short for the full preamble");
  // Per-bin least squares over both LTF repeats plus the known L-SIG field.
  CVec avg = (stream.segment(fe.start + 192, kFft) +
              stream.segment(fe.start + 256, kFft)) / 2.0;
  CVec ltf_bins = fft::forward(avg) / 8.0;
  CVec sig_bins = fft::forward(CVec(stream.segment(fe.start + 336, kFft))) / 8.0;
  const CVec& ltf_ref = ltf_freq();
  const CVec& sig_ref = lsig_freq();
  fe.h_occ.resize(cfg.n_occupied());
  const std::vector<int> occ_bins = standard_occupied_bins();
  for (int i = 0; i < cfg.n_occupied(); ++i) {
    int k = occ_bins[i];
    int bin = (k + kFft) % kFft;
    fe.h_occ[i] = (2.0 * ltf_bins[bin] / ltf_ref[k + 26] +
                   sig_bins[bin] / sig_ref[k + 26]) / 3.0;
  }
  // Any channel the cyclic prefix can absorb has at most cp_len impulse
  // response taps, so projecting the per-bin estimates onto that subspace
  // strips most of the estimator noise without assuming flatness.
  CMat basis(cfg.n_occupied(), cfg.cp_len);
  for (int i = 0; i < cfg.n_occupied(); ++i)
    for (int t = 0; t < cfg.cp_len; ++t)
      basis(i, t) = std::polar(1.0, -kTwoPi * occ_bins[i] * t / kFft);
  fe.h_occ = basis * basis.colPivHouseholderQr().solve(fe.h_occ);
  return fe;
}

// Unwrap theta, fit theta ~ c0 + c1*j by weighted least squares, then rotate
// every symbol's statistics by the fitted ramp (offset plus per-symbol slope,
// e.g. residual CFO).
void apply_ramp_fit(std::vector<CVec>& rs, std::vector<double>& theta,
                    const std::vector<double>& weight) {
  const int n_sym = static_cast<int>(rs.size());
  for (int j = 1; j < n_sym; ++j) {
    double d = theta[j] - theta[j - 1];
    theta[j] -= kTwoPi * std::round(d / kTwoPi);
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int j = 0; j < n_sym; ++j) {
    sw += weight[j];
    sx += weight[j] * j;
    sy += weight[j] * theta[j];
    sxx += weight[j] * static_cast<double>(j) * j;
    sxy += weight[j] * j * theta[j];
  }
  double c0 = 0.0, c1 = 0.0;
  double det = sw * sxx - sx * sx;
  if (n_sym >= 2 && std::abs(det) > 1e-12 * sw * sxx + 1e-300) {
    c1 = (sw * sxy - sx * sy) / det;
    c0 = (sy - c1 * sx) / sw;
  } else if (sw > 0.0) {
    c0 = sy / sw;
  }
  for (int j = 0; j < n_sym; ++j)
    rs[j] *= std::polar(1.0, -(c0 + c1 * j));
}

// Equalized matched-filter statistics for every PSDU symbol, with a common
// phase ramp fitted to the pilot phasors of the whole frame. Frame-level
// fitting averages out both pilot noise and the ICI the pilots pick up in
// compressed symbols.
std::vector<CVec> frame_statistics(const WlanConfig& cfg,
                                   const std::vector<SefdmConfig>& scfgs,
                                   const CVec& stream, const FrontEnd& fe) {
  const int n_sym = static_cast<int>(scfgs.size());
  std::vector<CVec> rs(n_sym);
  std::vector<double> theta(n_sym), weight(n_sym);
  for (int j = 0; j < n_sym; ++j) {
    long off = fe.start + 400 + static_cast<long>(j) * cfg.psdu_symbol_len() + cfg.cp_len;
    CVec r = demodulate(scfgs[j], stream.segment(off, cfg.fft_size));
    for (int i = 0; i < r.size(); ++i) r[i] /= fe.h_occ[i];
    int pol = polarity()[(j + 1) % 127];
    cxd acc(0, 0);
    for (int i = 0; i < cfg.n_pilots; ++i)
      acc += r[cfg.pilot_occ_idx[i]] * (kPilotBase[i] * pol);
    theta[j] = std::arg(acc);
    weight[j] = std::abs(acc);
    rs[j] = std::move(r);
  }
  apply_ramp_fit(rs, theta, weight);
  return rs;
}

// Pilot symbols are known at the receiver, so their ICI contribution to the
// data bins of a compressed symbol can be removed exactly before detection.
// Leaving them inside the detector is worse than it looks: the QPSK slicer
// never reproduces a BPSK pilot, and the cancellation stage then injects the
// slicing error into every neighbouring data bin. The detector runs on the
// data-only rows and columns of the correlation matrix, which keep the unit
// diagonal and, by eigenvalue interlacing, can only shrink the spectral
// radius of the cancellation update.
struct DataSystem {
  CMat full;   // the complete correlation matrix over the occupied bins
  CMat corr;   // data rows and columns of C
  CMat pilot;  // data rows, pilot columns of C
};

DataSystem data_system(const WlanConfig& cfg, CMat c) {
  const std::vector<int> didx = data_occ_indices(cfg);
  DataSystem sys;
  sys.corr.resize(cfg.n_data, cfg.n_data);
  sys.pilot.resize(cfg.n_data, cfg.n_pilots);
  for (int i = 0; i < cfg.n_data; ++i) {
    for (int j = 0; j < cfg.n_data; ++j) sys.corr(i, j) = c(didx[i], didx[j]);
    for (int p = 0; p < cfg.n_pilots; ++p)
      sys.pilot(i, p) = c(didx[i], cfg.pilot_occ_idx[p]);
  }
  sys.full = std::move(c);
  return sys;
}

CVec detect_data_symbols(const WlanConfig& cfg, const DataSystem& sys,
                         const CVec& r, int symbol_index) {
  const std::vector<int> didx = data_occ_indices(cfg);
  int pol = polarity()[(symbol_index + 1) % 127];
  CVec pilots(cfg.n_pilots);
  for (int p = 0; p < cfg.n_pilots; ++p) pilots[p] = cxd(kPilotBase[p] * pol, 0.0);
  CVec rd(cfg.n_data);
  for (int i = 0; i < cfg.n_data; ++i) rd[i] = r[didx[i]];
  rd -= sys.pilot * pilots;
  return detect_id(sys.corr, rd, Constellation::qpsk()).hard_symbols;
}

// Two-pass PSDU detection. The pilot-only ramp fit is noisy, and in
// compressed symbols the pilots additionally pick up ICI from the unknown
// data, so the first-pass residual phase error is both larger and schedule
// dependent. After the first detection pass the expected matched-filter
// output can be reconstructed from the hard decisions (ICI included); fitting
// a second ramp against all occupied bins of that reconstruction averages
// thirteen times more phasors than the pilots alone and carries no ICI
// penalty, after which the symbols are detected once more.
std::vector<std::uint8_t> detect_psdu(const WlanConfig& cfg,
                                      const std::vector<SefdmConfig>& scfgs,
                                      std::vector<CVec>& rs) {
  const Constellation& qpsk = Constellation::qpsk();
  const int n_sym = static_cast<int>(scfgs.size());
  std::map<double, DataSystem> sys_cache;
  auto system_for = [&](int j) -> const DataSystem& {
    double alpha = scfgs[j].bcf();
    auto it = sys_cache.find(alpha);
    if (it == sys_cache.end())
      it = sys_cache.emplace(alpha, data_system(cfg, correlation_matrix(scfgs[j]))).first;
    return it->second;
  };
  std::vector<double> theta(n_sym), weight(n_sym);
  for (int j = 0; j < n_sym; ++j) {
    const DataSystem& sys = system_for(j);
    CVec hard = detect_data_symbols(cfg, sys, rs[j], j);
    CVec expect = sys.full * occupied_vector(cfg, hard, j);
    cxd acc = (rs[j].array() * expect.array().conjugate()).sum();
    theta[j] = std::arg(acc);
    weight[j] = std::abs(acc);
  }
  apply_ramp_fit(rs, theta, weight);
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<size_t>(n_sym) * cfg.n_data * 2);
  for (int j = 0; j < n_sym; ++j) {
    CVec hard = detect_data_symbols(cfg, system_for(j), rs[j], j);
    std::vector<std::uint8_t> bits = qpsk.demap_points(hard);
    out.insert(out.end(), bits.begin(), bits.end());
  }
  return out;
}

void append_data_bits(const WlanConfig& cfg, const CVec& hard,
                      std::vector<std::uint8_t>& out) {
  const Constellation& qpsk = Constellation::qpsk();
  const std::vector<int> didx = data_occ_indices(cfg);
  CVec data(cfg.n_data);
  for (int i = 0; i < cfg.n_data; ++i) data[i] = hard[didx[i]];
  std::vector<std::uint8_t> bits = qpsk.demap_points(data);
  out.insert(out.end(), bits.begin(), bits.end());
}

int psdu_symbol_count(const CVec& stream, int start, const WlanConfig& cfg) {
  long avail = stream.size() - start - 400;
  if (avail < 0) throw SyncError("stream has no room for PSDU symbols");
  return static_cast<int>(avail / cfg.psdu_symbol_len());
}

}  // namespace

WdsFrame build_frame(const WlanConfig& cfg, const Schedule& sched,
                     const std::vector<std::uint8_t>& bits) {
  const Constellation& qpsk = Constellation::qpsk();
  const int bits_per_symbol = cfg.n_data * qpsk.bits_per_symbol();
  if (static_cast<long>(bits.size()) != static_cast<long>(bits_per_symbol) * sched.size())
    throw std::invalid_argument("build_frame: bit count does not match the schedule");
  WdsFrame frame;
  frame.schedule = sched;
  frame.payload_bits = bits;
  frame.preamble_len = static_cast<int>(preamble().size());
  frame.samples.resize(frame.preamble_len +
                       static_cast<long>(sched.size()) * cfg.psdu_symbol_len());
  frame.samples.head(frame.preamble_len) = preamble();
  for (int j = 0; j < sched.size(); ++j) {
    std::vector<std::uint8_t> chunk(bits.begin() + static_cast<long>(j) * bits_per_symbol,
                                    bits.begin() + static_cast<long>(j + 1) * bits_per_symbol);
    CVec occ = occupied_vector(cfg, qpsk.map_bits(chunk), j);
    CVec x = modulate(cfg.sefdm_for(sched.alpha(j)), occ);
    long off = frame.preamble_len + static_cast<long>(j) * cfg.psdu_symbol_len();
    frame.samples.segment(off, cfg.cp_len) = x.tail(cfg.cp_len);
    frame.samples.segment(off + cfg.cp_len, cfg.fft_size) = x;
  }
  return frame;
}

std::vector<std::uint8_t> legit_receive(const CVec& stream, const WlanConfig& cfg,
                                        const Schedule& sched, RxOptions opts) {
  FrontEnd fe = front_end(stream, cfg, opts);
  if (psdu_symbol_count(stream, fe.start, cfg) < sched.size())
    throw SyncError("stream shorter than the scheduled PSDU");
  std::vector<SefdmConfig> scfgs;
  scfgs.reserve(sched.size());
  for (int j = 0; j < sched.size(); ++j) scfgs.push_back(cfg.sefdm_for(sched.alpha(j)));
  std::vector<CVec> rs = frame_statistics(cfg, scfgs, stream, fe);
  return detect_psdu(cfg, scfgs, rs);
}

std::vector<std::uint8_t> eve_scenario1_receive(const CVec& stream,
                                                const WlanConfig& cfg,
                                                RxOptions opts) {
  const Constellation& qpsk = Constellation::qpsk();
  FrontEnd fe = front_end(stream, cfg, opts);
  int n_sym = psdu_symbol_count(stream, fe.start, cfg);
  std::vector<SefdmConfig> scfgs(n_sym, cfg.sefdm_for(1.0));
  std::vector<CVec> rs = frame_statistics(cfg, scfgs, stream, fe);
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<size_t>(n_sym) * cfg.n_data * 2);
  for (int j = 0; j < n_sym; ++j) {
    DetectorResult det = detect_mf(rs[j], qpsk);
    append_data_bits(cfg, det.hard_symbols, out);
  }
  return out;
}

Scenario2Result eve_scenario2_receive(const CVec& stream, const WlanConfig& cfg,
                                      const BcfPattern& pattern,
                                      const SymbolClassifier& classifier,
                                      const Schedule& true_sched, RxOptions opts) {
  pattern.validate();
  FrontEnd fe = front_end(stream, cfg, opts);
  int n_sym = std::min(psdu_symbol_count(stream, fe.start, cfg), true_sched.size());
  Scenario2Result res;
  res.confusion = ConfusionMatrix::zero(pattern.n_classes());
  res.bits.reserve(static_cast<size_t>(n_sym) * cfg.n_data * 2);
  std::vector<SefdmConfig> scfgs;
  scfgs.reserve(n_sym);
  for (int j = 0; j < n_sym; ++j) {
    long off = fe.start + 400 + static_cast<long>(j) * cfg.psdu_symbol_len() + cfg.cp_len;
    int pred = classifier(stream.segment(off, cfg.fft_size));
    if (pred < 0 || pred >= pattern.n_classes())
      throw std::out_of_range("eve_scenario2_receive: predicted class out of range");
    res.confusion.counts(true_sched.class_indices[j], pred) += 1;
    scfgs.push_back(cfg.sefdm_for(pattern.alphas[pred]));
  }
  std::vector<CVec> rs = frame_statistics(cfg, scfgs, stream, fe);
  res.bits = detect_psdu(cfg, scfgs, rs);
  return res;
}

Scenario2Result eve_scenario2_receive(const CVec& stream, const WlanConfig& cfg,
                                      const EcocModel& model, const WaveletBank& bank,
                                      const BcfPattern& pattern,
                                      const Schedule& true_sched, RxOptions opts) {
  if (bank.signal_len != cfg.fft_size)
    throw std::invalid_argument("eve_scenario2_receive: wavelet bank length mismatch");
  return eve_scenario2_receive(
      stream, cfg, pattern,
      [&](const CVec& y) { return predict(model, y, bank); }, true_sched, opts);
}

double ber(const std::vector<std::uint8_t>& tx, const std::vector<std::uint8_t>& rx) {
  if (tx.size() != rx.size()) throw std::invalid_argument("ber: length mismatch");
  if (tx.empty()) return 0.0;
  long errors = 0;
  for (size_t i = 0; i < tx.size(); ++i) errors += (tx[i] != rx[i]) ? 1 : 0;
  return static_cast<double>(errors) / tx.size();
}

void save_iq(const std::string& path, const CVec& samples) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_iq: cannot open " + path);
  for (int i = 0; i < samples.size(); ++i) {
    double iq[2] = {samples[i].real(), samples[i].imag()};
    if (std::fwrite(iq, sizeof(double), 2, f) != 2) {
      std::fclose(f);
      throw std::runtime_error("save_iq: short write to " + path);
    }
  }
  std::fclose(f);
}

CVec load_iq(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("load_iq: cannot open " + path);
  std::fseek(f, 0, SEEK_END);
  long bytes = std::ftell(f);
  std::fseek(f, 0, SEEK_SET);
  if (bytes % (2 * static_cast<long>(sizeof(double))) != 0) {
    std::fclose(f);
    throw std::runtime_error("load_iq: truncated I/Q file " + path);
  }
  long n = bytes / (2 * sizeof(double));
  CVec out(n);
  for (long i = 0; i < n; ++i) {
    double iq[2];
    if (std::fread(iq, sizeof(double), 2, f) != 2) {
      std::fclose(f);
      throw std::runtime_error("load_iq: short read from " + path);
    }
    out[i] = cxd(iq[0], iq[1]);
  }
  std::fclose(f);
  return out;
}

}  // namespace wds
