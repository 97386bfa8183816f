#include "wds/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace wds::fft {
namespace {

struct Plan {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  int n = 0;

  Plan(int size, int sign) : n(size) {
    in = fftw_alloc_complex(size);
    out = fftw_alloc_complex(size);
    plan = fftw_plan_dft_1d(size, in, out, sign, FFTW_ESTIMATE);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    if (plan) fftw_destroy_plan(plan);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

void make_planner_safe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { fftw_make_planner_thread_safe(); });
}

CVec execute(const CVec& x, int sign) {
  make_planner_safe_once();
  thread_local std::map<std::pair<int, int>, std::unique_ptr<Plan>> cache;
  auto key = std::make_pair(static_cast<int>(x.size()), sign);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<Plan>(key.first, sign)).first;
  Plan& p = *it->second;
  for (int i = 0; i < p.n; ++i) {
    p.in[i][0] = x[i].real();
    p.in[i][1] = x[i].imag();
  }
  fftw_execute(p.plan);
  CVec y(p.n);
  for (int i = 0; i < p.n; ++i) y[i] = cxd(p.out[i][0], p.out[i][1]);
  return y;
}

}  // namespace

CVec forward(const CVec& x) { return execute(x, FFTW_FORWARD); }
CVec inverse(const CVec& x) { return execute(x, FFTW_BACKWARD); }

}  // namespace wds::fft
