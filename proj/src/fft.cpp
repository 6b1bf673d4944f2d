#include "gp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace gp::fft {

namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int dim, int n, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(dim, n, sign);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  // UNALIGNED lets one plan serve any caller buffer via the new-array API.
  int dims[3] = {n, n, n};
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  fftw_complex* dummy = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_dft(dim, dims, dummy, dummy, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(dummy);
  plan_cache.emplace(key, p);
  return p;
}

}  // namespace

void transform(int dim, int n, std::complex<double>* data, int sign) {
  fftw_plan p = get_plan(dim, n, sign);
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, d, d);
}

}  // namespace gp::fft
