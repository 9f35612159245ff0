#include "fft.hh"

#include <fftw3.h>

#include <array>
#include <cstring>
#include <map>
#include <mutex>

#include "errors.hh"

namespace sh::fft {
namespace {

struct PlanKey {
  int ndim;
  std::array<long, 3> dims;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (ndim != o.ndim) return ndim < o.ndim;
    if (dims != o.dims) return dims < o.dims;
    return sign < o.sign;
  }
};

// Plans execute on an owned fftw-aligned buffer; callers' data is copied
// through it. Planning and the cache are serialized; fftw_execute on a
// cached plan always runs on the buffer the plan was created with.
struct CachedPlan {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  std::size_t count = 0;
};

std::mutex cache_mutex;
std::map<PlanKey, CachedPlan>& cache() {
  static std::map<PlanKey, CachedPlan> c;
  return c;
}

}  // namespace

void transform(int ndim, const long* dims, std::complex<double>* data, int sign) {
  require(ndim >= 1 && ndim <= 3, ErrorCode::invalid_argument, "fft: rank must be 1..3");
  require(sign == -1 || sign == 1, ErrorCode::invalid_argument, "fft: sign must be +-1");
  std::size_t count = 1;
  PlanKey key{ndim, {1, 1, 1}, sign};
  int idims[3];
  for (int d = 0; d < ndim; ++d) {
    key.dims[d] = dims[d];
    idims[d] = static_cast<int>(dims[d]);
    count *= static_cast<std::size_t>(dims[d]);
  }

  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& entry = cache()[key];
  if (entry.plan == nullptr) {
    entry.buf = fftw_alloc_complex(count);
    require(entry.buf != nullptr, ErrorCode::internal, "fft: allocation failed");
    entry.count = count;
    entry.plan = fftw_plan_dft(ndim, idims, entry.buf, entry.buf,
                               sign == -1 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    require(entry.plan != nullptr, ErrorCode::internal, "fft: planning failed");
  }
  std::memcpy(entry.buf, static_cast<const void*>(data), count * sizeof(fftw_complex));
  fftw_execute(entry.plan);
  std::memcpy(static_cast<void*>(data), entry.buf, count * sizeof(fftw_complex));
}

}  // namespace sh::fft
