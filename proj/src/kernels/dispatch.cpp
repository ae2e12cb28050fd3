#include <atomic>
#include <cstdlib>
#include <string>

#include "rgc/kernels.hpp"

namespace rgc::kernels {

#ifdef RGC_HAVE_AVX2
namespace detail {
const KernelTable& avx2_kernels();
}
#endif

const KernelTable* avx2_table() {
#ifdef RGC_HAVE_AVX2
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &detail::avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* resolve_default() {
  if (const char* env = std::getenv("RGC_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2_table()) return avx2_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{resolve_default()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) {
  if (name == "scalar") {
    current().store(&scalar_table(), std::memory_order_release);
    return true;
  }
  if (name == "avx2" && avx2_table()) {
    current().store(avx2_table(), std::memory_order_release);
    return true;
  }
  return false;
}

std::vector<std::string_view> available() {
  std::vector<std::string_view> out{"scalar"};
  if (avx2_table()) out.emplace_back("avx2");
  return out;
}

std::vector<double> to_soa(const std::vector<double>& row_major, std::size_t n, int dim) {
  std::vector<double> soa(row_major.size());
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < dim; ++a) soa[a * n + i] = row_major[i * dim + a];
  return soa;
}

}  // namespace rgc::kernels
