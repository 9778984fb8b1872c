#include "ncsq/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace ncsq::kernels {
namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* resolve(const char* name) {
  std::string s = name ? name : "auto";
  if (s == "scalar") return &scalar_ops();
  if (s == "avx2") {
    const Ops* v = avx2_ops();
    if (!v) throw std::runtime_error("NCSQ_SIMD=avx2 requested but this CPU lacks AVX2");
    return v;
  }
  if (s == "auto" || s.empty()) {
    const Ops* v = avx2_ops();
    return v ? v : &scalar_ops();
  }
  throw std::runtime_error("unknown SIMD selection '" + s + "' (use scalar|avx2|auto)");
}

}  // namespace

const Ops& active() {
  const Ops* p = g_active.load(std::memory_order_acquire);
  if (!p) {
    p = resolve(std::getenv("NCSQ_SIMD"));
    g_active.store(p, std::memory_order_release);
  }
  return *p;
}

void select(const char* name) {
  g_active.store(resolve(name), std::memory_order_release);
}

}  // namespace ncsq::kernels
