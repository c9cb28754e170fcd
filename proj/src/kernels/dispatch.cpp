#include <cstdlib>
#include <stdexcept>
#include <string>

#include "complab/simd.hpp"

namespace complab::simd {

const Kernels& scalar_kernels();
const Kernels* avx2_kernels();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Lane detect_lane() {
  const char* env = std::getenv("COMPLAB_SIMD");
  std::string req = env ? env : "auto";
  if (req == "scalar") return Lane::scalar;
  if (req == "avx2") {
    if (!lane_available(Lane::avx2)) {
      throw std::runtime_error("COMPLAB_SIMD=avx2 requested but AVX2 is unavailable");
    }
    return Lane::avx2;
  }
  if (req != "auto" && !req.empty()) {
    throw std::runtime_error("unknown COMPLAB_SIMD value: " + req);
  }
  return lane_available(Lane::avx2) ? Lane::avx2 : Lane::scalar;
}

}  // namespace

bool lane_available(Lane lane) {
  switch (lane) {
    case Lane::scalar:
      return true;
    case Lane::avx2:
      return avx2_kernels() != nullptr && cpu_has_avx2();
  }
  return false;
}

Lane active_lane() {
  static const Lane lane = detect_lane();
  return lane;
}

const char* lane_name(Lane lane) {
  return lane == Lane::avx2 ? "avx2" : "scalar";
}

const Kernels& kernels(Lane lane) {
  if (lane == Lane::avx2) {
    const Kernels* k = avx2_kernels();
    if (!k || !cpu_has_avx2()) {
      throw std::runtime_error("AVX2 kernels unavailable on this host");
    }
    return *k;
  }
  return scalar_kernels();
}

const Kernels& kernels() { return kernels(active_lane()); }

}  // namespace complab::simd
