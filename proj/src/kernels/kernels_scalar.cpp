#include "kernels_impl.hpp"

namespace complab::simd {

const Kernels& scalar_kernels() {
  static const Kernels k = detail::Impl<detail::VecScalar>::table();
  return k;
}

}  // namespace complab::simd
