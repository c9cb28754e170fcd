#pragma once

#include <string>
#include <utility>
#include <vector>

#include "complab/core.hpp"
#include "complab/symbols.hpp"
#include "complab/weights.hpp"

namespace complab {

/// Finite section of a composition operator (or a linear combination) on
/// the monomial orthonormal basis e_k = z^k / sqrt(m_k) of the weighted
/// Hilbert space: entries[m][n] = c_{n,m} sqrt(m_m / m_n) where c_{n,m}
/// is the degree-m coefficient of phi^n.
struct TruncatedOperator {
  int dim = 0;
  std::vector<cpx> entries;  // row-major, dim x dim
  std::string weight_spec;
  std::vector<std::pair<cpx, std::string>> provenance;  // (scalar, symbol)

  cpx at(int row, int col) const {
    return entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(dim) +
                   static_cast<std::size_t>(col)];
  }
  cpx& at(int row, int col) {
    return entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(dim) +
                   static_cast<std::size_t>(col)];
  }
};

TruncatedOperator composition_matrix(const SelfMap& phi, const RadialWeight& w,
                                     int dim);

TruncatedOperator combo_matrix(
    const std::vector<std::pair<cpx, SelfMap>>& terms, const RadialWeight& w,
    int dim);

/// Largest singular value.
double op_norm(const TruncatedOperator& op);

/// ||(I - P_M) T|| for each cut M: the operator norm with the first M rows
/// zeroed, the finite-section stand-in for composing with a tail
/// projection. Nonincreasing in M.
std::vector<double> essnorm_proxy(const TruncatedOperator& op,
                                  const std::vector<int>& cuts);

}  // namespace complab
