#include "complab/operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace complab {
namespace {

using Matrix = Eigen::MatrixXcd;

Matrix to_eigen(const TruncatedOperator& op) {
  Matrix m(op.dim, op.dim);
  for (int r = 0; r < op.dim; ++r) {
    for (int c = 0; c < op.dim; ++c) m(r, c) = op.at(r, c);
  }
  return m;
}

double sqrt_lambda_max(const Matrix& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram,
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed on a Gram matrix");
  }
  double lmax = solver.eigenvalues().maxCoeff();
  return std::sqrt(std::max(lmax, 0.0));
}

}  // namespace

TruncatedOperator composition_matrix(const SelfMap& phi, const RadialWeight& w,
                                     int dim) {
  phi.require_validated();
  if (dim < 1) throw std::invalid_argument("composition_matrix: dim must be >= 1");

  const std::vector<double> mom = w.moments(dim);
  std::vector<double> sq(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    sq[static_cast<std::size_t>(k)] = std::sqrt(mom[static_cast<std::size_t>(k)]);
  }
  const auto columns = taylor_power_table(phi, dim, dim - 1);

  TruncatedOperator op;
  op.dim = dim;
  op.entries.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim),
                    cpx(0.0));
  op.weight_spec = w.spec();
  op.provenance = {{cpx(1.0), phi.spec()}};
  for (int n = 0; n < dim; ++n) {
    const auto& col = columns[static_cast<std::size_t>(n)];
    for (int m = 0; m < dim; ++m) {
      op.at(m, n) = col[static_cast<std::size_t>(m)] *
                    (sq[static_cast<std::size_t>(m)] / sq[static_cast<std::size_t>(n)]);
    }
  }
  return op;
}

TruncatedOperator combo_matrix(
    const std::vector<std::pair<cpx, SelfMap>>& terms, const RadialWeight& w,
    int dim) {
  if (terms.empty()) {
    throw std::invalid_argument("combo_matrix: empty term list");
  }
  TruncatedOperator acc;
  acc.dim = dim;
  acc.entries.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim),
                     cpx(0.0));
  acc.weight_spec = w.spec();
  for (const auto& [lambda, phi] : terms) {
    TruncatedOperator part = composition_matrix(phi, w, dim);
    for (std::size_t i = 0; i < acc.entries.size(); ++i) {
      acc.entries[i] += lambda * part.entries[i];
    }
    acc.provenance.emplace_back(lambda, phi.spec());
  }
  return acc;
}

double op_norm(const TruncatedOperator& op) {
  Matrix a = to_eigen(op);
  return sqrt_lambda_max(a.adjoint() * a);
}

std::vector<double> essnorm_proxy(const TruncatedOperator& op,
                                  const std::vector<int>& cuts) {
  for (int m : cuts) {
    if (m < 0 || m >= op.dim) {
      throw std::invalid_argument("essnorm_proxy: cut must satisfy 0 <= M < dim");
    }
  }
  std::vector<int> order(cuts.begin(), cuts.end());
  std::sort(order.begin(), order.end(), std::greater<int>());

  Matrix a = to_eigen(op);
  Matrix gram = Matrix::Zero(op.dim, op.dim);
  int row = op.dim;  // rows in [cut, row) still need accumulating
  std::vector<std::pair<int, double>> results;
  for (int cut : order) {
    while (row > cut) {
      --row;
      gram += a.row(row).adjoint() * a.row(row);
    }
    results.emplace_back(cut, sqrt_lambda_max(gram));
  }
  std::vector<double> out(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    for (const auto& [cut, val] : results) {
      if (cut == cuts[i]) {
        out[i] = val;
        break;
      }
    }
  }
  return out;
}

}  // namespace complab
