#include "nu/magnitude.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nu/error.hpp"

namespace nu {
namespace {

void check_entry(double value, int i, int j) {
  if (!std::isfinite(value)) {
    throw ValidationError("entry (" + std::to_string(i + 1) + ", " +
                          std::to_string(j + 1) + ") is not finite");
  }
  if (value < 0.0) {
    throw ValidationError("entry (" + std::to_string(i + 1) + ", " +
                          std::to_string(j + 1) + ") is negative");
  }
}

}  // namespace

FirSystem::FirSystem(int n) : n_(n) {
  if (n < 1) throw ValidationError("system dimension must be positive");
}

void FirSystem::set_impulse(int i, int j, std::vector<double> impulse) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw ValidationError("impulse index (" + std::to_string(i + 1) + ", " +
                          std::to_string(j + 1) + ") out of range for n = " +
                          std::to_string(n_));
  }
  for (double h : impulse) {
    if (!std::isfinite(h)) {
      throw ValidationError("impulse (" + std::to_string(i + 1) + ", " +
                            std::to_string(j + 1) +
                            ") has a non-finite coefficient");
    }
  }
  entries_[{i, j}] = std::move(impulse);
}

MagnitudeMatrix::MagnitudeMatrix(int n) : n_(n) {
  if (n < 1) throw ValidationError("matrix dimension must be positive");
  values_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

MagnitudeMatrix::MagnitudeMatrix(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (n < 1) throw ValidationError("matrix dimension must be positive");
  if (values_.size() != static_cast<std::size_t>(n) * n) {
    throw ValidationError("expected " + std::to_string(n * n) +
                          " entries, got " + std::to_string(values_.size()));
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) check_entry(values_[index(i, j)], i, j);
  }
}

MagnitudeMatrix::MagnitudeMatrix(
    std::initializer_list<std::initializer_list<double>> rows)
    : n_(static_cast<int>(rows.size())) {
  if (n_ < 1) throw ValidationError("matrix dimension must be positive");
  values_.reserve(static_cast<std::size_t>(n_) * n_);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) {
      throw ValidationError("row " + std::to_string(i + 1) + " has " +
                            std::to_string(row.size()) + " entries, expected " +
                            std::to_string(n_));
    }
    int j = 0;
    for (double v : row) {
      check_entry(v, i, j++);
      values_.push_back(v);
    }
    ++i;
  }
}

MagnitudeMatrix MagnitudeMatrix::identity(int n) {
  MagnitudeMatrix m(n);
  for (int i = 0; i < n; ++i) m.values_[m.index(i, i)] = 1.0;
  return m;
}

void MagnitudeMatrix::set(int i, int j, double value) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw ValidationError("matrix index out of range");
  }
  check_entry(value, i, j);
  values_[index(i, j)] = value;
}

MagnitudeMatrix MagnitudeMatrix::principal_submatrix(
    std::span<const int> indices) const {
  const int k = static_cast<int>(indices.size());
  MagnitudeMatrix sub(k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      sub.values_[sub.index(a, b)] = (*this)(indices[a], indices[b]);
    }
  }
  return sub;
}

MagnitudeMatrix MagnitudeMatrix::scaled(double a) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= a;
  return MagnitudeMatrix(n_, std::move(v));
}

MagnitudeVector::MagnitudeVector(std::vector<double> v) : v_(std::move(v)) {
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (!std::isfinite(v_[i]) || v_[i] < 0.0) {
      throw ValidationError("magnitude vector entry " + std::to_string(i + 1) +
                            " must be finite and nonnegative");
    }
  }
}

MagnitudeMatrix magnitude_matrix(const FirSystem& sys) {
  MagnitudeMatrix m(sys.n());
  for (const auto& [ij, impulse] : sys.entries()) {
    double sum = 0.0;
    for (double h : impulse) sum += std::abs(h);
    m.set(ij.first, ij.second, sum);
  }
  return m;
}

double linf_induced_norm(const MagnitudeMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.n(); ++i) {
    double sum = 0.0;
    for (double v : m.row(i)) sum += v;
    best = std::max(best, sum);
  }
  return best;
}

double one_to_inf_norm(const MagnitudeMatrix& m) {
  return *std::max_element(m.values().begin(), m.values().end());
}

double diag_inf_to_one_norm(const MagnitudeVector& delta) {
  double sum = 0.0;
  for (double v : delta.values()) sum += v;
  return sum;
}

}  // namespace nu
