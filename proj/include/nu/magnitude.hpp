#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace nu {

/// Finite-impulse-response description of a causal LTI interconnection with
/// n inputs and n outputs. Entries are keyed by 0-based (row, column); a
/// missing entry is the zero response.
class FirSystem {
 public:
  explicit FirSystem(int n);

  /// Sets the impulse response of channel (i, j), 0-based. Throws
  /// ValidationError on out-of-range indices or non-finite coefficients.
  void set_impulse(int i, int j, std::vector<double> impulse);

  int n() const { return n_; }
  const std::map<std::pair<int, int>, std::vector<double>>& entries() const {
    return entries_;
  }

 private:
  int n_;
  std::map<std::pair<int, int>, std::vector<double>> entries_;
};

/// Dense nonnegative square matrix, row-major. Every instance satisfies
/// n >= 1 and finite m_ij >= 0.
class MagnitudeMatrix {
 public:
  /// n x n zero matrix.
  explicit MagnitudeMatrix(int n);
  /// Takes ownership of row-major values; validates shape and sign.
  MagnitudeMatrix(int n, std::vector<double> values);
  MagnitudeMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static MagnitudeMatrix identity(int n);

  int n() const { return n_; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  /// Writes one entry; rejects negative or non-finite values.
  void set(int i, int j, double value);
  std::span<const double> row(int i) const {
    return {values_.data() + static_cast<std::size_t>(i) * n_,
            static_cast<std::size_t>(n_)};
  }
  const std::vector<double>& values() const { return values_; }

  /// Principal submatrix on the given 0-based indices, in the given order.
  MagnitudeMatrix principal_submatrix(std::span<const int> indices) const;
  MagnitudeMatrix scaled(double a) const;

  friend bool operator==(const MagnitudeMatrix&,
                         const MagnitudeMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_;
  std::vector<double> values_;
};

/// Per-channel peak magnitudes.
class MagnitudeVector {
 public:
  explicit MagnitudeVector(std::vector<double> v);
  std::span<const double> values() const { return v_; }
  std::size_t size() const { return v_.size(); }

 private:
  std::vector<double> v_;
};

/// M_ij = sum_t |h_ij(t)|, summed in index order.
MagnitudeMatrix magnitude_matrix(const FirSystem& sys);

/// l-infinity induced norm: the maximum row sum.
double linf_induced_norm(const MagnitudeMatrix& m);

/// 1 -> infinity induced norm: the maximum entry.
double one_to_inf_norm(const MagnitudeMatrix& m);

/// infinity -> 1 induced norm of a diagonal matrix: the sum of its entries.
double diag_inf_to_one_norm(const MagnitudeVector& delta);

}  // namespace nu
