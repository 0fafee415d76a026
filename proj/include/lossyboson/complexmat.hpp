// Copyright 2026 The lossyboson Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex matrices, unitarity, the U_{S,T} submatrix prescription and
// permanent evaluation.
//
// Matrix convention: input mode j feeds column j, output mode i reads row i,
// so a creation operator transforms as a_j^dag -> sum_i U(i, j) a_i^dag.
#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/random.hpp"

namespace lossyboson {

using cplx = std::complex<double>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {
    if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
  }

  static CMatrix identity(int n) {
    CMatrix id(n, n);
    for (int i = 0; i < n; ++i) id(i, i) = 1.0;
    return id;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const cplx& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  CMatrix transpose() const {
    CMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    CMatrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  double max_abs_diff(const CMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) d = std::max(d, std::abs(data_[i] - other.data_[i]));
    return d;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

// max |(A^dag A - I)_{ij}|
inline double unitarity_defect(const CMatrix& a) {
  if (!a.square()) throw DimensionError("unitarity check needs a square matrix");
  return (a.adjoint() * a).max_abs_diff(CMatrix::identity(a.rows()));
}

class UnitaryMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  // Throws RangeError if `m` is not unitary within kTolerance. Nothing is
  // renormalized.
  explicit UnitaryMatrix(CMatrix m) : m_(std::move(m)) {
    if (!m_.square() || m_.rows() < 1) throw DimensionError("unitary must be square with dim >= 1");
    const double defect = unitarity_defect(m_);
    if (!(defect < kTolerance))
      throw RangeError("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }

  static UnitaryMatrix identity(int m) { return UnitaryMatrix(CMatrix::identity(m)); }

  // Haar-random unitary: Gram-Schmidt on a complex Ginibre matrix.
  static UnitaryMatrix random(int m, std::uint64_t seed) {
    if (m < 1) throw DimensionError("unitary dimension must be >= 1");
    Rng rng(seed);
    CMatrix g(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) g(r, c) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
    for (int c = 0; c < m; ++c) {
      // Two passes of modified Gram-Schmidt keep the defect near 1e-15.
      for (int pass = 0; pass < 2; ++pass)
        for (int p = 0; p < c; ++p) {
          cplx proj{};
          for (int r = 0; r < m; ++r) proj += std::conj(g(r, p)) * g(r, c);
          for (int r = 0; r < m; ++r) g(r, c) -= proj * g(r, p);
        }
      double norm = 0.0;
      for (int r = 0; r < m; ++r) norm += std::norm(g(r, c));
      norm = std::sqrt(norm);
      for (int r = 0; r < m; ++r) g(r, c) /= norm;
    }
    return UnitaryMatrix(std::move(g));
  }

  int dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  const cplx& operator()(int r, int c) const { return m_(r, c); }

 private:
  CMatrix m_;
};

// ---------------------------------------------------------------------------

// Instrumentation shared by the permanent routines and the sampler.
struct OpCounter {
  std::uint64_t permanents = 0;   // permanent evaluations
  std::uint64_t terms = 0;        // expansion terms visited
  std::uint64_t complex_ops = 0;  // complex multiply/add operations
};

// Cascade (binary-tree) summation: the value held at level k is the sum of a
// block of 2^k consecutive inputs, so the reduction tree is fixed by the input
// order alone.
class PairwiseSum {
 public:
  void add(cplx x) {
    std::size_t k = 0;
    while (occupied_[k]) {
      x = levels_[k] + x;
      occupied_[k] = false;
      ++k;
    }
    levels_[k] = x;
    occupied_[k] = true;
  }

  cplx total() const {
    cplx t{};
    for (std::size_t k = 0; k < levels_.size(); ++k)
      if (occupied_[k]) t = levels_[k] + t;
    return t;
  }

 private:
  std::array<cplx, 65> levels_{};
  std::array<bool, 65> occupied_{};
};

// ---------------------------------------------------------------------------

// U_{S,T}: s_j copies of column j, then t_i copies of row i.
inline CMatrix build_submatrix(const CMatrix& u, const OccupationVector& s, const OccupationVector& t) {
  if (!u.square()) throw DimensionError("build_submatrix needs a square matrix");
  if (s.modes() != u.cols() || t.modes() != u.rows())
    throw DimensionError("occupation vector length does not match matrix dimension");
  if (s.photons() != t.photons()) throw DimensionError("input and output photon numbers differ");
  const int n = s.photons();
  std::vector<int> cols, rows;
  for (int j = 0; j < s.modes(); ++j)
    for (int c = 0; c < s[j]; ++c) cols.push_back(j);
  for (int i = 0; i < t.modes(); ++i)
    for (int c = 0; c < t[i]; ++c) rows.push_back(i);
  CMatrix out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = u(rows[a], cols[b]);
  return out;
}

// U_{S,r}: columns from S, row r_k (1-based) for the k-th row.
inline CMatrix build_submatrix(const CMatrix& u, const OccupationVector& s, const ModeAssignment& r) {
  if (!u.square()) throw DimensionError("build_submatrix needs a square matrix");
  if (s.modes() != u.cols()) throw DimensionError("occupation vector length does not match matrix dimension");
  if (static_cast<int>(r.size()) != s.photons()) throw DimensionError("assignment length differs from photon number");
  const int n = s.photons();
  std::vector<int> cols;
  for (int j = 0; j < s.modes(); ++j)
    for (int c = 0; c < s[j]; ++c) cols.push_back(j);
  CMatrix out(n, n);
  for (int a = 0; a < n; ++a) {
    if (r[a] > u.rows()) throw RangeError("mode assignment entry exceeds matrix dimension");
    for (int b = 0; b < n; ++b) out(a, b) = u(r[a] - 1, cols[b]);
  }
  return out;
}

inline CMatrix build_submatrix(const UnitaryMatrix& u, const OccupationVector& s, const OccupationVector& t) {
  return build_submatrix(u.matrix(), s, t);
}
inline CMatrix build_submatrix(const UnitaryMatrix& u, const OccupationVector& s, const ModeAssignment& r) {
  return build_submatrix(u.matrix(), s, r);
}

inline constexpr int kDefaultPermanentLimit = 30;

// Glynn's formula walked in Gray-code order:
//   Per(M) = 2^{1-n} sum_{delta, delta_0 = +1} (prod_k delta_k) prod_j sum_i delta_i M_ij.
// Each Gray step flips one delta and updates the n column sums in O(n).
inline cplx permanent_exact(const CMatrix& m, OpCounter* counter = nullptr,
                            int max_size = kDefaultPermanentLimit) {
  if (!m.square()) throw DimensionError("permanent needs a square matrix");
  const int n = m.rows();
  if (n > max_size) throw LimitError("permanent size " + std::to_string(n) + " exceeds limit");
  if (counter) ++counter->permanents;
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);

  std::vector<cplx> colsum(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    cplx acc{};
    for (int i = 0; i < n; ++i) acc += m(i, j);
    colsum[static_cast<std::size_t>(j)] = acc;
  }
  std::vector<int> delta(static_cast<std::size_t>(n), 1);
  std::uint64_t ops = static_cast<std::uint64_t>(n) * n;

  PairwiseSum sum;
  auto product = [&] {
    cplx p = colsum[0];
    for (int j = 1; j < n; ++j) p *= colsum[static_cast<std::size_t>(j)];
    return p;
  };
  int sign = 1;
  sum.add(product());
  ops += static_cast<std::uint64_t>(n);

  const std::uint64_t steps = std::uint64_t{1} << (n - 1);
  for (std::uint64_t g = 1; g < steps; ++g) {
    // Row whose sign flips: 1 + index of the lowest set bit of g.
    const int row = 1 + std::countr_zero(g);
    const double twice = 2.0 * delta[static_cast<std::size_t>(row)];
    for (int j = 0; j < n; ++j) colsum[static_cast<std::size_t>(j)] -= twice * m(row, j);
    delta[static_cast<std::size_t>(row)] = -delta[static_cast<std::size_t>(row)];
    sign = -sign;
    const cplx p = product();
    sum.add(sign > 0 ? p : -p);
    ops += 2 * static_cast<std::uint64_t>(n);
  }
  if (counter) {
    counter->terms += steps;
    counter->complex_ops += ops;
  }
  return sum.total() / std::ldexp(1.0, n - 1);
}

namespace detail {

inline cplx int_pow(cplx base, int e, std::uint64_t& ops) {
  cplx r = 1.0;
  while (e > 0) {
    if (e & 1) {
      r *= base;
      ++ops;
    }
    e >>= 1;
    if (e) {
      base *= base;
      ++ops;
    }
  }
  return r;
}

// Repeated-column expansion with columns grouped by `cols` occupations and rows
// by `rows` occupations; at(i, j) reads the entry for output i, input j.
template <class Access>
cplx repeated_expansion(Access at, const OccupationVector& cols, const OccupationVector& rows,
                        OpCounter* counter) {
  const int n = cols.photons();
  std::vector<int> in_modes, s;
  for (int j = 0; j < cols.modes(); ++j)
    if (cols[j] > 0) {
      in_modes.push_back(j);
      s.push_back(cols[j]);
    }
  std::vector<int> out_modes, t;
  for (int i = 0; i < rows.modes(); ++i)
    if (rows[i] > 0) {
      out_modes.push_back(i);
      t.push_back(rows[i]);
    }
  const std::size_t ka = in_modes.size();
  const std::size_t kb = out_modes.size();

  // v_j starts at 0, so the coefficient of column j is s_j.
  std::vector<cplx> rowsum(kb);
  for (std::size_t b = 0; b < kb; ++b) {
    cplx acc{};
    for (std::size_t a = 0; a < ka; ++a) acc += static_cast<double>(s[a]) * at(out_modes[b], in_modes[a]);
    rowsum[b] = acc;
  }
  std::uint64_t ops = ka * kb;

  std::vector<int> v(ka, 0), dir(ka, 1);
  std::uint64_t weight = 1;  // prod_j C(s_j, v_j), exact
  int parity = 0;            // N_v mod 2
  PairwiseSum sum;
  std::uint64_t terms = 0;

  for (;;) {
    cplx p = 1.0;
    for (std::size_t b = 0; b < kb; ++b) p *= int_pow(rowsum[b], t[b], ops);
    p *= static_cast<double>(weight);
    sum.add(parity ? -p : p);
    ++terms;

    // Reflected mixed-radix Gray code: exactly one v_j moves by +-1.
    std::size_t j = 0;
    for (; j < ka; ++j) {
      const int nv = v[j] + dir[j];
      if (nv >= 0 && nv <= s[j]) {
        const int old = v[j];
        v[j] = nv;
        // C(s, v+1) = C(s, v) (s - v) / (v + 1); exact when multiplied first.
        unsigned __int128 w = weight;
        if (nv > old)
          w = w * static_cast<unsigned>(s[j] - old) / static_cast<unsigned>(old + 1);
        else
          w = w * static_cast<unsigned>(nv + 1) / static_cast<unsigned>(s[j] - nv);
        weight = static_cast<std::uint64_t>(w);
        parity ^= 1;
        const double delta = -2.0 * (nv - old);
        for (std::size_t b = 0; b < kb; ++b) rowsum[b] += delta * at(out_modes[b], in_modes[j]);
        ops += kb;
        break;
      }
      dir[j] = -dir[j];
    }
    if (j == ka) break;
  }
  if (counter) {
    ++counter->permanents;
    counter->terms += terms;
    counter->complex_ops += ops;
  }
  return sum.total() / std::ldexp(1.0, n);
}

}  // namespace detail

// Per(U_{S,T}) via the binned Glynn expansion
//   2^{-n} sum_{0<=v<=S} (-1)^{|v|} prod_j C(s_j, v_j) prod_i [sum_j (s_j - 2 v_j) U_ij]^{t_i}.
// The sum runs over whichever of S and T has fewer sub-vectors; transposing
// U and swapping the roles of S and T leaves the permanent unchanged.
inline cplx permanent_repeated(const CMatrix& u, const OccupationVector& s, const OccupationVector& t,
                               OpCounter* counter = nullptr) {
  if (!u.square()) throw DimensionError("permanent_repeated needs a square matrix");
  if (s.modes() != u.cols() || t.modes() != u.rows())
    throw DimensionError("occupation vector length does not match matrix dimension");
  if (s.photons() != t.photons()) throw DimensionError("input and output photon numbers differ");
  if (s.photons() > 62) throw LimitError("photon number too large for the binned expansion");
  if (s.photons() == 0) {
    if (counter) ++counter->permanents;
    return 1.0;
  }
  if (t.product_plus_one() < s.product_plus_one()) {
    return detail::repeated_expansion([&](int i, int j) { return u(j, i); }, t, s, counter);
  }
  return detail::repeated_expansion([&](int i, int j) { return u(i, j); }, s, t, counter);
}

inline cplx permanent_repeated(const UnitaryMatrix& u, const OccupationVector& s, const OccupationVector& t,
                               OpCounter* counter = nullptr) {
  return permanent_repeated(u.matrix(), s, t, counter);
}

// ---------------------------------------------------------------------------

struct CostModel {
  std::uint64_t tau_st = 0;      // min(prod(s+1), prod(t+1)) * alpha_S * alpha_T
  std::uint64_t tau_global = 0;  // prod(s+1) * alpha_S * n
  int alpha_s = 0;
  int alpha_t = 0;
};

inline CostModel cost_estimate(const OccupationVector& s, const OccupationVector& t) {
  if (s.photons() != t.photons()) throw DimensionError("input and output photon numbers differ");
  CostModel c;
  c.alpha_s = s.alpha();
  c.alpha_t = t.alpha();
  const std::uint64_t ps = s.product_plus_one();
  const std::uint64_t pt = t.product_plus_one();
  c.tau_st = std::min(ps, pt) * static_cast<std::uint64_t>(c.alpha_s) * static_cast<std::uint64_t>(c.alpha_t);
  c.tau_global = ps * static_cast<std::uint64_t>(c.alpha_s) * static_cast<std::uint64_t>(s.photons());
  return c;
}

// p_U(S -> T) = |Per(U_{S,T})|^2 / (prod s_i! prod t_i!)
inline double transition_probability(const UnitaryMatrix& u, const OccupationVector& s,
                                     const OccupationVector& t, OpCounter* counter = nullptr) {
  const cplx per = permanent_repeated(u, s, t, counter);
  return std::norm(per) / (product_of_factorials(s) * product_of_factorials(t));
}

}  // namespace lossyboson
