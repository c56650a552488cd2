#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "bieber/matrix.hpp"

namespace bieber {

enum class SmithTransforms {
  None,          ///< diagonal only
  Forward,       ///< U and V
  WithInverses,  ///< U, V and their inverses
};

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ..., d_i >= 0.
template <class T>
struct SmithForm {
  Matrix<T> D;
  Matrix<T> U;
  Matrix<T> V;
  Matrix<T> U_inv;
  Matrix<T> V_inv;

  std::vector<T> diagonal() const {
    std::vector<T> out;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) out.push_back(D(i, i));
    return out;
  }
  std::size_t rank() const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
      if (D(i, i) != 0) ++r;
    return r;
  }
};

namespace detail {

template <class T>
class SmithReducer {
 public:
  SmithReducer(Matrix<T> a, SmithTransforms mode)
      : a_(std::move(a)), forward_(mode != SmithTransforms::None), inverse_(mode == SmithTransforms::WithInverses) {
    if (forward_) {
      u_ = Matrix<T>::identity(a_.rows());
      v_ = Matrix<T>::identity(a_.cols());
    }
    if (inverse_) {
      u_inv_ = Matrix<T>::identity(a_.rows());
      v_inv_ = Matrix<T>::identity(a_.cols());
    }
  }

  SmithForm<T> run() {
    const std::size_t steps = std::min(a_.rows(), a_.cols());
    for (std::size_t t = 0; t < steps; ++t) {
      if (!reduce_at(t)) break;
      if (a_(t, t) < 0) negate_row(t);
    }
    return SmithForm<T>{std::move(a_), std::move(u_), std::move(v_), std::move(u_inv_), std::move(v_inv_)};
  }

 private:
  // Returns false when the trailing submatrix is entirely zero.
  bool reduce_at(std::size_t t) {
    for (;;) {
      auto pivot = least_pivot(t);
      if (!pivot) return false;
      swap_rows(t, pivot->first);
      swap_cols(t, pivot->second);

      bool clear = true;
      for (std::size_t i = t + 1; i < a_.rows(); ++i) {
        if (a_(i, t) == 0) continue;
        add_row(i, t, T(-(a_(i, t) / a_(t, t))));
        if (a_(i, t) != 0) clear = false;
      }
      for (std::size_t j = t + 1; j < a_.cols(); ++j) {
        if (a_(t, j) == 0) continue;
        add_col(j, t, T(-(a_(t, j) / a_(t, t))));
        if (a_(t, j) != 0) clear = false;
      }
      if (!clear) continue;

      // Enforce divisibility of the remaining block by the pivot.
      bool divisible = true;
      for (std::size_t i = t + 1; i < a_.rows() && divisible; ++i)
        for (std::size_t j = t + 1; j < a_.cols(); ++j)
          if (a_(i, j) % a_(t, t) != 0) {
            add_row(t, i, T(1));
            divisible = false;
            break;
          }
      if (divisible) return true;
    }
  }

  std::optional<std::pair<std::size_t, std::size_t>> least_pivot(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    T best_abs(0);
    for (std::size_t i = t; i < a_.rows(); ++i)
      for (std::size_t j = t; j < a_.cols(); ++j) {
        if (a_(i, j) == 0) continue;
        T mag = abs_value(a_(i, j));
        if (!best || mag < best_abs) {
          best = {i, j};
          best_abs = mag;
          if (best_abs == 1) return best;
        }
      }
    return best;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    a_.swap_rows(a, b);
    if (forward_) u_.swap_rows(a, b);
    if (inverse_) u_inv_.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    a_.swap_cols(a, b);
    if (forward_) v_.swap_cols(a, b);
    if (inverse_) v_inv_.swap_rows(a, b);
  }
  // row[dst] += c * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& c) {
    a_.add_row_multiple(dst, src, c);
    if (forward_) u_.add_row_multiple(dst, src, c);
    if (inverse_) u_inv_.add_col_multiple(src, dst, T(-c));
  }
  // col[dst] += c * col[src]
  void add_col(std::size_t dst, std::size_t src, const T& c) {
    a_.add_col_multiple(dst, src, c);
    if (forward_) v_.add_col_multiple(dst, src, c);
    if (inverse_) v_inv_.add_row_multiple(src, dst, T(-c));
  }
  void negate_row(std::size_t i) {
    a_.negate_row(i);
    if (forward_) u_.negate_row(i);
    if (inverse_) u_inv_.negate_col(i);
  }

  Matrix<T> a_;
  Matrix<T> u_, v_, u_inv_, v_inv_;
  bool forward_;
  bool inverse_;
};

}  // namespace detail

/// Smith normal form by elementary integer operations, pivoting on the entry
/// of least absolute value. Deterministic for a given input.
template <class T>
SmithForm<T> smith_normal_form(Matrix<T> a, SmithTransforms mode = SmithTransforms::Forward) {
  return detail::SmithReducer<T>(std::move(a), mode).run();
}

/// Rank of an integer matrix over the rationals.
template <class T>
std::size_t integer_rank(const Matrix<T>& a) {
  return smith_normal_form(a, SmithTransforms::None).rank();
}

}  // namespace bieber
