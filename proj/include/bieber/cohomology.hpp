#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bieber/abelian.hpp"
#include "bieber/arith.hpp"
#include "bieber/error.hpp"
#include "bieber/matrix.hpp"
#include "bieber/snf.hpp"

namespace bieber {

/// H^2(C_p, M) as an elementary abelian p-group together with the action
/// induced by the holonomy generator.
struct CohomologyResult {
  std::int64_t prime = 0;
  FinAbGroup group;
  ActionMatrix g_action;
  std::int64_t b_p = 0;
  /// Rank of the fixed sublattice of the order-p generator.
  std::int64_t fixed_rank = 0;
};

struct BlockCensus {
  std::int64_t prime = 0;
  std::int64_t a_p = 0;
  std::int64_t b_p = 0;
  std::int64_t c_p = 0;

  bool operator==(const BlockCensus&) const = default;
};

namespace detail {

inline BigMatrix to_big(const IntMatrix& a) { return a.template cast<BigInt>(); }

inline std::int64_t to_residue(const BigInt& x, std::int64_t p) {
  BigInt r = x % p;
  if (r < 0) r += p;
  return static_cast<std::int64_t>(r);
}

inline void require_holonomy(const IntMatrix& a, std::int64_t delta, std::int64_t p) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::OutOfRange, "holonomy matrix must be square");
  if (delta < 2 || !is_prime(p) || delta % p != 0)
    throw Error(ErrorKind::PrimeNotInModulus, std::to_string(p) + " is not a prime divisor of " + std::to_string(delta));
  const BigMatrix big = to_big(a);
  if (!(matrix_power(big, static_cast<std::uint64_t>(delta)) == BigMatrix::identity(a.rows())))
    throw Error(ErrorKind::OrderMismatch, "matrix does not satisfy A^" + std::to_string(delta) + " = I");
}

}  // namespace detail

/// H^2(C_p, M) = F / N with F = ker(B - I) and N the image of the norm
/// 1 + B + ... + B^{p-1}, where B = A^{delta/p}. The quotient basis is the
/// one produced by the Smith reduction, so results are reproducible.
inline CohomologyResult h2(const IntMatrix& a, std::int64_t delta, std::int64_t p) {
  detail::require_holonomy(a, delta, p);
  const std::size_t n = a.rows();
  const BigMatrix A = detail::to_big(a);
  const BigMatrix B = matrix_power(A, static_cast<std::uint64_t>(delta / p));
  const BigMatrix I = BigMatrix::identity(n);

  // Saturated basis of F: trailing columns of V in U (B - I) V = D.
  const auto snf = smith_normal_form(B - I, SmithTransforms::WithInverses);
  const std::size_t r = snf.rank();
  const std::size_t f = n - r;

  CohomologyResult out;
  out.prime = p;
  out.fixed_rank = static_cast<std::int64_t>(f);
  if (f == 0) {
    out.group = FinAbGroup();
    out.g_action = ActionMatrix::identity(out.group);
    return out;
  }
  BigMatrix basis(n, f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < f; ++j) basis(i, j) = snf.V(i, r + j);

  // Coordinates in F of a matrix whose columns lie in F: the last f rows of
  // V^{-1} times it.
  auto in_fixed = [&](const BigMatrix& cols) {
    const BigMatrix full = snf.V_inv * cols;
    BigMatrix out_m(f, cols.cols());
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < cols.cols(); ++j)
        if (full(i, j) != 0) throw Error(ErrorKind::InternalNonInteger, "vector expected in the fixed sublattice");
    for (std::size_t i = 0; i < f; ++i)
      for (std::size_t j = 0; j < cols.cols(); ++j) out_m(i, j) = full(r + i, j);
    return out_m;
  };

  BigMatrix norm = I;
  BigMatrix power = I;
  for (std::int64_t i = 1; i < p; ++i) {
    power = power * B;
    norm = norm + power;
  }
  const BigMatrix norm_coords = in_fixed(norm);
  const BigMatrix action_on_f = in_fixed(A * basis);

  const auto q = smith_normal_form(norm_coords, SmithTransforms::WithInverses);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < f; ++i) {
    const BigInt d = i < std::min(q.D.rows(), q.D.cols()) ? q.D(i, i) : BigInt(0);
    if (d == 1) continue;
    if (d != p)
      throw Error(ErrorKind::InternalNonInteger, "H^2 has an invariant factor " + d.str() + " other than " + std::to_string(p));
    kept.push_back(i);
  }

  const BigMatrix induced = q.U * action_on_f * q.U_inv;
  IntMatrix m(kept.size(), kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < kept.size(); ++j) m(i, j) = detail::to_residue(induced(kept[i], kept[j]), p);

  out.group = FinAbGroup::elementary(p, kept.size());
  out.g_action = ActionMatrix(out.group, std::move(m));
  out.b_p = static_cast<std::int64_t>(kept.size());
  return out;
}

/// Multiplicities (a, b, c) of Z[zeta_p], Z and Z C_p in the restriction to C_p.
inline BlockCensus census(const IntMatrix& a, std::int64_t delta, std::int64_t p) {
  const CohomologyResult coh = h2(a, delta, p);
  const auto n = static_cast<std::int64_t>(a.rows());
  BlockCensus c;
  c.prime = p;
  c.b_p = coh.b_p;
  c.c_p = coh.fixed_rank - coh.b_p;
  const std::int64_t rest = n - c.b_p - p * c.c_p;
  if (c.c_p < 0 || rest < 0 || rest % (p - 1) != 0)
    throw Error(ErrorKind::InconsistentCensus,
                "n=" + std::to_string(n) + " b=" + std::to_string(c.b_p) + " c=" + std::to_string(c.c_p) + " at p=" + std::to_string(p));
  c.a_p = rest / (p - 1);
  return c;
}

inline bool is_exceptional(const BlockCensus& c) { return c.a_p >= 1 && c.b_p == 1 && c.c_p == 0; }

inline bool is_exceptional_at(const IntMatrix& a, std::int64_t delta, std::int64_t p) {
  return is_exceptional(census(a, delta, p));
}

inline std::vector<std::int64_t> special_primes(const IntMatrix& a, const SquarefreeContext& ctx) {
  std::vector<std::int64_t> out;
  for (std::int64_t p : ctx.primes())
    if (is_exceptional_at(a, ctx.delta(), p)) out.push_back(p);
  return out;
}

/// Nonzero elements of H^2 fixed by the induced action: p^t - 1.
inline BigInt fixed_nonzero_count(const CohomologyResult& coh) {
  if (coh.group.is_trivial()) return 0;
  return fixed_point_size(coh.g_action) - 1;
}

/// |X(G, M)|, the product over p | delta of fixed_nonzero_count.
inline BigInt x_size(const IntMatrix& a, const SquarefreeContext& ctx) {
  BigInt total = 1;
  for (std::int64_t p : ctx.primes()) total *= fixed_nonzero_count(h2(a, ctx.delta(), p));
  return total;
}

}  // namespace bieber
