#pragma once

// Smith normal form and the lattice operations built on it. Lattices in Z^n
// are given by generator columns; results are always returned as bases.

#include <optional>
#include <utility>
#include <vector>

#include "rigid/int_matrix.hpp"

namespace rigid {

/// U * M * V = D with U, V unimodular and D diagonal, d_0 | d_1 | ... >= 0.
struct SmithForm {
  std::vector<Int> diag;  // length min(rows, cols), trailing zeros past rank
  std::size_t rank = 0;
  IntMatrix U, Uinv, V;
};

namespace detail {

struct SmithWork {
  IntMatrix A, U, Uinv, V;
  std::size_t m, n;
  bool left = true;

  // row i += c * row k
  void row_add(std::size_t i, std::size_t k, Int c) {
    if (c == 0) return;
    for (std::size_t j = 0; j < n; ++j) A(i, j) = add_checked(A(i, j), mul_checked(c, A(k, j)));
    if (!left) return;
    for (std::size_t j = 0; j < m; ++j) U(i, j) = add_checked(U(i, j), mul_checked(c, U(k, j)));
    for (std::size_t j = 0; j < m; ++j) Uinv(j, k) = sub_checked(Uinv(j, k), mul_checked(c, Uinv(j, i)));
  }
  void row_swap(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(A(i, j), A(k, j));
    if (!left) return;
    for (std::size_t j = 0; j < m; ++j) std::swap(U(i, j), U(k, j));
    for (std::size_t j = 0; j < m; ++j) std::swap(Uinv(j, i), Uinv(j, k));
  }
  void row_negate(std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) A(i, j) = -A(i, j);
    if (!left) return;
    for (std::size_t j = 0; j < m; ++j) U(i, j) = -U(i, j);
    for (std::size_t j = 0; j < m; ++j) Uinv(j, i) = -Uinv(j, i);
  }
  // col j += c * col k
  void col_add(std::size_t j, std::size_t k, Int c) {
    if (c == 0) return;
    for (std::size_t i = 0; i < m; ++i) A(i, j) = add_checked(A(i, j), mul_checked(c, A(i, k)));
    for (std::size_t i = 0; i < n; ++i) V(i, j) = add_checked(V(i, j), mul_checked(c, V(i, k)));
  }
  void col_swap(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(A(i, j), A(i, k));
    for (std::size_t i = 0; i < n; ++i) std::swap(V(i, j), V(i, k));
  }
};

}  // namespace detail

/// With want_left = false, U and Uinv are left empty (cheaper when only V is needed).
inline SmithForm smith_form(const IntMatrix& M, bool want_left = true) {
  const std::size_t m = M.rows(), n = M.cols();
  detail::SmithWork w{M, want_left ? IntMatrix::identity(m) : IntMatrix(),
                      want_left ? IntMatrix::identity(m) : IntMatrix(), IntMatrix::identity(n), m, n, want_left};
  IntMatrix& A = w.A;
  const std::size_t r = std::min(m, n);
  std::size_t k = 0;
  for (; k < r; ++k) {
    for (;;) {
      // smallest nonzero entry in the trailing block becomes the pivot
      std::size_t pi = m, pj = n;
      Int best = 0;
      for (std::size_t i = k; i < m; ++i)
        for (std::size_t j = k; j < n; ++j)
          if (A(i, j) != 0 && (best == 0 || abs_checked(A(i, j)) < best)) {
            best = abs_checked(A(i, j));
            pi = i;
            pj = j;
          }
      if (best == 0) goto done;
      w.row_swap(k, pi);
      w.col_swap(k, pj);

      bool dirty = false;
      for (std::size_t i = k + 1; i < m; ++i) {
        if (A(i, k) == 0) continue;
        w.row_add(i, k, -div_floor(A(i, k), A(k, k)));
        if (A(i, k) != 0) dirty = true;
      }
      for (std::size_t j = k + 1; j < n; ++j) {
        if (A(k, j) == 0) continue;
        w.col_add(j, k, -div_floor(A(k, j), A(k, k)));
        if (A(k, j) != 0) dirty = true;
      }
      if (dirty) continue;

      std::size_t bad = m;
      for (std::size_t i = k + 1; i < m && bad == m; ++i)
        for (std::size_t j = k + 1; j < n; ++j)
          if (A(i, j) % A(k, k) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      w.row_add(k, bad, 1);
    }
    if (A(k, k) < 0) w.row_negate(k);
  }
done:
  SmithForm s;
  s.diag.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i) s.diag[i] = A(i, i);
  s.rank = k;
  s.U = std::move(w.U);
  s.Uinv = std::move(w.Uinv);
  s.V = std::move(w.V);
  return s;
}

/// Basis (as columns) of the lattice spanned by the given columns in Z^n.
inline std::vector<IntVec> span_basis(std::size_t n, const std::vector<IntVec>& gens) {
  if (gens.empty()) return {};
  auto s = smith_form(IntMatrix::from_columns(n, gens));
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < s.rank; ++i) out.push_back(vec_scale(s.diag[i], s.Uinv.column(i)));
  return out;
}

/// Basis of {x : M x = 0}.
inline std::vector<IntVec> kernel_basis(const IntMatrix& M) {
  auto s = smith_form(M, false);
  std::vector<IntVec> out;
  for (std::size_t j = s.rank; j < M.cols(); ++j) out.push_back(s.V.column(j));
  return out;
}

/// Some integer solution of M x = b, if one exists.
inline std::optional<IntVec> solve(const IntMatrix& M, const IntVec& b) {
  if (b.size() != M.rows()) throw PreconditionError("solve: right-hand side has wrong length");
  auto s = smith_form(M);
  IntVec c = s.U * b;
  IntVec y(M.cols(), 0);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    if (i < s.rank) {
      if (c[i] % s.diag[i] != 0) return std::nullopt;
      y[i] = c[i] / s.diag[i];
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return s.V * y;
}

/// Solver that factors M once and answers many right-hand sides.
class LatticeSolver {
 public:
  explicit LatticeSolver(IntMatrix M) : M_(std::move(M)), s_(smith_form(M_)) {}
  std::optional<IntVec> operator()(const IntVec& b) const {
    if (b.size() != M_.rows()) throw PreconditionError("LatticeSolver: right-hand side has wrong length");
    IntVec c = s_.U * b;
    IntVec y(M_.cols(), 0);
    for (std::size_t i = 0; i < M_.rows(); ++i) {
      if (i < s_.rank) {
        if (c[i] % s_.diag[i] != 0) return std::nullopt;
        y[i] = c[i] / s_.diag[i];
      } else if (c[i] != 0) {
        return std::nullopt;
      }
    }
    return s_.V * y;
  }
  bool contains(const IntVec& b) const { return (*this)(b).has_value(); }
  const IntMatrix& matrix() const { return M_; }

 private:
  IntMatrix M_;
  SmithForm s_;
};

inline bool in_span(std::size_t n, const std::vector<IntVec>& gens, const IntVec& v) {
  if (gens.empty()) return vec_is_zero(v);
  return solve(IntMatrix::from_columns(n, gens), v).has_value();
}

/// Basis of {x in Z^{cols M} : M x in span(L)}.
inline std::vector<IntVec> preimage(const IntMatrix& M, const std::vector<IntVec>& L) {
  const std::size_t n = M.cols();
  if (L.empty()) return kernel_basis(M);
  IntMatrix neg = IntMatrix::from_columns(M.rows(), L);
  IntMatrix big = hcat(M, -1 * neg);
  std::vector<IntVec> proj;
  for (const auto& z : kernel_basis(big)) proj.emplace_back(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
  return span_basis(n, proj);
}

namespace detail {

// g = s a + t b with g = gcd(a, b) > 0, for a > 0.
inline void xgcd(Int a, Int b, Int& g, Int& s, Int& t) {
  Int r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Int q = div_floor(r0, r1);
    Int r2 = r0 - q * r1, s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = r1, r1 = r2, s0 = s1, s1 = s2, t0 = t1, t1 = t2;
  }
  if (r0 < 0) r0 = -r0, s0 = -s0, t0 = -t0;
  g = r0, s = s0, t = t0;
}

}  // namespace detail

/// Lower triangular basis of span(gens) + e Z^n, computed with every entry
/// below the pivots reduced mod e, so nothing grows past e^2. Column r of the
/// result has its pivot in row r, and the pivot divides e.
inline std::vector<IntVec> modular_basis(std::size_t n, std::vector<IntVec> work, Int e) {
  if (e < 1) throw PreconditionError("modular_basis: modulus must be positive");
  for (auto& c : work)
    for (auto& x : c) x = mod_floor(x, e);
  std::vector<IntVec> out;
  for (std::size_t r = 0; r < n; ++r) {
    // invariant: lattice = span(out, work) + e Z^{rows >= r}, work zero above row r
    IntVec p(n, 0);
    p[r] = e;
    for (auto& c : work) {
      if (c[r] == 0) continue;
      Int g, s, t;
      detail::xgcd(p[r], c[r], g, s, t);
      const Int a = p[r] / g, b = c[r] / g;
      for (std::size_t j = r + 1; j < n; ++j) {
        Int pj = mod_floor(add_checked(mul_checked(s, p[j]), mul_checked(t, c[j])), e);
        Int cj = mod_floor(sub_checked(mul_checked(a, c[j]), mul_checked(b, p[j])), e);
        p[j] = pj;
        c[j] = cj;
      }
      p[r] = g;
      c[r] = 0;
    }
    std::erase_if(work, [](const IntVec& c) { return vec_is_zero(c); });
    // e e_r is (e / p_r) p minus something below row r
    IntVec q(n, 0);
    for (std::size_t j = r + 1; j < n; ++j) q[j] = mod_floor(mul_checked(e / p[r], p[j]), e);
    if (!vec_is_zero(q)) work.push_back(std::move(q));
    out.push_back(std::move(p));
  }
  return out;
}

/// preimage(M, L) when span(L) contains e Z^{rows M}; entries stay below e.
inline std::vector<IntVec> preimage_mod(const IntMatrix& M, const std::vector<IntVec>& L, Int e) {
  const std::size_t m = M.rows(), n = M.cols();
  std::vector<IntVec> gens;
  for (std::size_t j = 0; j < n; ++j) {
    IntVec c(m + n, 0);
    for (std::size_t i = 0; i < m; ++i) c[i] = M(i, j);
    c[m + j] = 1;
    gens.push_back(std::move(c));
  }
  for (const auto& l : L) {
    IntVec c(m + n, 0);
    std::copy(l.begin(), l.end(), c.begin());
    gens.push_back(std::move(c));
  }
  auto basis = modular_basis(m + n, std::move(gens), e);
  std::vector<IntVec> out;
  for (std::size_t r = m; r < m + n; ++r) out.emplace_back(basis[r].begin() + static_cast<std::ptrdiff_t>(m), basis[r].end());
  return out;
}

/// Basis of the lattice of x in Z^n with some nonzero multiple in span(gens).
inline std::vector<IntVec> saturation(std::size_t n, const std::vector<IntVec>& gens) {
  if (gens.empty()) return {};
  IntMatrix G = IntMatrix::from_columns(n, gens);
  auto perp = kernel_basis(G.transpose());
  if (perp.empty()) {
    std::vector<IntVec> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(IntMatrix::identity(n).column(i));
    return out;
  }
  return kernel_basis(IntMatrix::from_columns(n, perp).transpose());
}

inline bool lattice_contains(std::size_t n, const std::vector<IntVec>& big, const std::vector<IntVec>& small) {
  if (small.empty()) return true;
  if (big.empty()) {
    for (const auto& v : small)
      if (!vec_is_zero(v)) return false;
    return true;
  }
  LatticeSolver s(IntMatrix::from_columns(n, big));
  for (const auto& v : small)
    if (!s.contains(v)) return false;
  return true;
}

inline bool lattice_equal(std::size_t n, const std::vector<IntVec>& a, const std::vector<IntVec>& b) {
  return lattice_contains(n, a, b) && lattice_contains(n, b, a);
}

}  // namespace rigid
