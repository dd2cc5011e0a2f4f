#pragma once

// Level-j cochains for a surjection Delta -> Theta and the unbalanced cup
// product against (-1)-cochains of Theta.
//
// A cochain of degree i and level j is a table on Delta^{i-j} x Theta^j: it
// depends on its last j arguments only through their images in Theta.

#include <memory>
#include <random>
#include <vector>

#include "rigid/gmodule.hpp"

namespace rigid {

/// Bilinear, equivariant pairing A x B -> C with A, C modules over Delta and B
/// a module over Theta: P(e_i, e_k) = value(i, k).
class Pairing {
 public:
  Pairing(std::shared_ptr<const GroupSurjection> pi, std::shared_ptr<const GammaModule> A,
          std::shared_ptr<const GammaModule> B, std::shared_ptr<const GammaModule> C,
          std::vector<std::vector<IntVec>> value)
      : pi_(std::move(pi)), A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), value_(std::move(value)) {
    validate();
  }

  /// A (x) B realized as A^r with Delta acting by kron(beta(pi d), alpha(d)).
  static Pairing lattice_tensor(std::shared_ptr<const GroupSurjection> pi, std::shared_ptr<const GammaModule> A,
                                std::shared_ptr<const GammaModule> B) {
    if (B->module().relations().cols() != 0) throw PreconditionError("lattice_tensor: B must be a free lattice");
    const std::size_t n = A->ngens(), r = B->ngens();
    std::vector<IntVec> rel;
    for (std::size_t k = 0; k < r; ++k)
      for (const auto& c : A->module().relation_columns()) {
        IntVec v(n * r, 0);
        std::copy(c.begin(), c.end(), v.begin() + static_cast<std::ptrdiff_t>(k * n));
        rel.push_back(v);
      }
    std::vector<IntMatrix> act;
    for (std::size_t d = 0; d < pi->source()->order(); ++d) act.push_back(kronecker(B->act((*pi)(d)), A->act(d)));
    auto C = std::make_shared<const GammaModule>(pi->source(), FinAb(n * r, IntMatrix::from_columns(n * r, rel)),
                                                 std::move(act));
    std::vector<std::vector<IntVec>> val(n, std::vector<IntVec>(r));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < r; ++k) {
        IntVec v(n * r, 0);
        v[k * n + i] = 1;
        val[i][k] = v;
      }
    return Pairing(std::move(pi), std::move(A), std::move(B), std::move(C), std::move(val));
  }

  const GroupSurjection& surjection() const { return *pi_; }
  const std::shared_ptr<const GroupSurjection>& surjection_ptr() const { return pi_; }
  const GammaModule& left() const { return *A_; }
  const GammaModule& right() const { return *B_; }
  const GammaModule& target() const { return *C_; }
  const std::shared_ptr<const GammaModule>& target_ptr() const { return C_; }

  IntVec operator()(const IntVec& a, const IntVec& b) const {
    IntVec out(C_->ngens(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (b[k] == 0) continue;
        out = vec_add(out, vec_scale(mul_checked(a[i], b[k]), value_[i][k]));
      }
    }
    return out;
  }

 private:
  void validate() const {
    if (pi_->source()->table() != A_->group().table() || pi_->source()->table() != C_->group().table() ||
        pi_->target()->table() != B_->group().table())
      throw PreconditionError("Pairing: modules are not over the surjection's groups");
    const std::size_t n = A_->ngens(), r = B_->ngens();
    if (value_.size() != n) throw PreconditionError("Pairing: value table has wrong shape");
    for (const auto& row : value_) {
      if (row.size() != r) throw PreconditionError("Pairing: value table has wrong shape");
      for (const auto& v : row)
        if (v.size() != C_->ngens()) throw PreconditionError("Pairing: value has wrong length");
    }
    IntMatrix In = IntMatrix::identity(n), Ir = IntMatrix::identity(r);
    for (const auto& ra : A_->module().relation_columns())
      for (std::size_t k = 0; k < r; ++k)
        if (!C_->module().is_zero((*this)(ra, Ir.column(k)))) throw PreconditionError("Pairing: not well defined on A");
    for (const auto& rb : B_->module().relation_columns())
      for (std::size_t i = 0; i < n; ++i)
        if (!C_->module().is_zero((*this)(In.column(i), rb))) throw PreconditionError("Pairing: not well defined on B");
    for (std::size_t d = 0; d < pi_->source()->order(); ++d)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < r; ++k) {
          IntVec lhs = (*this)(A_->apply(d, In.column(i)), B_->apply((*pi_)(d), Ir.column(k)));
          IntVec rhs = C_->apply(d, (*this)(In.column(i), Ir.column(k)));
          if (!C_->module().equal(lhs, rhs)) throw PreconditionError("Pairing: not equivariant");
        }
  }

  std::shared_ptr<const GroupSurjection> pi_;
  std::shared_ptr<const GammaModule> A_, B_, C_;
  std::vector<std::vector<IntVec>> value_;
};

class LevelCochain {
 public:
  LevelCochain(std::shared_ptr<const GroupSurjection> pi, std::shared_ptr<const GammaModule> coeff, std::size_t degree,
               std::size_t level, CochainTable values)
      : pi_(std::move(pi)), A_(std::move(coeff)), i_(degree), j_(level), v_(std::move(values)) {
    if (j_ > i_) throw PreconditionError("LevelCochain: level exceeds degree");
    if (A_->group().table() != pi_->source()->table())
      throw PreconditionError("LevelCochain: coefficients must be a module over the source group");
    if (v_.size() != table_size()) throw PreconditionError("LevelCochain: table has wrong size");
    for (const auto& x : v_)
      if (x.size() != A_->ngens()) throw PreconditionError("LevelCochain: value has wrong length");
  }

  static LevelCochain zero(std::shared_ptr<const GroupSurjection> pi, std::shared_ptr<const GammaModule> coeff,
                           std::size_t degree, std::size_t level) {
    CochainTable v(table_size(*pi, degree, level), IntVec(coeff->ngens(), 0));
    return LevelCochain(std::move(pi), std::move(coeff), degree, level, std::move(v));
  }

  std::size_t degree() const { return i_; }
  std::size_t level() const { return j_; }
  const GammaModule& coefficients() const { return *A_; }
  const std::shared_ptr<const GammaModule>& coefficients_ptr() const { return A_; }
  const GroupSurjection& surjection() const { return *pi_; }
  const std::shared_ptr<const GroupSurjection>& surjection_ptr() const { return pi_; }
  const CochainTable& values() const { return v_; }

  std::size_t table_size() const { return table_size(*pi_, i_, j_); }
  static std::size_t table_size(const GroupSurjection& pi, std::size_t i, std::size_t j) {
    return pi.source()->tuple_count(i - j) * pi.target()->tuple_count(j);
  }

  /// Table index of a mixed tuple (Delta part, Theta part).
  static std::size_t mixed_index(const GroupSurjection& pi, const std::vector<std::size_t>& delta,
                                 const std::vector<std::size_t>& theta) {
    return pi.source()->encode(delta) * pi.target()->tuple_count(theta.size()) + pi.target()->encode(theta);
  }

  /// Value at a full Delta-tuple of length degree().
  const IntVec& at(const std::vector<std::size_t>& g) const {
    if (g.size() != i_) throw PreconditionError("LevelCochain::at: wrong number of arguments");
    std::vector<std::size_t> d(g.begin(), g.end() - static_cast<std::ptrdiff_t>(j_));
    std::vector<std::size_t> t;
    for (std::size_t k = i_ - j_; k < i_; ++k) t.push_back((*pi_)(g[k]));
    return v_[mixed_index(*pi_, d, t)];
  }
  /// Value at a mixed tuple: Delta entries followed by Theta entries.
  const IntVec& at_mixed(const std::vector<std::size_t>& delta, const std::vector<std::size_t>& theta) const {
    return v_[mixed_index(*pi_, delta, theta)];
  }

  /// The full table on Delta^i.
  CochainTable full_table() const {
    const FiniteGroup& D = *pi_->source();
    CochainTable t(D.tuple_count(i_));
    for (std::size_t idx = 0; idx < t.size(); ++idx) t[idx] = at(D.decode(idx, i_));
    return t;
  }

  /// Builds a level-j cochain from a function on full Delta-tuples, checking
  /// that it only depends on the images of the last j arguments.
  template <class F>
  static LevelCochain from_function(std::shared_ptr<const GroupSurjection> pi, std::shared_ptr<const GammaModule> coeff,
                                    std::size_t degree, std::size_t level, F&& fn, bool check_membership = true) {
    const FiniteGroup& D = *pi->source();
    const FiniteGroup& T = *pi->target();
    std::vector<std::size_t> section(T.order(), SIZE_MAX);
    for (std::size_t d = 0; d < D.order(); ++d)
      if (section[(*pi)(d)] == SIZE_MAX) section[(*pi)(d)] = d;
    CochainTable v(table_size(*pi, degree, level));
    const std::size_t nd = degree - level;
    for (std::size_t a = 0; a < D.tuple_count(nd); ++a)
      for (std::size_t b = 0; b < T.tuple_count(level); ++b) {
        auto g = D.decode(a, nd);
        for (auto t : T.decode(b, level)) g.push_back(section[t]);
        v[a * T.tuple_count(level) + b] = fn(g);
      }
    LevelCochain c(pi, coeff, degree, level, std::move(v));
    if (check_membership) {
      for (std::size_t idx = 0; idx < D.tuple_count(degree); ++idx) {
        auto g = D.decode(idx, degree);
        if (!coeff->module().equal(fn(g), c.at(g)))
          throw PreconditionError("LevelCochain::from_function: values depend on more than the level allows");
      }
    }
    return c;
  }

  /// True when the full table is constant on kernel cosets in the last j slots.
  bool check_level() const {
    const FiniteGroup& D = *pi_->source();
    CochainTable t = full_table();
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      auto g = D.decode(idx, i_);
      for (std::size_t k = i_ - j_; k < i_; ++k)
        for (std::size_t d = 0; d < D.order(); ++d) {
          if ((*pi_)(d) != (*pi_)(g[k])) continue;
          auto h = g;
          h[k] = d;
          if (!A_->module().equal(t[D.encode(h)], t[idx])) return false;
        }
    }
    return true;
  }

  friend LevelCochain operator+(const LevelCochain& a, const LevelCochain& b) {
    if (a.i_ != b.i_ || a.j_ != b.j_ || a.v_.size() != b.v_.size()) throw PreconditionError("LevelCochain +: shape mismatch");
    CochainTable v(a.v_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = vec_add(a.v_[k], b.v_[k]);
    return LevelCochain(a.pi_, a.A_, a.i_, a.j_, std::move(v));
  }

  /// Pointwise equality modulo the coefficient relations.
  bool equals(const LevelCochain& o) const {
    CochainTable x = full_table(), y = o.full_table();
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (!A_->module().equal(x[k], y[k])) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& v : v_)
      if (!A_->module().is_zero(v)) return false;
    return true;
  }

 private:
  std::shared_ptr<const GroupSurjection> pi_;
  std::shared_ptr<const GammaModule> A_;
  std::size_t i_, j_;
  CochainTable v_;
};

/// Standard inhomogeneous differential; keeps the level.
inline LevelCochain differential(const LevelCochain& f) {
  const FiniteGroup& D = *f.surjection().source();
  const GammaModule& A = f.coefficients();
  const std::size_t i = f.degree();
  auto fn = [&](const std::vector<std::size_t>& g) {
    std::vector<std::size_t> sub(g.begin() + 1, g.end());
    IntVec acc = A.apply(g[0], f.at(sub));
    for (std::size_t k = 0; k < i; ++k) {
      sub.clear();
      for (std::size_t t = 0; t <= i; ++t) {
        if (t == k) {
          sub.push_back(D.mul(g[k], g[k + 1]));
          ++t;
        } else {
          sub.push_back(g[t]);
        }
      }
      acc = (k % 2 == 0) ? vec_sub(acc, f.at(sub)) : vec_add(acc, f.at(sub));
    }
    sub.assign(g.begin(), g.end() - 1);
    acc = (i % 2 == 0) ? vec_sub(acc, f.at(sub)) : vec_add(acc, f.at(sub));
    return acc;
  };
  return LevelCochain::from_function(f.surjection_ptr(), f.coefficients_ptr(), i + 1, f.level(), fn, false);
}

/// A (-1)-cochain: an element of the Theta-module B.
struct NegOneCochain {
  std::shared_ptr<const GammaModule> module;
  IntVec value;

  IntVec norm() const { return module->norm_matrix() * value; }
  bool is_cocycle() const { return module->module().is_zero(norm()); }
};

/// d of a (-1)-cochain: the constant 0-cochain N(lambda), as an element of B.
inline IntVec differential_neg1(const NegOneCochain& l) { return l.norm(); }

/// (f ⊔ lambda)(g_1..g_{i-1}) = sum over a in Theta of P(f(g_1..g_{i-1}, a), (g_1...g_{i-1} a) lambda).
inline LevelCochain unbalanced_cup(const LevelCochain& f, const NegOneCochain& l, const Pairing& P) {
  if (f.level() == 0) throw PreconditionError("unbalanced_cup: cochain must have level at least 1");
  if (f.coefficients().actions() != P.left().actions()) throw PreconditionError("unbalanced_cup: coefficient mismatch");
  const GroupSurjection& pi = f.surjection();
  const FiniteGroup& D = *pi.source();
  const FiniteGroup& T = *pi.target();
  const std::size_t i = f.degree(), j = f.level();
  const std::size_t nd = i - j;
  const GammaModule& B = *l.module;
  CochainTable v(LevelCochain::table_size(pi, i - 1, j - 1));
  for (std::size_t a = 0; a < D.tuple_count(nd); ++a)
    for (std::size_t b = 0; b < T.tuple_count(j - 1); ++b) {
      auto dpart = D.decode(a, nd);
      auto tpart = T.decode(b, j - 1);
      std::size_t prod = T.identity();
      for (auto x : dpart) prod = T.mul(prod, pi(x));
      for (auto x : tpart) prod = T.mul(prod, x);
      IntVec acc(P.target().ngens(), 0);
      tpart.push_back(0);
      for (std::size_t t = 0; t < T.order(); ++t) {
        tpart.back() = t;
        acc = vec_add(acc, P(f.at_mixed(dpart, tpart), B.apply(T.mul(prod, t), l.value)));
      }
      v[a * T.tuple_count(j - 1) + b] = acc;
    }
  return LevelCochain(f.surjection_ptr(), P.target_ptr(), i - 1, j - 1, std::move(v));
}

/// (f ∪ m)(g_1..g_i) = P(f(g_1..g_i), (g_1...g_i) m) for a 0-cochain m in B.
inline LevelCochain cup_degree0(const LevelCochain& f, const IntVec& m, const Pairing& P) {
  const GroupSurjection& pi = f.surjection();
  const FiniteGroup& T = *pi.target();
  const GammaModule& B = P.right();
  auto fn = [&](const std::vector<std::size_t>& g) {
    std::size_t prod = T.identity();
    for (auto x : g) prod = T.mul(prod, pi(x));
    return P(f.at(g), B.apply(prod, m));
  };
  return LevelCochain::from_function(f.surjection_ptr(), P.target_ptr(), f.degree(), f.level(), fn, false);
}

struct LeibnizReport {
  bool holds = false;
  std::size_t points = 0;
  std::size_t mismatches = 0;
};

/// Compares d(f ⊔ lambda) with df ⊔ lambda + (-1)^i f ∪ N(lambda) pointwise on Delta^i.
inline LeibnizReport leibniz_check(const LevelCochain& f, const NegOneCochain& l, const Pairing& P) {
  const std::size_t i = f.degree();
  LevelCochain lhs = differential(unbalanced_cup(f, l, P));
  LevelCochain a = unbalanced_cup(differential(f), l, P);
  LevelCochain b = cup_degree0(f, differential_neg1(l), P);
  CochainTable L = lhs.full_table(), A = a.full_table(), B = b.full_table();
  const FinAb& C = P.target().module();
  LeibnizReport r;
  r.points = L.size();
  for (std::size_t k = 0; k < L.size(); ++k) {
    IntVec rhs = (i % 2 == 0) ? vec_add(A[k], B[k]) : vec_sub(A[k], B[k]);
    if (!C.equal(L[k], rhs)) ++r.mismatches;
  }
  r.holds = r.mismatches == 0;
  return r;
}

/// Random data for the Leibniz rule over the pairs (Z/2, Z/2), (Z/4, Z/4),
/// (Z/4, Z/2) and (S_3, Z/2), selected by `which` in 0..3.
namespace gen {

struct Instance {
  std::shared_ptr<const GroupSurjection> pi;
  std::shared_ptr<const GammaModule> A;  // over Delta
  std::shared_ptr<const GammaModule> B;  // lattice over Theta
  std::shared_ptr<const Pairing> P;
};

inline std::shared_ptr<const GroupSurjection> surjection(int which) {
  switch (which) {
    case 0: return std::make_shared<const GroupSurjection>(GroupSurjection::cyclic_reduction(2, 2));
    case 1: return std::make_shared<const GroupSurjection>(GroupSurjection::cyclic_reduction(4, 4));
    case 2: return std::make_shared<const GroupSurjection>(GroupSurjection::cyclic_reduction(4, 2));
    default: return std::make_shared<const GroupSurjection>(s3_sign());
  }
}

// Theta-lattices of rank <= 2 for Theta cyclic of order 2 or 4.
inline GammaModule random_theta_lattice(const GroupPtr& T, std::mt19937_64& rng) {
  int pick = static_cast<int>(rng() % 3);
  if (T->order() == 2) {
    if (pick == 0) return GammaModule::lattice(T, {IntMatrix{{-1}}});
    if (pick == 1) return GammaModule::lattice(T, {IntMatrix{{0, 1}, {1, 0}}});
    return GammaModule::lattice(T, {IntMatrix{{1, 1}, {0, -1}}});
  }
  if (pick == 0) return GammaModule::lattice(T, {IntMatrix{{0, -1}, {1, 0}}});
  if (pick == 1) return GammaModule::lattice(T, {IntMatrix{{-1}}});
  return GammaModule::lattice(T, {IntMatrix{{1}}});
}

// Z/D on which Delta acts trivially or through an order-two quotient by -1.
inline GammaModule random_delta_coefficients(const GroupPtr& D, std::mt19937_64& rng) {
  static const Int Ds[] = {2, 3, 4, 6, 12};
  Int d = Ds[rng() % 5];
  std::vector<IntMatrix> act;
  bool twisted = rng() % 2 == 0;
  // sign through the unique index-2 subgroup when it exists (all Delta in use have one)
  std::vector<bool> odd(D->order(), false);
  if (D->is_abelian()) {
    for (std::size_t g = 0; g < D->order(); ++g) odd[g] = g % 2 == 1;
  } else {
    for (std::size_t g = 0; g < D->order(); ++g) odd[g] = D->element_order(g) == 2;
  }
  for (std::size_t g = 0; g < D->order(); ++g) act.push_back(IntMatrix{{twisted && odd[g] ? Int(-1) : Int(1)}});
  return GammaModule(D, FinAb::cyclic(d), std::move(act));
}

inline Instance random_instance(int which, std::mt19937_64& rng) {
  Instance s;
  s.pi = surjection(which);
  s.A = std::make_shared<const GammaModule>(random_delta_coefficients(s.pi->source(), rng));
  s.B = std::make_shared<const GammaModule>(random_theta_lattice(s.pi->target(), rng));
  s.P = std::make_shared<const Pairing>(Pairing::lattice_tensor(s.pi, s.A, s.B));
  return s;
}

inline LevelCochain random_cochain(const Instance& s, std::size_t i, std::size_t j, std::mt19937_64& rng) {
  CochainTable v(LevelCochain::table_size(*s.pi, i, j));
  for (auto& x : v) {
    x.assign(s.A->ngens(), 0);
    for (auto& e : x) e = static_cast<Int>(rng() % 25) - 12;
  }
  return LevelCochain(s.pi, s.A, i, j, std::move(v));
}

inline NegOneCochain random_lambda(const Instance& s, std::mt19937_64& rng) {
  IntVec v(s.B->ngens());
  for (auto& e : v) e = static_cast<Int>(rng() % 11) - 5;
  return {s.B, v};
}

}  // namespace gen

}  // namespace rigid
