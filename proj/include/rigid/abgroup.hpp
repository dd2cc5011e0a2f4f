#pragma once

// Finitely generated abelian groups presented as Z^n / span(R). Elements are
// integer vectors in generator coordinates; two vectors are the same element
// when their difference lies in the relation lattice.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rigid/rational.hpp"
#include "rigid/smith.hpp"

namespace rigid {

class FinAb {
 public:
  FinAb() : FinAb(0, IntMatrix(0, 0)) {}

  /// Z^ngens modulo the span of the columns of `relations`.
  FinAb(std::size_t ngens, IntMatrix relations) : n_(ngens), rel_(std::move(relations)) {
    if (rel_.rows() != n_) throw PreconditionError("FinAb: relation matrix must have one row per generator");
    init();
  }
  FinAb(std::size_t ngens, const std::vector<IntVec>& relations)
      : FinAb(ngens, IntMatrix::from_columns(ngens, relations)) {}

  static FinAb cyclic(Int d) { return from_invariants({d}); }
  static FinAb free(std::size_t n) { return FinAb(n, IntMatrix(n, 0)); }
  static FinAb trivial() { return FinAb(0, IntMatrix(0, 0)); }
  /// Direct sum of Z/d_i (d_i = 0 gives a copy of Z).
  static FinAb from_invariants(const std::vector<Int>& d) {
    std::vector<IntVec> rel;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] < 0) throw PreconditionError("FinAb::from_invariants: negative order");
      if (d[i] == 0) continue;
      IntVec c(d.size(), 0);
      c[i] = d[i];
      rel.push_back(c);
    }
    return FinAb(d.size(), IntMatrix::from_columns(d.size(), rel));
  }

  std::size_t ngens() const { return n_; }
  const IntMatrix& relations() const { return rel_; }
  std::vector<IntVec> relation_columns() const { return rel_.columns(); }

  /// Nontrivial invariant factors, d_0 | d_1 | ..., with 0 standing for Z.
  const std::vector<Int>& invariants() const { return inv_; }

  /// Coordinates with respect to the invariant factor decomposition, reduced.
  IntVec canonical(const IntVec& x) const {
    check_len(x);
    IntVec y = U_ * x;
    IntVec out(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) {
      Int v = y[pos_[i]];
      out[i] = inv_[i] == 0 ? v : mod_floor(v, inv_[i]);
    }
    return out;
  }

  /// Representative in Z^n of canonical coordinates.
  IntVec lift(const IntVec& c) const {
    if (c.size() != inv_.size()) throw PreconditionError("FinAb::lift: wrong coordinate count");
    IntVec y(n_, 0);
    for (std::size_t i = 0; i < inv_.size(); ++i) y[pos_[i]] = c[i];
    return Uinv_ * y;
  }

  /// Reduced representative of x.
  IntVec reduce(const IntVec& x) const { return lift(canonical(x)); }

  /// Generator of the i-th invariant factor, as a vector in Z^n.
  IntVec invariant_generator(std::size_t i) const { return Uinv_.column(pos_.at(i)); }
  /// The linear form picking out the i-th canonical coordinate.
  IntVec invariant_coordinate(std::size_t i) const {
    IntVec row(n_);
    for (std::size_t j = 0; j < n_; ++j) row[j] = U_(pos_.at(i), j);
    return row;
  }

  bool is_zero(const IntVec& x) const { return vec_is_zero(canonical(x)); }
  bool equal(const IntVec& x, const IntVec& y) const { return is_zero(vec_sub(x, y)); }
  IntVec zero() const { return IntVec(n_, 0); }
  IntVec add(const IntVec& x, const IntVec& y) const { return vec_add(x, y); }

  std::size_t free_rank() const {
    std::size_t r = 0;
    for (Int d : inv_) r += (d == 0);
    return r;
  }
  bool is_finite() const { return free_rank() == 0; }
  bool is_trivial() const { return inv_.empty(); }

  Int order() const {
    if (!is_finite()) throw PreconditionError("FinAb::order: group is infinite");
    Int o = 1;
    for (Int d : inv_) o = mul_checked(o, d);
    return o;
  }
  Int exponent() const {
    if (!is_finite()) throw PreconditionError("FinAb::exponent: group is infinite");
    return inv_.empty() ? 1 : inv_.back();
  }
  Int element_order(const IntVec& x) const {
    IntVec c = canonical(x);
    Int o = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      if (inv_[i] == 0) throw PreconditionError("FinAb::element_order: element has infinite order");
      o = lcm(o, inv_[i] / gcd(inv_[i], c[i]));
    }
    return o;
  }

  /// Calls fn on a representative of every element, in canonical order.
  void for_each_element(const std::function<void(const IntVec&)>& fn) const {
    if (!is_finite()) throw PreconditionError("FinAb::for_each_element: group is infinite");
    IntVec c(inv_.size(), 0);
    for (;;) {
      fn(lift(c));
      std::size_t i = 0;
      while (i < c.size() && ++c[i] == inv_[i]) c[i++] = 0;
      if (i == c.size()) return;
    }
  }
  std::vector<IntVec> elements() const {
    std::vector<IntVec> out;
    for_each_element([&](const IntVec& x) { out.push_back(x); });
    return out;
  }

  /// "Z/2 x Z/4", "Z^2 x Z/3", or "0".
  std::string structure() const {
    if (inv_.empty()) return "0";
    std::string s;
    std::size_t fr = free_rank();
    for (Int d : inv_) {
      if (d == 0) continue;
      if (!s.empty()) s += " x ";
      s += "Z/" + std::to_string(d);
    }
    if (fr) {
      std::string z = fr == 1 ? "Z" : "Z^" + std::to_string(fr);
      s = s.empty() ? z : z + " x " + s;
    }
    return s;
  }

  /// Same group re-presented on its invariant factor generators. The returned
  /// matrices convert coordinates: orig = to_original * canon, canon = from_original * orig.
  struct Canonical {
    std::shared_ptr<const FinAb> group;
    IntMatrix to_original;    // n x r
    IntMatrix from_original;  // r x n
  };
  Canonical canonical_presentation() const {
    const std::size_t r = inv_.size();
    IntMatrix to(n_, r), from(r, n_);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        to(j, i) = Uinv_(j, pos_[i]);
        from(i, j) = U_(pos_[i], j);
      }
    }
    return {std::make_shared<const FinAb>(from_invariants(inv_)), std::move(to), std::move(from)};
  }

  /// Same invariants.
  bool isomorphic(const FinAb& o) const { return inv_ == o.inv_; }

 private:
  void check_len(const IntVec& x) const {
    if (x.size() != n_) throw PreconditionError("FinAb: element has wrong length");
  }
  void init() {
    auto s = smith_form(rel_);
    U_ = s.U;
    Uinv_ = s.Uinv;
    for (std::size_t i = 0; i < n_; ++i) {
      Int d = i < s.diag.size() ? s.diag[i] : 0;
      if (d == 1) continue;
      inv_.push_back(d);
      pos_.push_back(i);
    }
  }

  std::size_t n_;
  IntMatrix rel_;
  IntMatrix U_, Uinv_;
  std::vector<Int> inv_;
  std::vector<std::size_t> pos_;
};

/// Homomorphism Z^ns/Rs -> Z^nt/Rt induced by an nt x ns integer matrix.
class AbHom {
 public:
  AbHom(FinAb source, FinAb target, IntMatrix matrix)
      : src_(std::move(source)), tgt_(std::move(target)), m_(std::move(matrix)) {
    if (m_.rows() != tgt_.ngens() || m_.cols() != src_.ngens())
      throw PreconditionError("AbHom: matrix shape does not match source/target");
    for (const auto& r : src_.relation_columns())
      if (!tgt_.is_zero(m_ * r)) throw PreconditionError("AbHom: matrix does not respect source relations");
  }

  const FinAb& source() const { return src_; }
  const FinAb& target() const { return tgt_; }
  const IntMatrix& matrix() const { return m_; }

  IntVec operator()(const IntVec& x) const { return m_ * x; }

  friend AbHom compose(const AbHom& g, const AbHom& f) {
    return AbHom(f.src_, g.tgt_, g.m_ * f.m_);
  }

  bool is_zero() const {
    for (std::size_t j = 0; j < m_.cols(); ++j)
      if (!tgt_.is_zero(m_.column(j))) return false;
    return true;
  }
  bool equals(const AbHom& o) const {
    if (m_.rows() != o.m_.rows() || m_.cols() != o.m_.cols()) return false;
    for (std::size_t j = 0; j < m_.cols(); ++j)
      if (!tgt_.equal(m_.column(j), o.m_.column(j))) return false;
    return true;
  }

 private:
  FinAb src_, tgt_;
  IntMatrix m_;
};

/// A subgroup (or subquotient) H together with the map H -> ambient lattice
/// coordinates given by `basis` columns.
struct SubGroup {
  FinAb group;
  IntMatrix basis;  // ambient_n x group.ngens()

  IntVec include(const IntVec& h) const { return basis * h; }
};

/// Subquotient L1 / L2 of lattices in Z^n, L2 contained in L1.
class Subquotient {
 public:
  Subquotient(std::size_t n, const std::vector<IntVec>& L1, const std::vector<IntVec>& L2) : n_(n) {
    B1_ = span_basis(n, L1);
    if (!lattice_contains(n, B1_, L2)) throw PreconditionError("Subquotient: L2 is not contained in L1");
    IntMatrix B = IntMatrix::from_columns(n, B1_);
    std::vector<IntVec> rel = B1_.empty() ? std::vector<IntVec>{} : preimage(B, L2);
    group_ = FinAb(B1_.size(), IntMatrix::from_columns(B1_.size(), rel));
    basis_ = B;
    if (!B1_.empty()) solver_ = std::make_shared<LatticeSolver>(B);
  }

  const FinAb& group() const { return group_; }
  const IntMatrix& basis() const { return basis_; }
  std::size_t ambient_dim() const { return n_; }

  bool contains(const IntVec& v) const { return B1_.empty() ? vec_is_zero(v) : solver_->contains(v); }
  /// Coordinates of an element of L1 in the subquotient's generators.
  IntVec coords(const IntVec& v) const {
    if (B1_.empty()) {
      if (!vec_is_zero(v)) throw PreconditionError("Subquotient::coords: vector not in L1");
      return {};
    }
    auto z = (*solver_)(v);
    if (!z) throw PreconditionError("Subquotient::coords: vector not in L1");
    return *z;
  }
  IntVec canonical(const IntVec& v) const { return group_.canonical(coords(v)); }
  IntVec include(const IntVec& h) const { return basis_ * h; }

 private:
  std::size_t n_;
  std::vector<IntVec> B1_;
  FinAb group_;
  IntMatrix basis_;
  std::shared_ptr<LatticeSolver> solver_;
};

/// Subgroup of A generated by the given elements (columns in A's coordinates).
inline SubGroup generated_subgroup(const FinAb& A, const std::vector<IntVec>& gens) {
  const std::size_t k = gens.size();
  IntMatrix G = IntMatrix::from_columns(A.ngens(), gens);
  std::vector<IntVec> rel = k ? preimage(G, A.relation_columns()) : std::vector<IntVec>{};
  return {FinAb(k, IntMatrix::from_columns(k, rel)), G};
}

inline SubGroup kernel(const AbHom& f) {
  const FinAb& s = f.source();
  std::vector<IntVec> gens = preimage(f.matrix(), f.target().relation_columns());
  return generated_subgroup(s, gens);
}

inline SubGroup image(const AbHom& f) { return generated_subgroup(f.target(), f.matrix().columns()); }

/// Cokernel with the quotient map given by the identity on generators.
inline FinAb cokernel(const AbHom& f) {
  return FinAb(f.target().ngens(), hcat(f.target().relations(), f.matrix()));
}

inline SubGroup torsion_subgroup(const FinAb& A) {
  std::vector<IntVec> gens;
  std::vector<Int> orders;
  for (std::size_t i = 0; i < A.invariants().size(); ++i) {
    if (A.invariants()[i] == 0) continue;
    gens.push_back(A.invariant_generator(i));
    orders.push_back(A.invariants()[i]);
  }
  return {FinAb::from_invariants(orders), IntMatrix::from_columns(A.ngens(), gens)};
}

/// True when the subgroup generated by `a` equals the one generated by `b` in A.
inline bool same_subgroup(const FinAb& A, const std::vector<IntVec>& a, const std::vector<IntVec>& b) {
  auto rel = A.relation_columns();
  std::vector<IntVec> la = a, lb = b;
  la.insert(la.end(), rel.begin(), rel.end());
  lb.insert(lb.end(), rel.begin(), rel.end());
  return lattice_equal(A.ngens(), la, lb);
}

inline bool is_injective(const AbHom& f) { return kernel(f).group.is_trivial(); }
inline bool is_surjective(const AbHom& f) { return cokernel(f).is_trivial(); }
inline bool is_isomorphism(const AbHom& f) { return is_injective(f) && is_surjective(f); }

/// im f == ker g for A --f--> B --g--> C.
inline bool is_exact_at(const AbHom& f, const AbHom& g) {
  if (!compose(g, f).is_zero()) return false;
  return same_subgroup(f.target(), f.matrix().columns(), kernel(g).basis.columns());
}

/// Pontryagin dual of a finite group A. Characters are coordinate vectors c
/// over the invariant factors; chi_c(x) = sum c_i y_i / d_i with y = canonical(x).
class FiniteDual {
 public:
  explicit FiniteDual(FinAb A) : A_(std::move(A)) {
    if (!A_.is_finite()) throw PreconditionError("FiniteDual: group must be finite");
    dual_ = FinAb::from_invariants(A_.invariants());
  }
  const FinAb& group() const { return A_; }
  const FinAb& dual() const { return dual_; }

  QZ eval(const IntVec& chi, const IntVec& x) const {
    IntVec c = dual_.canonical(chi);
    IntVec y = A_.canonical(x);
    Rational s(0);
    for (std::size_t i = 0; i < c.size(); ++i) s += Rational(mul_checked(c[i], y[i]), A_.invariants()[i]);
    return QZ(s);
  }

  /// Character from its values on the invariant generators (angles with den | d_i).
  IntVec from_values(const std::vector<QZ>& values) const {
    const auto& d = A_.invariants();
    if (values.size() != d.size()) throw PreconditionError("FiniteDual::from_values: wrong count");
    IntVec c(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      Rational t = values[i].value() * Rational(d[i]);
      if (!t.is_integer()) throw PreconditionError("FiniteDual::from_values: value not killed by the order");
      c[i] = t.num();
    }
    return c;
  }

 private:
  FinAb A_, dual_;
};

}  // namespace rigid
