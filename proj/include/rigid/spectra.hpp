#pragma once

// Finite matrix groups over Q(i), their character tables, and the centralizer
// groups of the SL_2 dual-side example.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "rigid/finite_group.hpp"
#include "rigid/gaussian.hpp"
#include "rigid/rigidcoh.hpp"

namespace rigid {

struct UnsupportedShapeError : Error {
  explicit UnsupportedShapeError(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Z[zeta_N], stored on the power basis 1, zeta, ..., zeta^{phi(N)-1}.

namespace detail {

/// Coefficients of the N-th cyclotomic polynomial, lowest degree first.
inline std::vector<Int> cyclotomic_polynomial(Int N) {
  // x^N - 1 divided by Phi_d for every proper divisor d
  std::vector<Int> p(static_cast<std::size_t>(N) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(N)] = 1;
  for (Int d = 1; d < N; ++d) {
    if (N % d != 0) continue;
    std::vector<Int> q = cyclotomic_polynomial(d);
    // exact division by a monic polynomial
    std::vector<Int> quot(p.size() - q.size() + 1, 0);
    for (std::size_t i = quot.size(); i-- > 0;) {
      Int c = p[i + q.size() - 1];
      quot[i] = c;
      for (std::size_t j = 0; j < q.size(); ++j) p[i + j] = sub_checked(p[i + j], mul_checked(c, q[j]));
    }
    p = quot;
  }
  return p;
}

}  // namespace detail

class Cyclotomic {
 public:
  Cyclotomic() = default;
  Cyclotomic(Int N, Int value) : N_(N), c_(degree(N), 0) { c_[0] = value; }

  /// zeta_N^k
  static Cyclotomic root(Int N, Int k) {
    std::vector<Int> v(static_cast<std::size_t>(N), 0);
    v[static_cast<std::size_t>(mod_floor(k, N))] = 1;
    return from_powers(N, v);
  }
  /// sum_k v[k] zeta_N^k
  static Cyclotomic from_powers(Int N, std::vector<Int> v) {
    std::vector<Int> phi = detail::cyclotomic_polynomial(N);
    const std::size_t d = phi.size() - 1;
    for (std::size_t i = v.size(); i-- > d;) {
      Int c = v[i];
      if (c == 0) continue;
      for (std::size_t j = 0; j < phi.size(); ++j) v[i - d + j] = sub_checked(v[i - d + j], mul_checked(c, phi[j]));
    }
    v.resize(d, 0);
    Cyclotomic r;
    r.N_ = N;
    r.c_ = std::move(v);
    return r;
  }
  /// a + b i as an element of Z[zeta_N], 4 | N.
  static Cyclotomic from_gauss(Int N, const Gauss& z) {
    if (N % 4 != 0 || !z.re.is_integer() || !z.im.is_integer())
      throw PreconditionError("Cyclotomic: " + z.str() + " is not in Z[zeta_" + std::to_string(N) + "]");
    std::vector<Int> v(static_cast<std::size_t>(N), 0);
    v[0] = z.re.num();
    v[static_cast<std::size_t>(N / 4)] = z.im.num();
    return from_powers(N, v);
  }

  Int level() const { return N_; }
  const std::vector<Int>& coefficients() const { return c_; }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    a.same(b);
    Cyclotomic r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
    a.same(b);
    Cyclotomic r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    a.same(b);
    std::vector<Int> v(2 * a.c_.size(), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += mul_checked(a.c_[i], b.c_[j]);
    return from_powers(a.N_, v);
  }
  friend Cyclotomic operator*(Int k, const Cyclotomic& a) {
    Cyclotomic r = a;
    for (auto& x : r.c_) x = mul_checked(x, k);
    return r;
  }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) = default;

  /// Complex conjugate: zeta -> zeta^{-1}.
  Cyclotomic conj() const {
    std::vector<Int> v(static_cast<std::size_t>(N_), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) v[static_cast<std::size_t>(mod_floor(-static_cast<Int>(i), N_))] += c_[i];
    return from_powers(N_, v);
  }
  /// Exact division by an integer; throws if not divisible.
  Cyclotomic divided(Int k) const {
    Cyclotomic r = *this;
    for (auto& x : r.c_) {
      if (x % k != 0) throw PreconditionError("Cyclotomic: not divisible by " + std::to_string(k));
      x /= k;
    }
    return r;
  }
  std::optional<Int> as_integer() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return std::nullopt;
    return c_.empty() ? 0 : c_[0];
  }
  /// The k with this = zeta_N^k, as a fraction k / N, if it is a root of unity.
  std::optional<QZ> as_root_of_unity() const {
    for (Int k = 0; k < N_; ++k)
      if (*this == root(N_, k)) return QZ(k, N_);
    return std::nullopt;
  }

  std::string str() const {
    if (auto k = as_integer()) return std::to_string(*k);
    if (N_ == 4) return Gauss(c_[0], c_[1]).str();
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      if (!s.empty() && c_[i] > 0) s += "+";
      std::string z = i == 0 ? "" : (i == 1 ? "z" : "z^" + std::to_string(i));
      if (i == 0) s += std::to_string(c_[i]);
      else if (c_[i] == 1) s += z;
      else if (c_[i] == -1) s += "-" + z;
      else s += std::to_string(c_[i]) + z;
    }
    return s + " (z = zeta_" + std::to_string(N_) + ")";
  }

 private:
  static std::size_t degree(Int N) { return detail::cyclotomic_polynomial(N).size() - 1; }
  void same(const Cyclotomic& b) const {
    if (N_ != b.N_) throw PreconditionError("Cyclotomic: mixed levels");
  }

  Int N_ = 1;
  std::vector<Int> c_{0};
};

// ---------------------------------------------------------------------------
// Matrix groups

/// Canonical representative of the scalar class of m: first nonzero entry 1.
inline Mat2 projective_canonical(const Mat2& m) {
  for (int k = 0; k < 4; ++k) {
    const Gauss& x = m(k / 2, k % 2);
    if (!x.is_zero()) return x.inverse() * m;
  }
  throw PreconditionError("projective_canonical: zero matrix");
}

class MatrixGroup {
 public:
  /// Closure of gens under multiplication; with mod_center, matrices are
  /// identified up to scalars.
  static MatrixGroup generate(const std::vector<Mat2>& gens, std::size_t bound, bool mod_center = false) {
    if (bound < 1) throw PreconditionError("MatrixGroup: bound must be positive");
    MatrixGroup G;
    G.mod_center_ = mod_center;
    G.gens_ = gens;
    for (const auto& g : gens)
      if (g.det().is_zero()) throw PreconditionError("MatrixGroup: generator " + g.str() + " is not invertible");
    std::map<std::string, std::size_t> seen;
    auto add = [&](const Mat2& m) -> std::size_t {
      Mat2 c = G.canon(m);
      std::string key = c.str();
      auto it = seen.find(key);
      if (it != seen.end()) return it->second;
      if (G.elems_.size() >= bound)
        throw PreconditionError("MatrixGroup: closure exceeds the bound " + std::to_string(bound));
      seen.emplace(key, G.elems_.size());
      G.elems_.push_back(c);
      return G.elems_.size() - 1;
    };
    add(Mat2::identity());
    std::queue<std::size_t> q;
    q.push(0);
    while (!q.empty()) {
      std::size_t a = q.front();
      q.pop();
      for (const auto& g : gens) {
        std::size_t before = G.elems_.size();
        std::size_t b = add(G.elems_[a] * g);
        if (b == before) q.push(b);
      }
    }
    // finite closure under right multiplication by generators is a group
    const std::size_t n = G.elems_.size();
    std::vector<std::size_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        auto it = seen.find(G.canon(G.elems_[a] * G.elems_[b]).str());
        if (it == seen.end()) throw PreconditionError("MatrixGroup: closure is not closed");
        t[a * n + b] = it->second;
      }
    G.index_ = std::move(seen);
    G.group_ = make_group(FiniteGroup(n, std::move(t)));
    return G;
  }

  std::size_t order() const { return elems_.size(); }
  bool mod_center() const { return mod_center_; }
  const std::vector<Mat2>& elements() const { return elems_; }
  const Mat2& element(std::size_t i) const { return elems_.at(i); }
  const std::vector<Mat2>& generators() const { return gens_; }
  const FiniteGroup& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  std::optional<std::size_t> index_of(const Mat2& m) const {
    auto it = index_.find(canon(m).str());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Mat2& m) const { return index_of(m).has_value(); }
  /// Set equality of the closures.
  bool same_elements(const MatrixGroup& o) const {
    if (order() != o.order() || mod_center_ != o.mod_center_) return false;
    for (const auto& m : elems_)
      if (!o.contains(m)) return false;
    return true;
  }

 private:
  Mat2 canon(const Mat2& m) const { return mod_center_ ? projective_canonical(m) : m; }

  bool mod_center_ = false;
  std::vector<Mat2> gens_;
  std::vector<Mat2> elems_;
  std::map<std::string, std::size_t> index_;
  GroupPtr group_;
};

// ---------------------------------------------------------------------------
// Finite group invariants by enumeration

struct ConjugacyClasses {
  std::vector<std::size_t> representative;
  std::vector<std::size_t> size;
  std::vector<std::size_t> class_of;  // per element
  std::size_t count() const { return representative.size(); }
};

inline ConjugacyClasses conjugacy_classes(const FiniteGroup& G) {
  ConjugacyClasses C;
  const std::size_t n = G.order();
  C.class_of.assign(n, SIZE_MAX);
  // identity first, then by smallest element index
  std::vector<std::size_t> order{G.identity()};
  for (std::size_t a = 0; a < n; ++a)
    if (a != G.identity()) order.push_back(a);
  for (std::size_t a : order) {
    if (C.class_of[a] != SIZE_MAX) continue;
    std::size_t k = C.count(), sz = 0;
    for (std::size_t g = 0; g < n; ++g) {
      std::size_t c = G.mul(G.mul(g, a), G.inv(g));
      if (C.class_of[c] == SIZE_MAX) {
        C.class_of[c] = k;
        ++sz;
      }
    }
    C.representative.push_back(a);
    C.size.push_back(sz);
  }
  return C;
}

inline std::vector<std::size_t> center(const FiniteGroup& G) {
  std::vector<std::size_t> z;
  for (std::size_t a = 0; a < G.order(); ++a) {
    bool central = true;
    for (std::size_t g = 0; g < G.order() && central; ++g) central = G.mul(a, g) == G.mul(g, a);
    if (central) z.push_back(a);
  }
  return z;
}

/// Subgroup generated by a set of elements, as a sorted element list.
inline std::vector<std::size_t> generated(const FiniteGroup& G, const std::vector<std::size_t>& gens) {
  std::vector<bool> in(G.order(), false);
  in[G.identity()] = true;
  std::queue<std::size_t> q;
  q.push(G.identity());
  while (!q.empty()) {
    std::size_t x = q.front();
    q.pop();
    for (auto g : gens) {
      std::size_t y = G.mul(x, g);
      if (!in[y]) {
        in[y] = true;
        q.push(y);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < G.order(); ++a)
    if (in[a]) out.push_back(a);
  return out;
}

inline std::vector<std::size_t> commutator_subgroup(const FiniteGroup& G) {
  std::vector<std::size_t> comms;
  for (std::size_t a = 0; a < G.order(); ++a)
    for (std::size_t b = 0; b < G.order(); ++b)
      comms.push_back(G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))));
  std::sort(comms.begin(), comms.end());
  comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
  return generated(G, comms);
}

/// Linear characters as homomorphisms G -> Q/Z, each a value list per element.
inline std::vector<std::vector<QZ>> linear_characters(const FiniteGroup& G) {
  const auto& gens = G.generators();
  Int N = 1;
  for (std::size_t a = 0; a < G.order(); ++a) N = lcm(N, static_cast<Int>(G.element_order(a)));
  std::vector<std::vector<QZ>> out;
  std::vector<Int> img(gens.size(), 0);
  for (;;) {
    // extend along words in the generators; reject on conflict
    std::vector<std::optional<QZ>> val(G.order());
    val[G.identity()] = QZ(0, 1);
    std::queue<std::size_t> q;
    q.push(G.identity());
    bool ok = true;
    while (!q.empty() && ok) {
      std::size_t x = q.front();
      q.pop();
      for (std::size_t k = 0; k < gens.size() && ok; ++k) {
        std::size_t y = G.mul(x, gens[k]);
        QZ v = *val[x] + QZ(img[k], N);
        if (!val[y]) {
          val[y] = v;
          q.push(y);
        } else if (*val[y] != v) {
          ok = false;
        }
      }
    }
    if (ok) {
      for (std::size_t a = 0; a < G.order() && ok; ++a)
        for (std::size_t b = 0; b < G.order() && ok; ++b) ok = *val[G.mul(a, b)] == *val[a] + *val[b];
    }
    if (ok) {
      std::vector<QZ> chi;
      for (auto& v : val) chi.push_back(*v);
      out.push_back(chi);
    }
    std::size_t i = 0;
    while (i < img.size() && ++img[i] == N) img[i++] = 0;
    if (i == img.size()) break;
  }
  return out;
}

struct Abelianization {
  std::vector<std::size_t> commutator;
  FinAb group;
};

inline Abelianization abelianization(const FiniteGroup& G) {
  Abelianization A{commutator_subgroup(G), FinAb::trivial()};
  // G^ab is dual to the group of linear characters; read off invariants from its exponents
  auto chars = linear_characters(G);
  // the character group is a subgroup of (Q/Z)^G; its structure via orders
  std::vector<IntVec> cols;
  Int N = 1;
  for (const auto& c : chars)
    for (const auto& v : c) N = lcm(N, v.order());
  for (const auto& c : chars) {
    IntVec v;
    for (const auto& x : c) v.push_back((x.value() * Rational(N)).num());
    cols.push_back(v);
  }
  // subgroup of (Z/N)^|G| generated by the characters
  FinAb ambient = FinAb::from_invariants(std::vector<Int>(G.order(), N));
  A.group = generated_subgroup(ambient, cols).group;
  return A;
}

// ---------------------------------------------------------------------------
// Character tables

struct CharacterTable {
  std::shared_ptr<const FiniteGroup> group;
  ConjugacyClasses classes;
  Int level = 1;                             // values in Z[zeta_level]
  std::vector<std::vector<Cyclotomic>> chi;  // chi[i][class]
  std::vector<Int> degrees;

  const Cyclotomic& value(std::size_t i, std::size_t element) const { return chi.at(i).at(classes.class_of.at(element)); }

  bool row_orthogonal() const {
    const Int n = static_cast<Int>(group->order());
    for (std::size_t i = 0; i < chi.size(); ++i)
      for (std::size_t j = 0; j < chi.size(); ++j) {
        Cyclotomic s(level, 0);
        for (std::size_t c = 0; c < classes.count(); ++c)
          s = s + static_cast<Int>(classes.size[c]) * (chi[i][c] * chi[j][c].conj());
        if (s != Cyclotomic(level, i == j ? n : 0)) return false;
      }
    return true;
  }
  bool column_orthogonal() const {
    const Int n = static_cast<Int>(group->order());
    for (std::size_t a = 0; a < classes.count(); ++a)
      for (std::size_t b = 0; b < classes.count(); ++b) {
        Cyclotomic s(level, 0);
        for (std::size_t i = 0; i < chi.size(); ++i) s = s + chi[i][a] * chi[i][b].conj();
        Int expect = a == b ? n / static_cast<Int>(classes.size[a]) : 0;
        if (s != Cyclotomic(level, expect)) return false;
      }
    return true;
  }
  Int sum_of_squares() const {
    Int s = 0;
    for (Int d : degrees) s += d * d;
    return s;
  }
};

/// Linear characters from the abelianization; at most one further irreducible,
/// recovered from the regular character by subtraction.
inline CharacterTable character_table(std::shared_ptr<const FiniteGroup> G) {
  CharacterTable T;
  T.group = G;
  T.classes = conjugacy_classes(*G);
  Int N = 1;
  for (std::size_t a = 0; a < G->order(); ++a) N = lcm(N, static_cast<Int>(G->element_order(a)));
  if (N % 4 != 0) N = lcm(N, 4);
  T.level = N;
  for (const auto& lin : linear_characters(*G)) {
    std::vector<Cyclotomic> row;
    for (std::size_t c = 0; c < T.classes.count(); ++c) {
      QZ v = lin[T.classes.representative[c]];
      row.push_back(Cyclotomic::root(N, (v.value() * Rational(N)).num()));
    }
    T.chi.push_back(row);
    T.degrees.push_back(1);
  }
  const Int n = static_cast<Int>(G->order());
  const std::size_t missing = T.classes.count() - T.chi.size();
  if (missing == 0) return T;
  if (missing > 1)
    throw UnsupportedShapeError("character_table: " + std::to_string(missing) +
                                " non-linear irreducibles remain; only one is supported");
  Int rest = n - static_cast<Int>(T.chi.size());
  Int d = 1;
  while (d * d < rest) ++d;
  if (d * d != rest) throw UnsupportedShapeError("character_table: remaining degree is not a square");
  std::vector<Cyclotomic> row;
  for (std::size_t c = 0; c < T.classes.count(); ++c) {
    Cyclotomic v(N, T.classes.representative[c] == G->identity() ? n : 0);
    for (const auto& r : T.chi) v = v - r[c];
    row.push_back(v.divided(d));
  }
  T.chi.push_back(row);
  T.degrees.push_back(d);
  return T;
}

/// chi(z) / chi(1) for central z, as an element of Q/Z.
inline QZ central_character(const CharacterTable& T, std::size_t i, std::size_t z) {
  const FiniteGroup& G = *T.group;
  for (std::size_t g = 0; g < G.order(); ++g)
    if (G.mul(g, z) != G.mul(z, g)) throw PreconditionError("central_character: element is not central");
  Int d = T.degrees.at(i);
  for (Int k = 0; k < T.level; ++k)
    if (T.value(i, z) == d * Cyclotomic::root(T.level, k)) return QZ(k, T.level);
  throw PreconditionError("central_character: value is not d times a root of unity");
}

// ---------------------------------------------------------------------------
// The SL_2 example: S_phi in PGL_2 and its preimage S_phi^+ in SL_2.

namespace data {

inline std::vector<Mat2> s_phi_listed() {
  return {Mat2::identity(), Mat2(-1, 0, 0, 1), Mat2(0, 1, 1, 0), Mat2(0, 1, -1, 0)};
}

inline std::vector<Mat2> s_phi_plus_listed() {
  const Gauss i = Gauss::i();
  return {Mat2::identity(), -Mat2::identity(), Mat2(-i, 0, 0, i), Mat2(i, 0, 0, -i),
          Mat2(0, i, i, 0),  Mat2(0, -i, -i, 0), Mat2(0, 1, -1, 0), Mat2(0, -1, 1, 0)};
}

inline std::vector<Mat2> q8_generators() {
  const Gauss i = Gauss::i();
  return {Mat2(i, 0, 0, -i), Mat2(0, i, i, 0)};
}

/// S_3 acting on the sum-zero plane of Q^3, in the basis e1 - e2, e2 - e3.
inline std::vector<Mat2> s3_generators() { return {Mat2(-1, 1, 0, 1), Mat2(0, -1, 1, -1)}; }

}  // namespace data

struct PacketReport {
  std::size_t s_phi_order = 0;
  bool s_phi_elementary_abelian = false;
  bool s_phi_matches_list = false;
  std::size_t s_phi_plus_order = 0;
  bool s_phi_plus_matches_list = false;
  bool s_phi_plus_is_preimage = false;  // two lifts of each class of S_phi, and nothing else
  bool quaternion = false;              // non-abelian with a unique involution
  std::size_t center_order = 0;
  std::vector<Int> degrees;
  std::size_t two_dim_index = 0;
  QZ rho5_central;                      // at -1
  std::vector<QZ> linear_central;       // at -1, one per linear character
  bool rho5_character_is_natural_trace = false;
  bool rho5_vanishes_off_center = false;  // tr rho5 = 0 on lifts of nontrivial s
  std::vector<Int> rho5_on_lifts_of_one;  // values at 1 and -1
  bool kernel_trivial = false;            // pi0 Z^+ -> pi0 S^+
  std::size_t packet_size = 0, packet_split = 0, packet_nonsplit = 0;
  Int rigid_classes = 0;  // order of the dual-center group from the torus side
  bool rows_orthogonal = false, columns_orthogonal = false;

  bool holds() const {
    return s_phi_order == 4 && s_phi_elementary_abelian && s_phi_matches_list && s_phi_plus_order == 8 &&
           s_phi_plus_matches_list && s_phi_plus_is_preimage && quaternion && center_order == 2 &&
           degrees == std::vector<Int>{1, 1, 1, 1, 2} && rho5_central == QZ(1, 2) &&
           std::all_of(linear_central.begin(), linear_central.end(), [](const QZ& q) { return q.is_zero(); }) &&
           rho5_character_is_natural_trace && rho5_vanishes_off_center &&
           rho5_on_lifts_of_one == std::vector<Int>{2, -2} && kernel_trivial && packet_size == 5 &&
           packet_split == 4 && packet_nonsplit == 1 && rigid_classes == 2 && rows_orthogonal && columns_orthogonal;
  }
};

inline PacketReport sl2_packet_report() {
  PacketReport r;
  MatrixGroup S = MatrixGroup::generate(data::s_phi_listed(), 64, true);
  MatrixGroup Sp = MatrixGroup::generate(data::q8_generators(), 64, false);
  const FiniteGroup& G = S.group();
  const FiniteGroup& H = Sp.group();

  r.s_phi_order = S.order();
  r.s_phi_elementary_abelian = G.is_abelian();
  for (std::size_t a = 0; a < G.order(); ++a)
    if (G.mul(a, a) != G.identity()) r.s_phi_elementary_abelian = false;
  r.s_phi_matches_list = S.order() == data::s_phi_listed().size();
  for (const auto& m : data::s_phi_listed()) r.s_phi_matches_list = r.s_phi_matches_list && S.contains(m);

  r.s_phi_plus_order = Sp.order();
  r.s_phi_plus_matches_list = Sp.order() == data::s_phi_plus_listed().size();
  for (const auto& m : data::s_phi_plus_listed()) r.s_phi_plus_matches_list = r.s_phi_plus_matches_list && Sp.contains(m);
  std::vector<int> lifts(S.order(), 0);
  r.s_phi_plus_is_preimage = true;
  for (const auto& m : Sp.elements()) {
    if (!(m.det() == Gauss(1))) r.s_phi_plus_is_preimage = false;
    auto k = S.index_of(m);
    if (!k) r.s_phi_plus_is_preimage = false;
    else ++lifts[*k];
  }
  for (int c : lifts) r.s_phi_plus_is_preimage = r.s_phi_plus_is_preimage && c == 2;

  std::size_t involutions = 0;
  for (std::size_t a = 0; a < H.order(); ++a) involutions += H.element_order(a) == 2 ? 1 : 0;
  r.quaternion = !H.is_abelian() && involutions == 1;
  r.center_order = center(H).size();

  CharacterTable T = character_table(Sp.group_ptr());
  r.rows_orthogonal = T.row_orthogonal();
  r.columns_orthogonal = T.column_orthogonal();
  std::vector<std::size_t> idx(T.degrees.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return T.degrees[a] < T.degrees[b]; });
  for (auto i : idx) r.degrees.push_back(T.degrees[i]);
  r.two_dim_index = idx.back();

  const std::size_t minus_one = *Sp.index_of(-Mat2::identity());
  const std::size_t one = H.identity();
  r.rho5_central = central_character(T, r.two_dim_index, minus_one);
  for (std::size_t i = 0; i < T.degrees.size(); ++i)
    if (T.degrees[i] == 1) r.linear_central.push_back(central_character(T, i, minus_one));

  // the two-dimensional irreducible is the defining representation
  r.rho5_character_is_natural_trace = true;
  for (std::size_t a = 0; a < H.order(); ++a)
    if (!(T.value(r.two_dim_index, a) == Cyclotomic::from_gauss(T.level, Sp.element(a).trace())))
      r.rho5_character_is_natural_trace = false;

  r.rho5_vanishes_off_center = true;
  for (std::size_t a = 0; a < H.order(); ++a) {
    if (a == one || a == minus_one) continue;
    if (T.value(r.two_dim_index, a) != Cyclotomic(T.level, 0)) r.rho5_vanishes_off_center = false;
  }
  r.rho5_on_lifts_of_one = {*T.value(r.two_dim_index, one).as_integer(),
                            *T.value(r.two_dim_index, minus_one).as_integer()};

  // Z^+ = {+-1} includes into S_phi^+; kernel trivial iff -1 is not the identity there
  MatrixGroup Zp = MatrixGroup::generate({-Mat2::identity()}, 4, false);
  std::set<std::size_t> images;
  for (const auto& m : Zp.elements()) images.insert(*Sp.index_of(m));
  r.kernel_trivial = images.size() == Zp.order();

  // irreducibles sorted by central character: trivial -> the split form, nontrivial -> the inner form
  r.packet_size = T.degrees.size();
  for (std::size_t i = 0; i < T.degrees.size(); ++i)
    (central_character(T, i, minus_one).is_zero() ? r.packet_split : r.packet_nonsplit)++;
  r.rigid_classes = pi0_dual_center(data::sl2()).m_tor->group().order();
  return r;
}

}  // namespace rigid
