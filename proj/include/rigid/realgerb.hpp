#pragma once

// The real gerb at finite level n: u_n for C/R, the 2-cocycle xi, the
// extension W_n = u_n ⊠_xi Gamma, rigidifying cocycles of tori, and the
// dictionary with strong real forms (tori in general, SL_2 over Q(i)).
//
// Roots of unity are elements of Q/Z (QZ); exp(2 pi i theta) is written as theta.

#include <functional>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rigid/cochain.hpp"
#include "rigid/gaussian.hpp"
#include "rigid/rigidcoh.hpp"

namespace rigid {

/// k_n(exp(2 pi i theta)) = exp(2 pi i theta / n), theta in [0, 1).
inline QZ root_k(const QZ& x, Int n) {
  if (n < 1) throw PreconditionError("root_k: n must be positive");
  return QZ(x.value() / Rational(n));
}

/// The 2-cocycle of C/R with c(sigma, sigma) = -1, as an angle.
inline QZ real_fundamental_cocycle(std::size_t g, std::size_t h, std::size_t e) {
  return (g != e && h != e) ? QZ(1, 2) : QZ(0, 1);
}

class RealGerbLevel {
 public:
  explicit RealGerbLevel(Int n) : n_(n), U_(build_u(LevelDatum::real(n))) {
    if (n < 2 || n % 2 != 0) throw PreconditionError("RealGerbLevel: n must be even");
    const FiniteGroup& G = gamma();
    e_ = G.identity();
    sigma_ = 1 - e_;
    pi_ = std::make_shared<const GroupSurjection>(GroupSurjection::identity(U_.level.G));
    build_xi();
    build_tables();
  }

  Int n() const { return n_; }
  const UPoints& u_points() const { return U_; }
  const LevelDatum& level() const { return U_.level; }
  const FiniteGroup& gamma() const { return *U_.level.G; }
  const GroupPtr& gamma_ptr() const { return U_.level.G; }
  const std::shared_ptr<const GroupSurjection>& identity_surjection() const { return pi_; }
  std::size_t sigma() const { return sigma_; }
  std::size_t gamma_identity() const { return e_; }

  /// mu_n in angle units 1/n, sigma acting by inversion.
  const std::shared_ptr<const GammaModule>& mu() const { return mu_; }
  /// d(l c) with values in mu_n, degree 3 and level 2.
  const LevelCochain& dlc() const { return *dlc_; }
  /// Hom(mu_n, u_n) on the generators of u_n (phi -> phi(1)).
  const std::shared_ptr<const GammaModule>& hom_mu_u() const { return hom_; }

  /// xi(g, h) in u_n generator coordinates.
  const IntVec& xi(std::size_t g, std::size_t h) const { return xi_.at(g * 2 + h); }

  // u_n elements
  std::size_t u_order() const { return elems_.size(); }
  const IntVec& u_element(std::size_t i) const { return elems_.at(i); }
  std::size_t u_index(const IntVec& x) const { return index_.at(U_.u->module().canonical(x)); }
  std::size_t u_zero() const { return zero_; }
  std::size_t u_add(std::size_t a, std::size_t b) const { return add_[a * elems_.size() + b]; }
  std::size_t u_act(std::size_t g, std::size_t a) const { return act_[g * elems_.size() + a]; }

  // W_n elements: index x * 2 + gamma
  std::size_t order() const { return 2 * elems_.size(); }
  std::size_t make(std::size_t x, std::size_t g) const { return x * 2 + g; }
  std::size_t u_part(std::size_t w) const { return w / 2; }
  std::size_t gamma_part(std::size_t w) const { return w % 2; }
  std::size_t section(std::size_t g) const { return make(zero_, g); }
  std::size_t identity() const { return make(zero_, e_); }
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a * order() + b]; }
  std::size_t inverse(std::size_t w) const {
    for (std::size_t v = 0; v < order(); ++v)
      if (mul(w, v) == identity()) return v;
    throw PreconditionError("RealGerbLevel: element without inverse");
  }

  /// Associativity, identity and inverses over all of W_n.
  bool check_group() const {
    const std::size_t N = order();
    for (std::size_t a = 0; a < N; ++a) {
      if (mul(identity(), a) != a || mul(a, identity()) != a) return false;
      bool has_inv = false;
      for (std::size_t b = 0; b < N && !has_inv; ++b) has_inv = mul(a, b) == identity();
      if (!has_inv) return false;
      for (std::size_t b = 0; b < N; ++b) {
        std::size_t ab = mul(a, b);
        for (std::size_t c = 0; c < N; ++c)
          if (mul(ab, c) != mul(a, mul(b, c))) return false;
      }
    }
    return true;
  }

  /// (l c ⊔ delta_e)(g) in lifted coordinates: rational vectors on the
  /// generators e_tau, using n theta for the pairing of an angle theta with
  /// Hom(mu_n, u_n) and the signed integral action on e_tau.
  std::vector<Rational> lifted_lc_cup_delta(std::size_t g) const {
    const FiniteGroup& G = gamma();
    std::vector<Rational> out(2, Rational(0));
    for (std::size_t t = 0; t < 2; ++t) {
      QZ theta = root_k(real_fundamental_cocycle(g, t, e_), n_);
      Rational w = theta.value() * Rational(n_);
      // (g t) delta_e on lifts: sigma e_tau = -e_{sigma tau}, then inverse unit -1
      std::size_t s = G.mul(g, t);
      IntVec v(2, 0);
      v[s] = 1;  // the two signs cancel for sigma
      for (std::size_t k = 0; k < 2; ++k) out[k] += w * Rational(v[k]);
    }
    return out;
  }

 private:
  void build_xi() {
    const GroupPtr& G = U_.level.G;
    const Int n = n_;
    auto angles = std::make_shared<const GammaModule>(
        GammaModule::from_generators(G, FinAb::cyclic(2 * n), {IntMatrix{{-1}}}));
    mu_ = std::make_shared<const GammaModule>(GammaModule::from_generators(G, FinAb::cyclic(n), {IntMatrix{{-1}}}));
    // l o c in units of 1/(2n)
    auto lc = LevelCochain::from_function(pi_, angles, 2, 2, [&](const std::vector<std::size_t>& g) {
      QZ th = root_k(real_fundamental_cocycle(g[0], g[1], e_), n);
      Rational v = th.value() * Rational(2 * n);
      return IntVec{v.num()};
    });
    LevelCochain f = differential(lc);
    // d(l c) takes values in mu_n (even multiples of 1/(2n))
    dlc_ = std::make_shared<const LevelCochain>(LevelCochain::from_function(
        pi_, mu_, 3, 2,
        [&](const std::vector<std::size_t>& g) {
          Int v = mod_floor(f.at(g)[0], 2 * n);
          if (v % 2 != 0) throw PreconditionError("RealGerbLevel: d(l c) is not mu_n-valued");
          return IntVec{v / 2};
        },
        false));
    std::vector<IntMatrix> hom_act;
    for (std::size_t g = 0; g < G->order(); ++g) hom_act.push_back(U_.level.unit_inverse(g) * U_.u->act(g));
    hom_ = std::make_shared<const GammaModule>(G, U_.u->module(), hom_act);
    std::vector<std::vector<IntVec>> val(1, std::vector<IntVec>(U_.u->ngens()));
    for (std::size_t k = 0; k < U_.u->ngens(); ++k) {
      IntVec e(U_.u->ngens(), 0);
      e[k] = 1;
      val[0][k] = e;
    }
    Pairing P(pi_, mu_, hom_, U_.u, val);
    LevelCochain x = unbalanced_cup(*dlc_, NegOneCochain{hom_, U_.delta_e(1)}, P);
    for (std::size_t g = 0; g < 2; ++g)
      for (std::size_t h = 0; h < 2; ++h) xi_.push_back(U_.u->module().reduce(x.at({g, h})));
  }

  void build_tables() {
    const FinAb& A = U_.u->module();
    elems_ = A.elements();
    for (std::size_t i = 0; i < elems_.size(); ++i) index_[A.canonical(elems_[i])] = i;
    zero_ = u_index(IntVec(A.ngens(), 0));
    const std::size_t k = elems_.size();
    add_.resize(k * k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) add_[a * k + b] = u_index(vec_add(elems_[a], elems_[b]));
    act_.resize(2 * k);
    for (std::size_t g = 0; g < 2; ++g)
      for (std::size_t a = 0; a < k; ++a) act_[g * k + a] = u_index(U_.u->apply(g, elems_[a]));
    std::vector<std::size_t> xi_idx;
    for (const auto& v : xi_) xi_idx.push_back(u_index(v));
    const std::size_t N = 2 * k;
    const FiniteGroup& G = gamma();
    mul_.resize(N * N);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) {
        std::size_t x = u_part(a), g = gamma_part(a), y = u_part(b), h = gamma_part(b);
        std::size_t z = u_add(u_add(x, u_act(g, y)), xi_idx[g * 2 + h]);
        mul_[a * N + b] = make(z, G.mul(g, h));
      }
  }

  Int n_;
  UPoints U_;
  std::size_t e_ = 0, sigma_ = 1;
  std::shared_ptr<const GroupSurjection> pi_;
  std::shared_ptr<const GammaModule> mu_, hom_;
  std::shared_ptr<const LevelCochain> dlc_;
  std::vector<IntVec> xi_;
  std::vector<IntVec> elems_;
  std::map<IntVec, std::size_t> index_;
  std::size_t zero_ = 0;
  std::vector<std::size_t> add_, act_, mul_;
};

/// W_m -> W_n for n | m: (x, g) -> (p(x) + alpha(g), g).
struct WTransition {
  std::shared_ptr<const RealGerbLevel> fine, coarse;
  std::vector<IntVec> alpha;  // per gamma, in u_n coordinates
  std::vector<std::size_t> map;
  bool alpha_trivial = false;
  bool d_alpha_matches_xi = false;  // d alpha = p(xi_m) - xi_n

  std::size_t operator()(std::size_t w) const { return map.at(w); }

  bool is_homomorphism() const {
    for (std::size_t a = 0; a < fine->order(); ++a)
      for (std::size_t b = 0; b < fine->order(); ++b)
        if (map[fine->mul(a, b)] != coarse->mul(map[a], map[b])) return false;
    return true;
  }
  bool is_surjective() const {
    std::vector<bool> hit(coarse->order(), false);
    for (auto v : map) hit[v] = true;
    for (bool h : hit)
      if (!h) return false;
    return true;
  }
};

/// alpha = (l_n c ⊔ delta_e)^{-1} p(l_m c ⊔ delta_e), computed on lifts.
inline WTransition alpha_transition(std::shared_ptr<const RealGerbLevel> fine,
                                    std::shared_ptr<const RealGerbLevel> coarse) {
  if (fine->n() % coarse->n() != 0) throw PreconditionError("alpha_transition: n must divide m");
  WTransition tr;
  tr.fine = fine;
  tr.coarse = coarse;
  Transition p = transition_p(fine->level(), coarse->level());
  const FinAb& Un = coarse->u_points().u->module();
  tr.alpha_trivial = true;
  for (std::size_t g = 0; g < 2; ++g) {
    auto lm = fine->lifted_lc_cup_delta(g);
    auto ln = coarse->lifted_lc_cup_delta(g);
    IntVec a(2);
    for (std::size_t k = 0; k < 2; ++k) {
      Rational d = lm[k] - ln[k];
      if (!d.is_integer()) throw PreconditionError("alpha_transition: alpha is not integral on lifts");
      a[k] = d.num();
    }
    a = Un.reduce(a);
    tr.alpha_trivial = tr.alpha_trivial && Un.is_zero(a);
    tr.alpha.push_back(a);
  }
  // d alpha (g, h) = g alpha(h) - alpha(g h) + alpha(g) against p(xi_m) - xi_n
  tr.d_alpha_matches_xi = true;
  const FiniteGroup& G = coarse->gamma();
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t h = 0; h < 2; ++h) {
      IntVec da = vec_add(vec_sub(coarse->u_points().u->apply(g, tr.alpha[h]), tr.alpha[G.mul(g, h)]), tr.alpha[g]);
      IntVec rhs = vec_sub(p.on_points(fine->xi(g, h)), coarse->xi(g, h));
      if (!Un.equal(da, rhs)) tr.d_alpha_matches_xi = false;
    }
  for (std::size_t w = 0; w < fine->order(); ++w) {
    IntVec x = p.on_points(fine->u_element(fine->u_part(w)));
    std::size_t g = fine->gamma_part(w);
    tr.map.push_back(coarse->make(coarse->u_index(vec_add(x, tr.alpha[g])), g));
  }
  return tr;
}

/// Finite-order points of S(C) = Y (x) Q/Z in Y coordinates; sigma acts by
/// rho(sigma) on Y and by complex conjugation on the roots of unity.
class TorusPoints {
 public:
  using Point = std::vector<QZ>;

  explicit TorusPoints(std::shared_ptr<const TorusDatum> T) : T_(std::move(T)) {
    if (T_->group().order() != 2) throw PreconditionError("TorusPoints: Gamma must be Z/2");
  }

  const TorusDatum& torus() const { return *T_; }
  std::size_t rank() const { return T_->rank(); }
  Point zero() const { return Point(rank()); }
  Point add(const Point& a, const Point& b) const {
    Point c(rank());
    for (std::size_t i = 0; i < rank(); ++i) c[i] = a[i] + b[i];
    return c;
  }
  Point neg(const Point& a) const {
    Point c(rank());
    for (std::size_t i = 0; i < rank(); ++i) c[i] = -a[i];
    return c;
  }
  Point sub(const Point& a, const Point& b) const { return add(a, neg(b)); }
  Point apply(std::size_t g, const Point& a) const {
    const IntMatrix& r = T_->rho(g);
    const bool conj = g != T_->group().identity();
    Point c(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      QZ s;
      for (std::size_t j = 0; j < rank(); ++j) s += r(i, j) * a[j];
      c[i] = conj ? -s : s;
    }
    return c;
  }
  bool is_zero(const Point& a) const {
    for (const auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }
  /// The point num ybar / den of Z = Ybar / Y.
  Point from_ybar(const IntVec& ybar) const {
    IntVec y = T_->num() * ybar;
    Point p(rank());
    for (std::size_t i = 0; i < rank(); ++i) p[i] = QZ(y[i], T_->den());
    return p;
  }
  /// Ybar coordinates of a point of Z, or nothing if the point is not in Z.
  std::optional<IntVec> to_ybar(const Point& p) const {
    IntVec v(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      Rational r = p[i].value() * Rational(T_->den());
      if (!r.is_integer()) return std::nullopt;
      v[i] = r.num();
    }
    return solve(T_->num(), v);
  }
  /// Point from rational Y coordinates.
  static Point from_rational(const std::vector<Rational>& y) {
    Point p;
    for (const auto& r : y) p.emplace_back(r);
    return p;
  }
  std::string str(const Point& p) const {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + p[i].str();
    return s + ")";
  }

 private:
  std::shared_ptr<const TorusDatum> T_;
};

using TorusPoint = TorusPoints::Point;

/// A 1-cocycle of W_n valued in S(C): z(x ⊠ g) = phi(x) + b(g).
struct RealRigidCocycle {
  std::shared_ptr<const TorusPoints> S;
  std::shared_ptr<const RealGerbLevel> W;
  IntVec phi;            // phi(delta_e(1)) in Ybar coordinates
  std::vector<TorusPoint> table;  // indexed by W elements

  const TorusPoint& operator()(std::size_t w) const { return table.at(w); }
  const TorusPoint& at_sigma() const { return table.at(W->section(W->sigma())); }
};

namespace detail {

inline GammaModule z_module_real(const TorusDatum& T, const RealGerbLevel& W) { return T.z_module(W.level()); }

inline RealRigidCocycle assemble(std::shared_ptr<const TorusPoints> S, std::shared_ptr<const RealGerbLevel> W,
                                 const IntVec& phi, const std::vector<TorusPoint>& on_gamma) {
  const TorusDatum& T = S->torus();
  GammaModule Z = detail::z_module_real(T, *W);
  AbHom f = realize_hom_u_Z(W->u_points(), Z, phi);
  RealRigidCocycle z{S, W, phi, {}};
  for (std::size_t w = 0; w < W->order(); ++w) {
    TorusPoint a = S->from_ybar(f(W->u_element(W->u_part(w))));
    z.table.push_back(S->add(a, on_gamma[W->gamma_part(w)]));
  }
  return z;
}

}  // namespace detail

/// z_{lambda,n}(x ⊠ g) = phi_lambda(x) + (l c ⊔ n lambda)(g), for lambda in Ybar^N
/// given in Ybar coordinates. The unbalanced cup is computed with the pairing
/// of angles (units 1/(2n)) against Y.
inline RealRigidCocycle z_lambda(std::shared_ptr<const TorusPoints> S, std::shared_ptr<const RealGerbLevel> W,
                                 const IntVec& lambda) {
  const TorusDatum& T = S->torus();
  const Int n = W->n();
  if (T.group().table() != W->gamma().table()) throw PreconditionError("z_lambda: torus is not over Z/2");
  if (n % T.exponent() != 0) throw PreconditionError("z_lambda: [Ybar:Y] exponent must divide n");
  if (!vec_is_zero(T.norm() * lambda)) throw PreconditionError("z_lambda: lambda is not in the norm kernel");
  IntVec phi = to_hom_uZ(T, lambda, W->level());
  // n lambda in Y coordinates
  IntVec nl = T.num() * lambda;
  for (auto& x : nl) {
    x = mul_checked(x, n);
    if (x % T.den() != 0) throw PreconditionError("z_lambda: n lambda is not integral");
    x /= T.den();
  }
  const std::size_t r = T.rank();
  auto pi = W->identity_surjection();
  auto angles = std::make_shared<const GammaModule>(
      GammaModule::from_generators(W->gamma_ptr(), FinAb::cyclic(2 * n), {IntMatrix{{-1}}}));
  auto Y = std::make_shared<const GammaModule>(T.y_module());
  Pairing P = Pairing::lattice_tensor(pi, angles, Y);
  auto lc = LevelCochain::from_function(pi, angles, 2, 2, [&](const std::vector<std::size_t>& g) {
    Rational v = root_k(real_fundamental_cocycle(g[0], g[1], W->gamma_identity()), n).value() * Rational(2 * n);
    return IntVec{v.num()};
  });
  LevelCochain b = unbalanced_cup(lc, NegOneCochain{Y, nl}, P);
  std::vector<TorusPoint> on_gamma;
  for (std::size_t g = 0; g < 2; ++g) {
    const IntVec& v = b.at({g});
    TorusPoint p(r);
    for (std::size_t k = 0; k < r; ++k) p[k] = QZ(v[k], 2 * n);
    on_gamma.push_back(p);
  }
  return detail::assemble(std::move(S), std::move(W), phi, on_gamma);
}

/// z(w1 w2) = z(w1) + w1 z(w2) for all pairs; returns the number of failures.
inline std::size_t cocycle_failures(const RealRigidCocycle& z) {
  const RealGerbLevel& W = *z.W;
  std::size_t bad = 0;
  for (std::size_t a = 0; a < W.order(); ++a)
    for (std::size_t b = 0; b < W.order(); ++b) {
      TorusPoint rhs = z.S->add(z(a), z.S->apply(W.gamma_part(a), z(b)));
      if (z(W.mul(a, b)) != rhs) ++bad;
    }
  return bad;
}

/// z restricted to u_n equals phi realized as a homomorphism u_n -> Z.
inline bool restriction_matches(const RealRigidCocycle& z, const IntVec& phi) {
  const RealGerbLevel& W = *z.W;
  GammaModule Z = detail::z_module_real(z.S->torus(), W);
  AbHom f = realize_hom_u_Z(W.u_points(), Z, phi);
  for (std::size_t x = 0; x < W.u_order(); ++x)
    if (z(W.make(x, W.gamma_identity())) != z.S->from_ybar(f(W.u_element(x)))) return false;
  return true;
}

inline bool pointwise_equal(const RealRigidCocycle& a, const RealRigidCocycle& b) { return a.table == b.table; }

inline bool is_sum(const RealRigidCocycle& sum, const RealRigidCocycle& a, const RealRigidCocycle& b) {
  for (std::size_t w = 0; w < sum.table.size(); ++w)
    if (sum.table[w] != a.S->add(a.table[w], b.table[w])) return false;
  return true;
}

/// Pullback of a coarse cocycle along W_m -> W_n equals the fine cocycle.
inline bool inflation_matches(const WTransition& tr, const RealRigidCocycle& coarse, const RealRigidCocycle& fine) {
  for (std::size_t w = 0; w < tr.fine->order(); ++w)
    if (coarse(tr(w)) != fine(w)) return false;
  return true;
}

struct CoboundarySearch {
  bool found = false;
  Int denominator_bound = 0;
  std::size_t candidates = 0;
  TorusPoint witness;
};

/// Searches s with angles in (1/D)Z/Z such that table(w) = w s - s for all w.
inline CoboundarySearch find_coboundary(const TorusPoints& S, const RealGerbLevel& W,
                                        const std::vector<TorusPoint>& table, Int D) {
  CoboundarySearch res;
  res.denominator_bound = D;
  const std::size_t r = S.rank();
  std::vector<Int> c(r, 0);
  for (;;) {
    ++res.candidates;
    TorusPoint s(r);
    for (std::size_t i = 0; i < r; ++i) s[i] = QZ(c[i], D);
    bool ok = true;
    for (std::size_t w = 0; w < W.order() && ok; ++w)
      ok = table[w] == S.sub(S.apply(W.gamma_part(w), s), s);
    if (ok) {
      res.found = true;
      res.witness = s;
      return res;
    }
    std::size_t i = 0;
    while (i < r && ++c[i] == D) c[i++] = 0;
    if (i == r) return res;
  }
}

/// Difference of two cocycle tables.
inline std::vector<TorusPoint> difference(const RealRigidCocycle& a, const RealRigidCocycle& b) {
  std::vector<TorusPoint> d;
  for (std::size_t w = 0; w < a.table.size(); ++w) d.push_back(a.S->sub(a.table[w], b.table[w]));
  return d;
}

/// The classical Tate-Nakayama cocycle (c ∪ lambda)(g) = sum_t c(g, t) (g t) lambda
/// for integral lambda in Y^N, inflated to W_n along W_n -> Gamma.
inline std::vector<TorusPoint> classical_cocycle_inflated(const TorusPoints& S, const RealGerbLevel& W,
                                                          const IntVec& lambda_y) {
  const TorusDatum& T = S.torus();
  const FiniteGroup& G = W.gamma();
  std::vector<TorusPoint> on_gamma;
  for (std::size_t g = 0; g < 2; ++g) {
    TorusPoint acc = S.zero();
    for (std::size_t t = 0; t < 2; ++t) {
      QZ c = real_fundamental_cocycle(g, t, G.identity());
      IntVec y = T.rho(G.mul(g, t)) * lambda_y;
      TorusPoint p(S.rank());
      for (std::size_t k = 0; k < S.rank(); ++k) p[k] = y[k] * c;
      acc = S.add(acc, p);
    }
    on_gamma.push_back(acc);
  }
  std::vector<TorusPoint> out;
  for (std::size_t w = 0; w < W.order(); ++w) out.push_back(on_gamma[W.gamma_part(w)]);
  return out;
}

struct BoundarySquareReport {
  bool holds = true;
  bool values_in_z = true;
  std::size_t checked = 0;
};

/// With c(g) = z(s(g)) for the section s(1) = 1, s(sigma) = (x0, sigma):
/// dc(g, h) = z(s(g) s(h) s(gh)^{-1}), an element of Z.
inline BoundarySquareReport boundary_square_check(const RealRigidCocycle& z, std::size_t x0 = SIZE_MAX) {
  const RealGerbLevel& W = *z.W;
  const TorusPoints& S = *z.S;
  const FiniteGroup& G = W.gamma();
  if (x0 == SIZE_MAX) x0 = W.u_zero();
  auto s = [&](std::size_t g) { return g == G.identity() ? W.identity() : W.make(x0, g); };
  BoundarySquareReport rep;
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t h = 0; h < 2; ++h) {
      TorusPoint dc = S.add(S.sub(S.apply(g, z(s(h))), z(s(G.mul(g, h)))), z(s(g)));
      std::size_t u = W.mul(W.mul(s(g), s(h)), W.inverse(s(G.mul(g, h))));
      TorusPoint rhs = z(u);
      ++rep.checked;
      if (dc != rhs) rep.holds = false;
      if (!S.to_ybar(rhs)) rep.values_in_z = false;
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Strong real forms of tori: delta = t sigma with t in S(C) of finite order.

struct TorusStrongForm {
  TorusPoint t;
};

inline TorusPoint strong_form_square(const TorusPoints& S, const TorusStrongForm& d) {
  return S.add(d.t, S.apply(1 - S.torus().group().identity(), d.t));
}

inline TorusStrongForm strong_form_from_cocycle(const RealRigidCocycle& z) { return {z.at_sigma()}; }

/// z_delta(x ⊠ g) = phi_delta(x) + (t if g = sigma), with phi_delta the
/// element of Hom(u_n, Z)^Gamma sending xi(sigma, sigma) to delta^2.
inline RealRigidCocycle cocycle_from_strong_form(std::shared_ptr<const TorusPoints> S,
                                                 std::shared_ptr<const RealGerbLevel> W, const TorusStrongForm& d) {
  const TorusDatum& T = S->torus();
  TorusPoint sq = strong_form_square(*S, d);
  auto ybar = S->to_ybar(sq);
  if (!ybar) throw PreconditionError("cocycle_from_strong_form: delta^2 is not in Z");
  Int ord = 1;
  for (const auto& q : sq) ord = lcm(ord, q.order());
  if (W->n() % ord != 0 || W->n() % T.exponent() != 0)
    throw PreconditionError("cocycle_from_strong_form: n must be a multiple of the order of delta^2");
  GammaModule Z = detail::z_module_real(T, *W);
  HomUZ H = hom_u_Z(W->level(), Z);
  const IntVec& x = W->xi(W->sigma(), W->sigma());
  std::optional<IntVec> phi;
  for (const auto& c : H.group.elements()) {
    IntVec zz = H.basis * c;
    AbHom f = realize_hom_u_Z(W->u_points(), Z, zz);
    if (S->from_ybar(f(x)) == sq) {
      phi = zz;
      break;
    }
  }
  if (!phi) throw PreconditionError("cocycle_from_strong_form: no phi with phi(xi(sigma, sigma)) = delta^2");
  std::vector<TorusPoint> on_gamma{S->zero(), S->zero()};
  on_gamma[W->sigma()] = d.t;
  return detail::assemble(std::move(S), std::move(W), *phi, on_gamma);
}

// ---------------------------------------------------------------------------
// SL_2 over Q(i): the anisotropic torus S = {C diag(t, 1/t) C^{-1}} with the
// Cayley matrix C = [[1, i], [i, 1]]; Z = mu_2 = {+-1}.

inline Mat2 cayley() { return {1, Gauss::i(), Gauss::i(), 1}; }

/// The point of the norm-one torus with Y coordinate theta as a matrix.
inline Mat2 sl2_torus_point(const QZ& theta) {
  Gauss t = gauss_root_of_unity(theta);
  Mat2 C = cayley();
  return C * Mat2::diag(t, t.inverse()) * C.inverse();
}

inline Mat2 sl2_j() { return {0, 1, -1, 0}; }

struct SL2StrongForm {
  Mat2 g;

  Mat2 square() const { return g * g.conj(); }
  bool valid() const {
    if (!(g.det() == Gauss(1))) return false;
    Mat2 s = square();
    return s == Mat2::identity() || s == -Mat2::identity();
  }
};

using SL2Cocycle = std::vector<Mat2>;  // indexed by W elements

inline std::size_t sl2_cocycle_failures(const RealGerbLevel& W, const SL2Cocycle& z) {
  std::size_t bad = 0;
  for (std::size_t a = 0; a < W.order(); ++a)
    for (std::size_t b = 0; b < W.order(); ++b) {
      Mat2 zb = W.gamma_part(a) == W.gamma_identity() ? z[b] : z[b].conj();
      if (!(z[W.mul(a, b)] == z[a] * zb)) ++bad;
    }
  return bad;
}

/// A torus cocycle of the norm-one torus pushed into SL_2.
inline SL2Cocycle sl2_cocycle_from_torus(const RealRigidCocycle& z) {
  const TorusDatum& T = z.S->torus();
  if (T.rank() != 1 || T.rho(1 - T.group().identity()) != IntMatrix{{-1}})
    throw PreconditionError("sl2_cocycle_from_torus: needs the norm-one torus");
  SL2Cocycle out;
  for (const auto& p : z.table) out.push_back(sl2_torus_point(p[0]));
  return out;
}

inline SL2StrongForm sl2_strong_form_from_cocycle(const RealGerbLevel& W, const SL2Cocycle& z) {
  return {z.at(W.section(W.sigma()))};
}

/// z_delta(x ⊠ g) = phi_delta(x) g_delta^{[g = sigma]}, phi_delta(xi(sigma, sigma)) = delta^2.
inline SL2Cocycle sl2_cocycle_from_strong_form(const RealGerbLevel& W, const SL2StrongForm& d) {
  if (!d.valid()) throw PreconditionError("sl2_cocycle_from_strong_form: not a strong real form with Z = mu_2");
  Mat2 sq = d.square();
  // u_n is cyclic, generated by xi(sigma, sigma); phi(k xi) = sq^k
  std::size_t gen = W.u_index(W.xi(W.sigma(), W.sigma()));
  std::vector<Mat2> phi(W.u_order());
  std::vector<bool> seen(W.u_order(), false);
  std::size_t x = W.u_zero();
  Mat2 val = Mat2::identity();
  for (std::size_t k = 0; k < W.u_order(); ++k) {
    if (seen[x]) throw PreconditionError("sl2_cocycle_from_strong_form: xi(sigma, sigma) does not generate u_n");
    seen[x] = true;
    phi[x] = val;
    x = W.u_add(x, gen);
    val = val * sq;
  }
  if (x != W.u_zero() || !(val == Mat2::identity()))
    throw PreconditionError("sl2_cocycle_from_strong_form: n must be a multiple of the order of delta^2");
  SL2Cocycle z;
  for (std::size_t w = 0; w < W.order(); ++w) {
    Mat2 m = phi[W.u_part(w)];
    if (W.gamma_part(w) == W.sigma()) m = m * d.g;
    z.push_back(m);
  }
  return z;
}

/// For delta^2 = -1: g J^{-1} is Hermitian of determinant 1, hence definite;
/// its sign is invariant under g -> h g conj(h)^{-1}. For delta^2 = 1 every
/// strong real form is equivalent to sigma (H^1(R, SL_2) = 1); invariant 0.
inline int sl2_strong_form_invariant(const SL2StrongForm& d) {
  if (!d.valid()) throw PreconditionError("sl2_strong_form_invariant: not a strong real form");
  if (d.square() == Mat2::identity()) return 0;
  Mat2 H = d.g * sl2_j().inverse();
  if (!(H == H.conj_transpose())) throw PreconditionError("sl2_strong_form_invariant: g J^-1 is not Hermitian");
  Rational tr = H.trace().re;
  return tr > Rational(0) ? 1 : -1;
}

/// Gaussian integers a + b i with |a|, |b| <= bound.
inline std::vector<Gauss> gaussian_box(Int bound) {
  std::vector<Gauss> out;
  for (Int a = -bound; a <= bound; ++a)
    for (Int b = -bound; b <= bound; ++b) out.emplace_back(a, b);
  return out;
}

/// h in SL_2(Q(i)) with h g1 = g2 conj(h). One row of h runs over Gaussian
/// integers in the box, the other row is solved from the matching row of the
/// equation, so h itself may have denominators.
inline std::optional<Mat2> sl2_equivalence_witness(const SL2StrongForm& d1, const SL2StrongForm& d2, Int bound = 2) {
  using Row = std::array<Gauss, 2>;
  const Mat2& a = d1.g;
  const Mat2& b = d2.g;
  auto times = [&](const Row& r) -> Row { return {r[0] * a(0, 0) + r[1] * a(1, 0), r[0] * a(0, 1) + r[1] * a(1, 1)}; };
  auto rational_sqrt = [](const Rational& q) -> std::optional<Rational> {
    if (q < Rational(0)) return std::nullopt;
    auto isqrt = [](Int v) -> std::optional<Int> {
      Int r = static_cast<Int>(std::llround(std::sqrt(static_cast<double>(v))));
      for (Int c = std::max<Int>(0, r - 1); c <= r + 1; ++c)
        if (c * c == v) return c;
      return std::nullopt;
    };
    auto n = isqrt(q.num()), d = isqrt(q.den());
    if (!n || !d) return std::nullopt;
    return Rational(*n, *d);
  };
  auto check = [&](const Row& r0, const Row& r1) -> std::optional<Mat2> {
    Mat2 h(r0[0], r0[1], r1[0], r1[1]);
    if (h.det() == Gauss(1) && h * a == b * h.conj()) return h;
    return std::nullopt;
  };
  auto box = gaussian_box(bound);
  std::vector<Row> rows;
  for (const auto& x : box)
    for (const auto& y : box) rows.push_back({x, y});
  // row k of h g1 = b(k,k) conj(row k) + b(k,1-k) conj(row 1-k)
  for (int k = 0; k < 2; ++k) {
    const Gauss& off = b(k, 1 - k);
    if (off.is_zero()) continue;
    Gauss inv = off.inverse();
    for (const auto& r : rows) {
      Row hr = times(r);
      Row other{(inv * (hr[0] - b(k, k) * r[0].conj())).conj(), (inv * (hr[1] - b(k, k) * r[1].conj())).conj()};
      Mat2 m = k == 0 ? Mat2(r[0], r[1], other[0], other[1]) : Mat2(other[0], other[1], r[0], r[1]);
      // the solved row is real-linear in r, so det scales by t^2 under r -> t r
      Gauss D = m.det();
      if (D.is_zero() || !D.im.is_zero()) continue;
      auto t = rational_sqrt(Rational(1) / D.re);
      if (!t) continue;
      Mat2 h = Gauss(*t) * m;
      if (h.det() == Gauss(1) && h * a == b * h.conj()) return h;
    }
    return std::nullopt;
  }
  // b diagonal: the rows decouple into real planes V_k = {r : r g1 = b(k,k) conj(r)},
  // on which det is real, so rescaling the first row by a rational fixes det = 1
  std::vector<Row> r0s, r1s;
  for (const auto& r : rows) {
    if (r[0].is_zero() && r[1].is_zero()) continue;
    Row hr = times(r);
    if (hr[0] == b(0, 0) * r[0].conj() && hr[1] == b(0, 0) * r[1].conj()) r0s.push_back(r);
    if (hr[0] == b(1, 1) * r[0].conj() && hr[1] == b(1, 1) * r[1].conj()) r1s.push_back(r);
  }
  for (const auto& r0 : r0s)
    for (const auto& r1 : r1s) {
      Gauss D = r0[0] * r1[1] - r0[1] * r1[0];
      if (D.is_zero() || !D.im.is_zero()) continue;
      Gauss s = D.inverse();
      if (auto h = check({s * r0[0], s * r0[1]}, r1)) return h;
    }
  return std::nullopt;
}

/// Strong real forms g sigma with g in SL_2(Z[i]) having entries in the box.
inline std::vector<SL2StrongForm> enumerate_sl2_strong_forms(Int bound = 1) {
  std::vector<SL2StrongForm> out;
  auto box = gaussian_box(bound);
  for (const auto& a : box)
    for (const auto& b : box)
      for (const auto& c : box)
        for (const auto& e : box) {
          SL2StrongForm d{Mat2(a, b, c, e)};
          if (d.valid()) out.push_back(d);
        }
  return out;
}

struct SL2Census {
  std::size_t forms = 0;
  std::map<int, SL2StrongForm> representatives;  // invariant -> representative
  std::size_t classes_square_minus_one = 0;
  std::size_t classes_square_one = 0;
  bool all_witnessed = true;  // every enumerated form is conjugate to its representative
};

inline SL2Census sl2_strong_form_census(Int bound = 1, Int witness_bound = 2) {
  SL2Census c;
  auto forms = enumerate_sl2_strong_forms(bound);
  c.forms = forms.size();
  for (const auto& d : forms) {
    int inv = sl2_strong_form_invariant(d);
    auto it = c.representatives.find(inv);
    if (it == c.representatives.end()) {
      c.representatives.emplace(inv, d);
      continue;
    }
    if (!sl2_equivalence_witness(it->second, d, witness_bound)) c.all_witnessed = false;
  }
  for (const auto& [inv, d] : c.representatives) (inv == 0 ? c.classes_square_one : c.classes_square_minus_one)++;
  return c;
}

// ---------------------------------------------------------------------------
// phi(xi) computed two ways, and xi^* : Hom(u_n, Z)^Gamma -> H^2(Gamma, Z).

struct Fact46Report {
  bool agree = true;
  CochainTable phi_of_xi;
  IntVec h2_class;
};

inline Fact46Report fact46_check(const RealGerbLevel& W, const GammaModule& Z, const IntVec& z) {
  Fact46Report rep;
  AbHom f = realize_hom_u_Z(W.u_points(), Z, z);
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t h = 0; h < 2; ++h) rep.phi_of_xi.push_back(Z.module().reduce(f(W.xi(g, h))));
  // d(l c) ⊔ (phi o delta_e) with mu_n x Hom(mu_n, Z) -> Z, Hom(mu_n, Z) = Z[n] twisted
  std::vector<IntMatrix> hom_act;
  for (std::size_t g = 0; g < 2; ++g) hom_act.push_back(W.level().unit_inverse(g) * Z.act(g));
  auto B = std::make_shared<const GammaModule>(W.gamma_ptr(), Z.module(), hom_act);
  auto C = std::make_shared<const GammaModule>(Z);
  std::vector<std::vector<IntVec>> val(1, std::vector<IntVec>(Z.ngens()));
  for (std::size_t k = 0; k < Z.ngens(); ++k) {
    IntVec e(Z.ngens(), 0);
    e[k] = 1;
    val[0][k] = e;
  }
  Pairing P(W.identity_surjection(), W.mu(), B, C, val);
  LevelCochain other = unbalanced_cup(W.dlc(), NegOneCochain{B, z}, P);
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t h = 0; h < 2; ++h)
      if (!Z.module().equal(other.at({g, h}), rep.phi_of_xi[g * 2 + h])) rep.agree = false;
  rep.h2_class = cohomology(2, Z).reduce(rep.phi_of_xi);
  return rep;
}

/// Number of classes in the image of xi^* and the order of H^2(Gamma, Z).
inline std::pair<Int, Int> xi_star_image(const RealGerbLevel& W, const GammaModule& Z) {
  HomUZ H = hom_u_Z(W.level(), Z);
  ClassGroup h2 = cohomology(2, Z);
  std::set<IntVec> classes;
  for (const auto& c : H.group.elements()) {
    IntVec z = H.basis * c;
    classes.insert(h2.group.canonical(fact46_check(W, Z, z).h2_class));
  }
  return {static_cast<Int>(classes.size()), h2.group.order()};
}

}  // namespace rigid
