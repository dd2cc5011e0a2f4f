#pragma once

// The groups Ybar_{+,tor} of tori and reductive groups with a finite central
// subgroup Z, the exact sequence relating them to classical Tate-Nakayama
// data, the map to Hom(u, Z)^Gamma, the dual-center group and its pairing.
//
// A torus is given by the cocharacter lattice Y = Z^r with a Gamma-action and
// a superlattice Ybar (the cocharacters of S/Z) given by the columns of
// num / den. Internally everything is written in Ybar coordinates, where Ybar
// is Z^r and Y is the sublattice spanned by the columns of y_basis().

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rigid/gerb.hpp"

namespace rigid {

class TorusDatum {
 public:
  /// rho: one matrix per group element acting on Y = Z^r.
  TorusDatum(GroupPtr G, std::vector<IntMatrix> rho, IntMatrix num, Int den)
      : G_(std::move(G)), rho_(std::move(rho)), num_(std::move(num)), den_(den) {
    build();
  }

  static TorusDatum from_generators(GroupPtr G, const std::vector<IntMatrix>& gen_actions, IntMatrix num, Int den) {
    GammaModule Y = GammaModule::lattice(G, gen_actions);
    return TorusDatum(G, Y.actions(), std::move(num), den);
  }
  /// Z = 1: Ybar = Y.
  static TorusDatum without_center(GroupPtr G, const std::vector<IntMatrix>& gen_actions) {
    std::size_t r = gen_actions.empty() ? 0 : gen_actions[0].rows();
    return from_generators(std::move(G), gen_actions, IntMatrix::identity(r), 1);
  }

  std::size_t rank() const { return r_; }
  const GroupPtr& group_ptr() const { return G_; }
  const FiniteGroup& group() const { return *G_; }
  const IntMatrix& rho(std::size_t g) const { return rho_.at(g); }
  const std::vector<IntMatrix>& rho() const { return rho_; }
  const IntMatrix& num() const { return num_; }
  Int den() const { return den_; }

  /// Action on Ybar coordinates.
  const IntMatrix& action(std::size_t g) const { return bar_.at(g); }
  const std::vector<IntMatrix>& actions() const { return bar_; }
  IntMatrix norm() const {
    IntMatrix s(r_, r_);
    for (const auto& a : bar_) s = s + a;
    return s;
  }
  /// Columns: a basis of Y in Ybar coordinates.
  const IntMatrix& y_basis() const { return yb_; }
  std::vector<IntVec> y_lattice() const { return yb_.columns(); }
  /// Augmentation IY in Ybar coordinates.
  std::vector<IntVec> iy() const {
    std::vector<IntVec> out;
    for (std::size_t g = 0; g < G_->order(); ++g) {
      if (g == G_->identity()) continue;
      IntMatrix d = (bar_[g] - IntMatrix::identity(r_)) * yb_;
      for (std::size_t j = 0; j < r_; ++j) out.push_back(d.column(j));
    }
    return out;
  }
  /// [Ybar : Y].
  Int index() const { return r_ == 0 ? 1 : abs_checked(yb_.determinant()); }
  /// Exponent of Ybar / Y.
  Int exponent() const { return ybar_mod_y().exponent(); }
  FinAb ybar_mod_y() const { return FinAb(r_, yb_); }

  /// Ybar coordinates of a vector given in Y coordinates.
  IntVec from_y(const IntVec& y) const {
    auto c = solver_->operator()(vec_scale(den_, y));
    if (!c) throw PreconditionError("TorusDatum::from_y: vector not in Ybar");
    return *c;
  }
  /// Y coordinates (rational) of a Ybar vector.
  std::vector<Rational> to_y_rational(const IntVec& c) const {
    IntVec w = num_ * c;
    std::vector<Rational> out;
    for (auto x : w) out.emplace_back(x, den_);
    return out;
  }

  GammaModule ybar_module() const { return GammaModule(G_, FinAb::free(r_), bar_); }
  GammaModule y_module() const { return GammaModule(G_, FinAb::free(r_), rho_); }

  /// Z = Ybar / Y with sigma acting by c_sigma rho(sigma); c from the level datum.
  GammaModule z_module(const LevelDatum& L) const {
    if (L.G->table() != G_->table()) throw PreconditionError("z_module: level datum over a different group");
    if (L.n % exponent() != 0) throw PreconditionError("z_module: exponent of Ybar/Y must divide n");
    std::vector<IntMatrix> act;
    for (std::size_t g = 0; g < G_->order(); ++g) act.push_back(L.unit(g) * bar_[g]);
    return GammaModule(G_, ybar_mod_y(), std::move(act));
  }

  std::string str() const {
    std::string s = "rank " + std::to_string(r_) + ", |Gamma| " + std::to_string(G_->order()) + ", [Ybar:Y] " +
                    std::to_string(index());
    return s;
  }

 private:
  void build() {
    if (den_ < 1) throw PreconditionError("TorusDatum: denominator must be positive");
    if (rho_.size() != G_->order()) throw PreconditionError("TorusDatum: need one action matrix per group element");
    r_ = num_.rows();
    if (num_.cols() != r_) throw PreconditionError("TorusDatum: basis matrix must be square");
    if (r_ > 0 && num_.determinant() == 0) throw PreconditionError("TorusDatum: basis matrix must be invertible");
    GammaModule check(G_, FinAb::free(r_), rho_);  // validates the action
    (void)check;
    solver_ = std::make_shared<LatticeSolver>(num_);
    yb_ = IntMatrix(r_, r_);
    for (std::size_t j = 0; j < r_; ++j) {
      IntVec e(r_, 0);
      e[j] = den_;
      auto c = (*solver_)(e);
      if (!c) throw PreconditionError("TorusDatum: Ybar must contain Y");
      for (std::size_t i = 0; i < r_; ++i) yb_(i, j) = (*c)[i];
    }
    for (std::size_t g = 0; g < G_->order(); ++g) {
      IntMatrix m(r_, r_);
      IntMatrix img = rho_[g] * num_;
      for (std::size_t j = 0; j < r_; ++j) {
        auto c = (*solver_)(img.column(j));
        if (!c) throw PreconditionError("TorusDatum: Gamma-action does not preserve Ybar");
        for (std::size_t i = 0; i < r_; ++i) m(i, j) = (*c)[i];
      }
      bar_.push_back(m);
    }
  }

  GroupPtr G_;
  std::vector<IntMatrix> rho_;
  IntMatrix num_;
  Int den_;
  std::size_t r_ = 0;
  std::shared_ptr<LatticeSolver> solver_;
  IntMatrix yb_;
  std::vector<IntMatrix> bar_;
};

/// Basis of {x in Z^r : M x = 0} as columns, empty for the zero lattice.
inline std::vector<IntVec> lattice_kernel(const IntMatrix& M) {
  if (M.cols() == 0) return {};
  return kernel_basis(M);
}

/// Map between subquotients induced by an ambient matrix.
inline AbHom subquotient_map(const Subquotient& src, const Subquotient& tgt, const IntMatrix& M) {
  const std::size_t k = src.group().ngens();
  IntMatrix m(tgt.group().ngens(), k);
  for (std::size_t j = 0; j < k; ++j) {
    IntVec e(k, 0);
    e[j] = 1;
    IntVec c = tgt.coords(M * src.include(e));
    for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
  }
  return AbHom(src.group(), tgt.group(), m);
}

enum class YMode { Fixed, Stabilized };

inline std::string mode_name(YMode m) { return m == YMode::Fixed ? "fixed" : "stabilized"; }

/// A finite group L1 / L2 of Ybar-vectors with representatives.
struct YPlusTor {
  std::shared_ptr<const Subquotient> sq;
  YMode mode = YMode::Fixed;

  const FinAb& group() const { return sq->group(); }
  /// A representative in Ybar coordinates.
  IntVec lift(const IntVec& c) const { return sq->include(c); }
  /// Generator coordinates of the class of a Ybar vector in L1.
  IntVec reduce(const IntVec& ybar) const { return sq->group().reduce(sq->coords(ybar)); }
  bool contains(const IntVec& ybar) const { return sq->contains(ybar); }
};

/// Ybar^N / IY.
inline YPlusTor y_plus_tor_torus(const TorusDatum& T) {
  const std::size_t r = T.rank();
  auto L1 = lattice_kernel(T.norm());
  return {std::make_shared<const Subquotient>(r, L1, T.iy()), YMode::Fixed};
}

/// 0 -> Y^N/IY -> Ybar^N/IY -> [Ybar/Y]^N -> Y^Gamma/N(Y).
struct YExactSequence {
  std::shared_ptr<const Subquotient> y_tor, ybar_plus, ybar_mod_y_n, y_gamma_mod_n;
  std::shared_ptr<const AbHom> f, g, h;
  bool injective_f = false;
  bool exact_at_ybar_plus = false;
  bool exact_at_ybar_mod_y = false;
  bool holds() const { return injective_f && exact_at_ybar_plus && exact_at_ybar_mod_y; }
  std::string str() const {
    return "0 -> " + y_tor->group().structure() + " -> " + ybar_plus->group().structure() + " -> " +
           ybar_mod_y_n->group().structure() + " -> " + y_gamma_mod_n->group().structure();
  }
};

inline YExactSequence y_exact_sequence_check(const TorusDatum& T) {
  const std::size_t r = T.rank();
  const IntMatrix N = T.norm();
  const IntMatrix& Yb = T.y_basis();
  YExactSequence s;
  std::vector<IntVec> yn;
  for (const auto& k : lattice_kernel(N * Yb)) yn.push_back(Yb * k);
  s.y_tor = std::make_shared<const Subquotient>(r, yn, T.iy());
  s.ybar_plus = std::make_shared<const Subquotient>(r, lattice_kernel(N), T.iy());
  s.ybar_mod_y_n = std::make_shared<const Subquotient>(r, r ? preimage(N, T.y_lattice()) : std::vector<IntVec>{},
                                                       T.y_lattice());
  IntMatrix stack(0, r);
  for (auto g : T.group().generators()) stack = vcat(stack, T.action(g) - IntMatrix::identity(r));
  std::vector<IntVec> yg;
  if (r > 0) {
    if (stack.rows() == 0) {
      yg = T.y_lattice();
    } else {
      for (const auto& k : lattice_kernel(stack * Yb)) yg.push_back(Yb * k);
    }
  }
  s.y_gamma_mod_n = std::make_shared<const Subquotient>(r, yg, (N * Yb).columns());
  IntMatrix I = IntMatrix::identity(r);
  s.f = std::make_shared<const AbHom>(subquotient_map(*s.y_tor, *s.ybar_plus, I));
  s.g = std::make_shared<const AbHom>(subquotient_map(*s.ybar_plus, *s.ybar_mod_y_n, I));
  s.h = std::make_shared<const AbHom>(subquotient_map(*s.ybar_mod_y_n, *s.y_gamma_mod_n, N));
  s.injective_f = is_injective(*s.f);
  s.exact_at_ybar_plus = is_exact_at(*s.f, *s.g);
  s.exact_at_ybar_mod_y = is_exact_at(*s.g, *s.h);
  return s;
}

/// phi_lambda in Hom(mu_n, Z)^N, as an element of Z = Ybar/Y: x -> x^{n lambda}
/// sends the generator of mu_n to the class of lambda.
inline IntVec to_hom_uZ(const TorusDatum& T, const IntVec& lambda, const LevelDatum& L) {
  if (L.n % T.exponent() != 0) throw PreconditionError("to_hom_uZ: [Ybar:Y] exponent must divide n");
  if (!in_span(T.rank(), T.y_lattice(), T.norm() * lambda))
    throw PreconditionError("to_hom_uZ: lambda is not in the norm kernel of Ybar/Y");
  return T.ybar_mod_y().reduce(lambda);
}

class ReductiveDatum {
 public:
  /// coroots: columns in Y coordinates; roots: rows, functionals on Y.
  ReductiveDatum(TorusDatum T, IntMatrix coroots, IntMatrix roots)
      : T_(std::move(T)), coroots_(std::move(coroots)), roots_(std::move(roots)) {
    build();
  }

  const TorusDatum& torus() const { return T_; }
  std::size_t rank() const { return T_.rank(); }
  const IntMatrix& coroots() const { return coroots_; }
  const IntMatrix& roots() const { return roots_; }
  /// Basis of Q^vee in Ybar coordinates.
  const std::vector<IntVec>& coroot_lattice() const { return q_; }
  /// Simple reflections in Ybar coordinates.
  const std::vector<IntMatrix>& reflections() const { return refl_; }
  std::size_t weyl_order() const { return weyl_order_; }

  /// Q^vee as a Gamma-lattice on its basis.
  GammaModule coroot_module() const {
    const std::size_t q = q_.size();
    std::vector<IntMatrix> act;
    IntMatrix B = IntMatrix::from_columns(rank(), q_);
    LatticeSolver S(B);
    for (std::size_t g = 0; g < T_.group().order(); ++g) {
      IntMatrix m(q, q);
      for (std::size_t j = 0; j < q; ++j) {
        auto c = S(T_.action(g) * q_[j]);
        for (std::size_t i = 0; i < q; ++i) m(i, j) = (*c)[i];
      }
      act.push_back(m);
    }
    return GammaModule(T_.group_ptr(), FinAb::free(q), std::move(act));
  }

 private:
  void build() {
    const std::size_t r = rank();
    if (coroots_.rows() != r || roots_.cols() != r || roots_.rows() != coroots_.cols())
      throw PreconditionError("ReductiveDatum: roots and coroots have inconsistent shapes");
    const std::size_t k = coroots_.cols();
    IntMatrix pair = roots_ * coroots_;
    for (std::size_t i = 0; i < k; ++i)
      if (pair(i, i) != 2) throw PreconditionError("ReductiveDatum: <alpha_i, alpha_i^vee> must be 2");
    // roots on Ybar coordinates: alpha . num / den
    IntMatrix rn = roots_ * T_.num();
    IntMatrix rbar(k, r);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        if (rn(i, j) % T_.den() != 0) throw PreconditionError("ReductiveDatum: roots must be integral on Ybar");
        rbar(i, j) = rn(i, j) / T_.den();
      }
    IntMatrix cbar = T_.y_basis() * coroots_;
    for (std::size_t i = 0; i < k; ++i) {
      IntMatrix s = IntMatrix::identity(r);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) s(a, b) = sub_checked(s(a, b), mul_checked(cbar(a, i), rbar(i, b)));
      refl_.push_back(s);
    }
    // Weyl group closure and Q^vee as the span of W-orbits of the coroots
    std::set<std::vector<Int>> seen;
    std::vector<IntMatrix> elems{IntMatrix::identity(r)};
    auto key = [&](const IntMatrix& m) {
      std::vector<Int> v;
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) v.push_back(m(a, b));
      return v;
    };
    seen.insert(key(elems[0]));
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const auto& s : refl_) {
        IntMatrix w = s * elems[i];
        if (seen.insert(key(w)).second) {
          elems.push_back(w);
          if (elems.size() > 100000) throw PreconditionError("ReductiveDatum: Weyl group is not finite");
        }
      }
    }
    weyl_order_ = elems.size();
    std::vector<IntVec> gens;
    for (const auto& w : elems)
      for (std::size_t i = 0; i < k; ++i) gens.push_back(w * cbar.column(i));
    q_ = r ? span_basis(r, gens) : std::vector<IntVec>{};
    for (std::size_t g = 0; g < T_.group().order(); ++g)
      for (const auto& v : q_)
        if (!in_span(r, q_, T_.action(g) * v))
          throw PreconditionError("ReductiveDatum: Gamma-action does not preserve the coroot lattice");
  }

  TorusDatum T_;
  IntMatrix coroots_, roots_;
  std::vector<IntVec> q_;
  std::vector<IntMatrix> refl_;
  std::size_t weyl_order_ = 1;
};

struct WeylReport {
  bool holds = true;
  std::size_t checked = 0;
  std::vector<std::string> failures;
};

/// s(ybar) - ybar in Q^vee for every simple reflection and Ybar basis vector.
inline WeylReport weyl_triviality_check(const ReductiveDatum& R) {
  WeylReport rep;
  const std::size_t r = R.rank();
  for (std::size_t i = 0; i < R.reflections().size(); ++i)
    for (std::size_t j = 0; j < r; ++j) {
      IntVec e(r, 0);
      e[j] = 1;
      IntVec d = vec_sub(R.reflections()[i] * e, e);
      ++rep.checked;
      if (!in_span(r, R.coroot_lattice(), d)) {
        rep.holds = false;
        rep.failures.push_back("reflection " + std::to_string(i) + " on basis vector " + std::to_string(j));
      }
    }
  return rep;
}

/// Fixed level: {x : N x in Q^vee} / (IY + Q^vee).
/// Stabilized: {x : N x in Sat(Q^vee)} / (IY + Q^vee), the colimit over
/// extensions through which Gamma acts with growing kernel.
inline YPlusTor y_plus_tor_reductive(const ReductiveDatum& R, YMode mode) {
  const TorusDatum& T = R.torus();
  const std::size_t r = T.rank();
  std::vector<IntVec> target = mode == YMode::Fixed ? R.coroot_lattice() : saturation(r, R.coroot_lattice());
  std::vector<IntVec> L1 = r ? (target.empty() ? lattice_kernel(T.norm()) : preimage(T.norm(), target))
                             : std::vector<IntVec>{};
  std::vector<IntVec> L2 = T.iy();
  L2.insert(L2.end(), R.coroot_lattice().begin(), R.coroot_lattice().end());
  return {std::make_shared<const Subquotient>(r, L1, L2), mode};
}

/// A torus as a reductive datum without roots.
inline ReductiveDatum as_reductive(const TorusDatum& T) {
  return ReductiveDatum(T, IntMatrix(T.rank(), 0), IntMatrix(0, T.rank()));
}

struct PizzaReport {
  std::string h0_coroots;
  bool h0_vanishes = false;
  bool coroot_invariants_vanish = false;  // H^0 then vanishes after every inflation
  bool condition = false;                 // H^0(Gamma, Q^vee) = 0
  std::string torus_group, image_group, quotient_group, reductive_group;
  bool isomorphic = false;  // natural map torus/image -> reductive is bijective
};

/// Compares Ybar^N/IY modulo the image of (Q^vee)^N/IQ^vee with the reductive
/// group in the given mode, under the condition H^0(Gamma, Q^vee) = 0.
inline PizzaReport pizza_check(const ReductiveDatum& R, YMode mode) {
  PizzaReport rep;
  const TorusDatum& T = R.torus();
  const std::size_t r = T.rank();
  GammaModule Q = R.coroot_module();
  ClassGroup h0 = tate_zero(Q);
  rep.h0_coroots = h0.group.structure();
  rep.h0_vanishes = h0.group.is_trivial();
  rep.coroot_invariants_vanish = Q.invariants().group.is_trivial();
  rep.condition = rep.h0_vanishes;
  YPlusTor tor = y_plus_tor_torus(T);
  YPlusTor red = y_plus_tor_reductive(R, mode);
  rep.torus_group = tor.group().structure();
  rep.reductive_group = red.group().structure();
  // image of (Q^vee)^N in the torus group
  std::vector<IntVec> qn;
  if (!R.coroot_lattice().empty()) {
    IntMatrix B = IntMatrix::from_columns(r, R.coroot_lattice());
    for (const auto& k : lattice_kernel(T.norm() * B)) qn.push_back(B * k);
  }
  std::vector<IntVec> img;
  for (const auto& v : qn) img.push_back(tor.sq->coords(v));
  SubGroup im = generated_subgroup(tor.group(), img);
  rep.image_group = im.group.structure();
  FinAb quot(tor.group().ngens(), hcat(tor.group().relations(), im.basis));
  rep.quotient_group = quot.structure();
  AbHom to_red = subquotient_map(*tor.sq, *red.sq, IntMatrix::identity(r));
  SubGroup ker = kernel(to_red);
  rep.isomorphic = is_surjective(to_red) && same_subgroup(tor.group(), ker.basis.columns(), im.basis.columns());
  return rep;
}

/// pi_0(Z(hat Gbar)^+) through its character group: M = Ybar / (IY + Q^vee),
/// M_tor = Sat(IY + Q^vee) / (IY + Q^vee), and the dual of M_tor.
struct DualCenter {
  std::shared_ptr<const Subquotient> m_tor;
  std::shared_ptr<const FiniteDual> dual;
  FinAb m;  // the full M on Ybar coordinates

  IntVec reduce(const IntVec& ybar) const { return m_tor->group().reduce(m_tor->coords(ybar)); }
};

inline DualCenter pi0_dual_center(const ReductiveDatum& R) {
  const TorusDatum& T = R.torus();
  const std::size_t r = T.rank();
  std::vector<IntVec> L2 = T.iy();
  L2.insert(L2.end(), R.coroot_lattice().begin(), R.coroot_lattice().end());
  std::vector<IntVec> L1 = saturation(r, L2);
  DualCenter d;
  d.m_tor = std::make_shared<const Subquotient>(r, L1, L2);
  d.dual = std::make_shared<const FiniteDual>(d.m_tor->group());
  d.m = FinAb(r, IntMatrix::from_columns(r, L2));
  return d;
}

/// <lambda, chi> = chi(image of lambda in M_tor); lambda in generator coordinates of Y.
inline QZ tn_pairing(const DualCenter& D, const YPlusTor& Y, const IntVec& lambda, const IntVec& chi) {
  return D.dual->eval(chi, D.reduce(Y.lift(lambda)));
}

struct PairingReport {
  bool bilinear = true;
  bool left_kernel_trivial = true;
  bool right_kernel_trivial = true;
  Int left_order = 0, right_order = 0;
};

/// Exhaustive pairing matrix between Y and the dual of M_tor.
inline PairingReport pairing_report(const DualCenter& D, const YPlusTor& Y) {
  PairingReport rep;
  auto ls = Y.group().elements();
  auto cs = D.dual->dual().elements();
  rep.left_order = static_cast<Int>(ls.size());
  rep.right_order = static_cast<Int>(cs.size());
  std::vector<std::vector<QZ>> table(ls.size(), std::vector<QZ>(cs.size()));
  for (std::size_t a = 0; a < ls.size(); ++a)
    for (std::size_t b = 0; b < cs.size(); ++b) table[a][b] = tn_pairing(D, Y, ls[a], cs[b]);
  // bilinearity on generator sums
  std::map<IntVec, std::size_t> lidx, cidx;
  for (std::size_t a = 0; a < ls.size(); ++a) lidx[Y.group().canonical(ls[a])] = a;
  for (std::size_t b = 0; b < cs.size(); ++b) cidx[D.dual->dual().canonical(cs[b])] = b;
  for (std::size_t a = 0; a < ls.size() && rep.bilinear; ++a)
    for (std::size_t a2 = 0; a2 < ls.size() && rep.bilinear; ++a2) {
      std::size_t s = lidx.at(Y.group().canonical(vec_add(ls[a], ls[a2])));
      for (std::size_t b = 0; b < cs.size(); ++b)
        if (table[s][b] != table[a][b] + table[a2][b]) {
          rep.bilinear = false;
          break;
        }
    }
  for (std::size_t b = 0; b < cs.size() && rep.bilinear; ++b)
    for (std::size_t b2 = 0; b2 < cs.size() && rep.bilinear; ++b2) {
      std::size_t s = cidx.at(D.dual->dual().canonical(vec_add(cs[b], cs[b2])));
      for (std::size_t a = 0; a < ls.size(); ++a)
        if (table[a][s] != table[a][b] + table[a][b2]) {
          rep.bilinear = false;
          break;
        }
    }
  for (std::size_t a = 0; a < ls.size(); ++a) {
    if (Y.group().is_zero(ls[a])) continue;
    bool nonzero = false;
    for (std::size_t b = 0; b < cs.size(); ++b) nonzero = nonzero || table[a][b] != QZ(0, 1);
    if (!nonzero) rep.left_kernel_trivial = false;
  }
  for (std::size_t b = 0; b < cs.size(); ++b) {
    if (D.dual->dual().is_zero(cs[b])) continue;
    bool nonzero = false;
    for (std::size_t a = 0; a < ls.size(); ++a) nonzero = nonzero || table[a][b] != QZ(0, 1);
    if (!nonzero) rep.right_kernel_trivial = false;
  }
  return rep;
}

struct ImageReport {
  bool equal = false;
  std::string image, kernel;
};

/// For |Gamma| = 2: the image of the fixed-level group in M_tor equals the
/// characters killing the image of N, i.e. the kernel of N : M_tor -> Ybar/Q^vee.
inline ImageReport real_image_characterization(const ReductiveDatum& R) {
  const TorusDatum& T = R.torus();
  if (T.group().order() != 2) throw PreconditionError("real_image_characterization: Gamma must have order 2");
  const std::size_t r = T.rank();
  DualCenter D = pi0_dual_center(R);
  YPlusTor Y = y_plus_tor_reductive(R, YMode::Fixed);
  std::vector<IntVec> img;
  for (std::size_t j = 0; j < Y.group().ngens(); ++j) {
    IntVec e(Y.group().ngens(), 0);
    e[j] = 1;
    img.push_back(D.m_tor->coords(Y.lift(e)));
  }
  FinAb ybar_mod_q(r, IntMatrix::from_columns(r, R.coroot_lattice()));
  IntMatrix nm = T.norm() * D.m_tor->basis();
  AbHom N(D.m_tor->group(), ybar_mod_q, nm);
  SubGroup K = kernel(N);
  ImageReport rep;
  rep.image = generated_subgroup(D.m_tor->group(), img).group.structure();
  rep.kernel = K.group.structure();
  rep.equal = same_subgroup(D.m_tor->group(), img, K.basis.columns());
  return rep;
}

/// A morphism of torus data: an integer matrix Y1 -> Y2 commuting with Gamma
/// and carrying Ybar1 into Ybar2.
class TorusMorphism {
 public:
  TorusMorphism(std::shared_ptr<const TorusDatum> src, std::shared_ptr<const TorusDatum> tgt, IntMatrix f)
      : s_(std::move(src)), t_(std::move(tgt)), f_(std::move(f)) {
    if (s_->group().table() != t_->group().table()) throw PreconditionError("TorusMorphism: different groups");
    if (f_.rows() != t_->rank() || f_.cols() != s_->rank()) throw PreconditionError("TorusMorphism: wrong shape");
    for (std::size_t g = 0; g < s_->group().order(); ++g)
      if (!(f_ * s_->rho(g) == t_->rho(g) * f_)) throw PreconditionError("TorusMorphism: not equivariant");
    // Ybar coordinates: c -> num2^{-1} den2 f num1 c / den1
    IntMatrix w = f_ * s_->num();
    bar_ = IntMatrix(t_->rank(), s_->rank());
    LatticeSolver S(t_->num());
    for (std::size_t j = 0; j < s_->rank(); ++j) {
      IntVec col = vec_scale(t_->den(), w.column(j));
      for (auto& x : col) {
        if (x % s_->den() != 0) throw PreconditionError("TorusMorphism: does not map Ybar into Ybar");
        x /= s_->den();
      }
      auto c = t_->rank() ? S(col) : std::optional<IntVec>(IntVec{});
      if (!c) throw PreconditionError("TorusMorphism: does not map Ybar into Ybar");
      for (std::size_t i = 0; i < t_->rank(); ++i) bar_(i, j) = (*c)[i];
    }
  }

  const TorusDatum& source() const { return *s_; }
  const TorusDatum& target() const { return *t_; }
  const IntMatrix& matrix() const { return f_; }
  /// The map on Ybar coordinates.
  const IntMatrix& bar() const { return bar_; }

  AbHom on_y_plus_tor() const {
    return subquotient_map(*y_plus_tor_torus(*s_).sq, *y_plus_tor_torus(*t_).sq, bar_);
  }
  AbHom on_z() const { return AbHom(s_->ybar_mod_y(), t_->ybar_mod_y(), bar_); }
  AbHom on_m_tor() const {
    return subquotient_map(*pi0_dual_center(as_reductive(*s_)).m_tor, *pi0_dual_center(as_reductive(*t_)).m_tor,
                           bar_);
  }

 private:
  std::shared_ptr<const TorusDatum> s_, t_;
  IntMatrix f_, bar_;
};

inline TorusMorphism compose(const TorusMorphism& g, const TorusMorphism& f) {
  return TorusMorphism(std::make_shared<const TorusDatum>(f.source()), std::make_shared<const TorusDatum>(g.target()),
                       g.matrix() * f.matrix());
}

namespace detail {

/// Integral matrices of finite order used as building blocks for random tori.
inline std::vector<IntMatrix> blocks_for_order(std::size_t k, bool anisotropic_only) {
  std::vector<IntMatrix> b;
  if (!anisotropic_only) b.push_back(IntMatrix{{1}});
  if (k % 2 == 0) b.push_back(IntMatrix{{-1}});
  if (k == 2 && !anisotropic_only) b.push_back(IntMatrix{{0, 1}, {1, 0}});
  if (k == 3 || k == 6) b.push_back(IntMatrix{{0, -1}, {1, -1}});
  if (k == 3 && !anisotropic_only) b.push_back(IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  if (k == 4) b.push_back(IntMatrix{{0, -1}, {1, 0}});
  if (k == 6) b.push_back(IntMatrix{{1, -1}, {1, 0}});
  return b;
}

inline IntMatrix direct_sum(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

/// A random unimodular matrix and its inverse, built from elementary operations.
inline std::pair<IntMatrix, IntMatrix> random_unimodular(std::size_t r, std::mt19937_64& rng) {
  IntMatrix P = IntMatrix::identity(r), Pinv = IntMatrix::identity(r);
  if (r < 2) return {P, Pinv};
  for (int step = 0; step < 4; ++step) {
    std::size_t i = rng() % r, j = rng() % r;
    if (i == j) continue;
    Int c = static_cast<Int>(rng() % 3) - 1;
    if (c == 0) continue;
    IntMatrix E = IntMatrix::identity(r), Einv = IntMatrix::identity(r);
    E(i, j) = c;
    Einv(i, j) = -c;
    P = E * P;
    Pinv = Pinv * Einv;
  }
  return {P, Pinv};
}

}  // namespace detail

struct RandomTorusOptions {
  std::size_t group_order = 2;
  std::size_t max_rank = 3;
  Int max_index = 6;
  bool anisotropic_only = false;
};

/// A random torus over the cyclic group of the given order: a block sum of
/// finite-order integral matrices conjugated by a unimodular matrix, and Ybar
/// spanned by Y and the Gamma-orbit of a random vector w / k with [Ybar:Y] bounded.
inline TorusDatum random_torus(std::mt19937_64& rng, const RandomTorusOptions& opt) {
  GroupPtr G = make_group(FiniteGroup::cyclic(opt.group_order));
  auto blocks = detail::blocks_for_order(opt.group_order, opt.anisotropic_only);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    IntMatrix rho(0, 0);
    std::size_t target = 1 + rng() % opt.max_rank;
    while (rho.rows() < target) {
      const IntMatrix& b = blocks[rng() % blocks.size()];
      if (rho.rows() + b.rows() > opt.max_rank) break;
      rho = detail::direct_sum(rho, b);
    }
    if (rho.rows() == 0) continue;
    const std::size_t r = rho.rows();
    auto [P, Pinv] = detail::random_unimodular(r, rng);
    IntMatrix gen = P * rho * Pinv;
    GammaModule Y = GammaModule::lattice(G, {gen});
    Int k = 1 + static_cast<Int>(rng() % 6);
    IntVec w(r);
    for (auto& x : w) x = static_cast<Int>(rng() % static_cast<std::uint64_t>(k));
    std::vector<IntVec> gens;
    for (std::size_t j = 0; j < r; ++j) {
      IntVec e(r, 0);
      e[j] = k;
      gens.push_back(e);
    }
    for (std::size_t g = 0; g < G->order(); ++g) gens.push_back(Y.act(g) * w);
    auto basis = span_basis(r, gens);
    IntMatrix num = IntMatrix::from_columns(r, basis);
    Int idx = abs_checked(num.determinant());
    Int kr = 1;
    for (std::size_t j = 0; j < r; ++j) kr *= k;
    if (idx == 0 || kr / idx > opt.max_index) continue;
    return TorusDatum(G, Y.actions(), num, k);
  }
  throw PreconditionError("random_torus: could not generate a datum within the bounds");
}

/// Standard data used by tests, the CLI and the acceptance run.
namespace data {

inline GroupPtr z2() { return make_group(FiniteGroup::cyclic(2)); }

/// Norm-one torus of C/R with Z = mu_2: Y = Z, sigma = -1, Ybar = (1/2) Z.
inline TorusDatum norm_one_torus() { return TorusDatum::from_generators(z2(), {IntMatrix{{-1}}}, IntMatrix{{1}}, 2); }

/// Split torus of rank r (trivial action) with Ybar = (1/2) Y.
inline TorusDatum split_torus(std::size_t r, Int den = 2) {
  return TorusDatum::from_generators(z2(), {IntMatrix::identity(r)}, IntMatrix::identity(r), den);
}

/// SL_2 with its anisotropic maximal torus and Z = mu_2.
inline ReductiveDatum sl2() { return ReductiveDatum(norm_one_torus(), IntMatrix{{1}}, IntMatrix{{2}}); }

/// Split SL_2 with Z = mu_2.
inline ReductiveDatum split_sl2() {
  return ReductiveDatum(TorusDatum::from_generators(z2(), {IntMatrix{{1}}}, IntMatrix{{1}}, 2), IntMatrix{{1}},
                        IntMatrix{{2}});
}

/// PGL_2 with anisotropic torus: Y = coweights, alpha^vee = 2 varpi, Z = 1.
inline ReductiveDatum pgl2() {
  return ReductiveDatum(TorusDatum::from_generators(z2(), {IntMatrix{{-1}}}, IntMatrix{{1}}, 1), IntMatrix{{2}},
                        IntMatrix{{1}});
}

/// A_1 x A_1 simply connected with the factors swapped by sigma (times -1 when
/// sign is set). full_center: Z = mu_2 x mu_2, otherwise Z = diagonal mu_2.
inline ReductiveDatum a1xa1_swap(bool sign, bool full_center) {
  Int s = sign ? -1 : 1;
  IntMatrix act{{0, s}, {s, 0}};
  IntMatrix num = full_center ? IntMatrix{{1, 0}, {0, 1}} : IntMatrix{{2, 1}, {0, 1}};
  TorusDatum T = TorusDatum::from_generators(z2(), {act}, num, 2);
  return ReductiveDatum(T, IntMatrix{{1, 0}, {0, 1}}, IntMatrix{{2, 0}, {0, 2}});
}

}  // namespace data

}  // namespace rigid
