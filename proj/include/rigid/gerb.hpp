#pragma once

// The finite groups u_n = Maps(Gamma, mu_n) / mu_n, their character modules,
// transition maps between levels and Hom(u_n, Z)^Gamma.
//
// mu_n is written additively as Z/n; Gamma acts on it through a unit c_g of
// Z/n per element (for the real case: inversion).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rigid/gmodule.hpp"

namespace rigid {

struct LevelDatum {
  GroupPtr G;
  Int n = 1;
  std::vector<Int> cyclo;  // c_g mod n, one per element

  /// Extends units given per generator of G to the whole group.
  static LevelDatum make(GroupPtr G, Int n, const std::vector<Int>& gen_units) {
    if (n < 1) throw PreconditionError("LevelDatum: n must be positive");
    const auto& gens = G->generators();
    if (gen_units.size() != gens.size()) throw PreconditionError("LevelDatum: need one unit per generator");
    std::vector<IntMatrix> m;
    for (Int u : gen_units) m.push_back(IntMatrix{{mod_floor(u, n)}});
    GammaModule a = GammaModule::from_generators(G, FinAb::cyclic(n), m);
    LevelDatum L{G, n, {}};
    for (std::size_t g = 0; g < G->order(); ++g) L.cyclo.push_back(mod_floor(a.act(g)(0, 0), n));
    L.validate();
    return L;
  }
  /// Gamma = Z/2 acting on mu_n by inversion.
  static LevelDatum real(Int n) { return make(make_group(FiniteGroup::cyclic(2)), n, {-1}); }

  Int unit(std::size_t g) const { return cyclo.at(g); }
  Int unit_inverse(std::size_t g) const { return cyclo.at(G->inv(g)); }

  void validate() const {
    if (cyclo.size() != G->order()) throw PreconditionError("LevelDatum: need one unit per element");
    for (std::size_t g = 0; g < G->order(); ++g) {
      if (gcd(cyclo[g], n) != 1 && n > 1) throw PreconditionError("LevelDatum: cyclotomic action is not by units");
      for (std::size_t h = 0; h < G->order(); ++h)
        if (mod_floor(mul_checked(cyclo[g], cyclo[h]) - cyclo[G->mul(g, h)], n) != 0)
          throw PreconditionError("LevelDatum: cyclotomic action is not multiplicative");
    }
    if (mod_floor(cyclo[G->identity()] - 1, n) != 0) throw PreconditionError("LevelDatum: identity must act trivially");
  }
};

/// u_n with its presentation: generators e_tau (the map with value 1 at tau),
/// relations n e_tau and sum e_tau; sigma e_tau = c_sigma e_{sigma tau}.
struct UPoints {
  LevelDatum level;
  std::shared_ptr<const GammaModule> R;  // Maps(Gamma, mu_n)
  std::shared_ptr<const GammaModule> u;  // same generators, diagonal killed

  /// The quotient map R -> u on generators.
  AbHom quotient_map() const { return AbHom(R->module(), u->module(), IntMatrix::identity(R->ngens())); }
  /// delta_e : mu_n -> u, x -> class of the map with value x at e.
  IntVec delta_e(Int x) const {
    IntVec v(u->ngens(), 0);
    v[level.G->identity()] = x;
    return v;
  }
};

inline UPoints build_u(const LevelDatum& L) {
  const FiniteGroup& G = *L.G;
  const std::size_t N = G.order();
  std::vector<IntMatrix> act;
  for (std::size_t s = 0; s < N; ++s) {
    IntMatrix m(N, N);
    for (std::size_t t = 0; t < N; ++t) m(G.mul(s, t), t) = L.unit(s);
    act.push_back(m);
  }
  std::vector<Int> inv(N, L.n);
  auto R = std::make_shared<const GammaModule>(L.G, FinAb::from_invariants(inv), act);
  auto u = std::make_shared<const GammaModule>(R->quotient({IntVec(N, 1)}));
  return {L, R, u};
}

/// X^*(u_n): the augmentation-zero part of Z/n[Gamma] with left multiplication,
/// on generators e_tau - e_1 (tau != 1).
struct UCharacters {
  LevelDatum level;
  std::shared_ptr<const GammaModule> ambient;  // Z/n[Gamma]
  SubGroup sub;
  std::shared_ptr<const GammaModule> module;

  /// Coordinates in `module` of an augmentation-zero element of Z/n[Gamma].
  IntVec coords(const IntVec& x) const {
    IntMatrix BR = hcat(sub.basis, IntMatrix::from_columns(ambient->ngens(), ambient->module().relation_columns()));
    auto z = solve(BR, x);
    if (!z) throw PreconditionError("UCharacters::coords: element has nonzero augmentation");
    return IntVec(z->begin(), z->begin() + static_cast<std::ptrdiff_t>(sub.group.ngens()));
  }
  IntVec include(const IntVec& c) const { return sub.include(c); }
};

inline UCharacters build_u_characters(const LevelDatum& L) {
  const FiniteGroup& G = *L.G;
  auto amb = std::make_shared<const GammaModule>(GammaModule::regular(L.G, L.n));
  std::vector<IntVec> gens;
  for (std::size_t t = 0; t < G.order(); ++t) {
    if (t == G.identity()) continue;
    IntVec v(G.order(), 0);
    v[t] = 1;
    v[G.identity()] = -1;
    gens.push_back(v);
  }
  SubGroup sub = generated_subgroup(amb->module(), gens);
  auto mod = std::make_shared<const GammaModule>(amb->submodule(sub));
  return {L, amb, sub, mod};
}

/// <chi, f> = (1/n) sum_tau chi_tau f_tau, with chi in X^* coordinates and f in u coordinates.
inline QZ character_pairing(const UCharacters& X, const IntVec& chi, const IntVec& f) {
  IntVec c = X.include(chi);
  Int s = 0;
  for (std::size_t t = 0; t < c.size(); ++t) s = add_checked(s, mul_checked(c[t], f[t]));
  return QZ(s, X.level.n);
}

/// Exhaustive check that the pairing between u and X^*(u) is perfect.
inline bool character_pairing_is_perfect(const UPoints& U, const UCharacters& X) {
  const FinAb& A = U.u->module();
  const FinAb& B = X.module->module();
  if (A.order() != B.order()) return false;
  auto ea = A.elements(), eb = B.elements();
  for (const auto& f : ea) {
    if (A.is_zero(f)) continue;
    bool seen = false;
    for (const auto& chi : eb)
      if (character_pairing(X, chi, f) != QZ(0, 1)) {
        seen = true;
        break;
      }
    if (!seen) return false;
  }
  for (const auto& chi : eb) {
    if (B.is_zero(chi)) continue;
    bool seen = false;
    for (const auto& f : ea)
      if (character_pairing(X, chi, f) != QZ(0, 1)) {
        seen = true;
        break;
      }
    if (!seen) return false;
  }
  return true;
}

struct Transition {
  UPoints fine, coarse;
  UCharacters fine_chars, coarse_chars;
  std::shared_ptr<const GroupSurjection> pi;
  AbHom on_points;      // u_m -> u_n
  AbHom on_characters;  // X^*(u_n) -> X^*(u_m)
};

/// p : u_{Gamma,m} -> u_{Gamma',n}, (pf)(a) = sum over b -> a of f(b) reduced mod n
/// (the power map mu_m -> mu_n in additive coordinates), and its dual on characters.
inline Transition transition_p(const LevelDatum& fine, const LevelDatum& coarse,
                               std::shared_ptr<const GroupSurjection> pi) {
  if (coarse.n < 1 || fine.n % coarse.n != 0) throw PreconditionError("transition_p: n must divide m");
  if (pi->source()->table() != fine.G->table() || pi->target()->table() != coarse.G->table())
    throw PreconditionError("transition_p: surjection does not match the levels");
  for (std::size_t g = 0; g < fine.G->order(); ++g)
    if (mod_floor(fine.unit(g) - coarse.unit((*pi)(g)), coarse.n) != 0)
      throw PreconditionError("transition_p: cyclotomic actions are not compatible");
  UPoints Uf = build_u(fine), Uc = build_u(coarse);
  UCharacters Xf = build_u_characters(fine), Xc = build_u_characters(coarse);
  const std::size_t Nf = fine.G->order(), Nc = coarse.G->order();
  IntMatrix p(Nc, Nf);
  for (std::size_t b = 0; b < Nf; ++b) p((*pi)(b), b) = 1;
  if (!Uf.u->is_equivariant(p, Uc.u->inflate(*pi))) throw PreconditionError("transition_p: map is not equivariant");
  AbHom on_points(Uf.u->module(), Uc.u->module(), p);
  const Int k = fine.n / coarse.n;
  IntMatrix d(Xf.sub.group.ngens(), Xc.sub.group.ngens());
  for (std::size_t j = 0; j < Xc.sub.group.ngens(); ++j) {
    IntVec chi = Xc.sub.basis.column(j);
    IntVec img(Nf, 0);
    for (std::size_t b = 0; b < Nf; ++b) img[b] = mul_checked(k, chi[(*pi)(b)]);
    IntVec c = Xf.coords(img);
    for (std::size_t i = 0; i < c.size(); ++i) d(i, j) = c[i];
  }
  AbHom on_chars(Xc.module->module(), Xf.module->module(), d);
  return {std::move(Uf), std::move(Uc), std::move(Xf), std::move(Xc), std::move(pi), std::move(on_points),
          std::move(on_chars)};
}

inline Transition transition_p(const LevelDatum& fine, const LevelDatum& coarse) {
  if (fine.G->table() != coarse.G->table()) throw PreconditionError("transition_p: groups differ; give a surjection");
  return transition_p(fine, coarse, std::make_shared<const GroupSurjection>(GroupSurjection::identity(fine.G)));
}

/// H^0(Gamma, X^*(u_n)).
inline FinAb invariants_of_u_characters(const LevelDatum& L) {
  return build_u_characters(L).module->invariants().group;
}

/// Hom(mu_n, Z) identified with the n-torsion Z[n] (phi -> phi(1)), with
/// sigma * z = c_{sigma^{-1}} sigma z, restricted to the kernel of the norm.
struct HomUZ {
  FinAb group;
  IntMatrix basis;  // columns in Z's coordinates
};

inline HomUZ hom_u_Z(const LevelDatum& L, const GammaModule& Z) {
  if (!Z.module().is_finite()) throw PreconditionError("hom_u_Z: Z must be finite");
  if (Z.group().table() != L.G->table()) throw PreconditionError("hom_u_Z: Z is not a module over Gamma");
  const std::size_t z = Z.ngens();
  SubGroup tors = kernel(AbHom(Z.module(), Z.module(), L.n * IntMatrix::identity(z)));
  GammaModule Zn = Z.submodule(tors);
  std::vector<IntMatrix> act;
  for (std::size_t g = 0; g < L.G->order(); ++g) act.push_back(L.unit_inverse(g) * Zn.act(g));
  GammaModule twisted(L.G, Zn.module(), std::move(act));
  SubGroup K = kernel(twisted.norm_map());
  IntMatrix basis = tors.basis * K.basis;
  SubGroup in_Z = generated_subgroup(Z.module(), basis.columns());
  return {in_Z.group, in_Z.basis};
}

inline Int inverse_mod(Int a, Int n) {
  if (n == 1) return 0;
  Int r0 = n, r1 = mod_floor(a, n), s0 = 0, s1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    Int t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw PreconditionError("inverse_mod: not a unit");
  return mod_floor(s0, n);
}

/// The Gamma-equivariant homomorphism psi : u_n -> Z with psi(delta_e(x)) = x z,
/// namely psi(e_tau) = c_tau^{-1} tau z. Requires z in the norm kernel of Z[n].
inline AbHom realize_hom_u_Z(const UPoints& U, const GammaModule& Z, const IntVec& z) {
  const LevelDatum& L = U.level;
  const std::size_t N = L.G->order();
  IntMatrix m(Z.ngens(), N);
  for (std::size_t t = 0; t < N; ++t) {
    IntVec col = vec_scale(inverse_mod(L.unit(t), L.n), Z.apply(t, z));
    for (std::size_t i = 0; i < col.size(); ++i) m(i, t) = col[i];
  }
  AbHom psi(U.u->module(), Z.module(), m);
  if (!U.u->is_equivariant(m, Z)) throw PreconditionError("realize_hom_u_Z: result is not equivariant");
  return psi;
}

/// Exhaustive H^1 test for cyclic Gamma: every 1-cocycle of u_m, pushed to u_n,
/// is a coboundary. A 1-cocycle is fixed by its value x at the generator, subject
/// to N x = 0; it is a coboundary iff x lies in (g - 1) u.
inline bool transition_h1_zero_by_enumeration(const Transition& T) {
  const FiniteGroup& G = *T.fine.level.G;
  const FiniteGroup& H = *T.coarse.level.G;
  if (G.generators().size() != 1 || G.table() != H.table())
    throw PreconditionError("transition_h1_zero_by_enumeration: needs one cyclic group at both levels");
  const GammaModule& A = *T.fine.u;
  const GammaModule& B = *T.coarse.u;
  std::size_t g = G.generators()[0];
  std::size_t h = (*T.pi)(g);
  std::vector<IntVec> boundaries;
  IntMatrix hm = B.act(h) - IntMatrix::identity(B.ngens());
  B.module().for_each_element([&](const IntVec& y) { boundaries.push_back(B.module().canonical(hm * y)); });
  IntMatrix NA = IntMatrix(A.ngens(), A.ngens());
  {
    IntMatrix pw = IntMatrix::identity(A.ngens());
    for (std::size_t k = 0; k < G.order(); ++k) {
      NA = NA + pw;
      pw = A.act(g) * pw;
    }
  }
  bool ok = true;
  A.module().for_each_element([&](const IntVec& x) {
    if (!ok || !A.module().is_zero(NA * x)) return;
    IntVec y = B.module().canonical(T.on_points(x));
    bool found = false;
    for (const auto& b : boundaries)
      if (b == y) {
        found = true;
        break;
      }
    if (!found) ok = false;
  });
  return ok;
}

struct RealTowerRow {
  Int n = 0;
  std::string h2;
  bool h2_ok = false;
  bool h1_transition_zero = false;
  bool h1_transition_zero_enumerated = false;
};

/// For Gamma = Z/2 acting on mu by inversion: H^2(Gamma, u_n) = Z/gcd(n,2) and
/// H^1(p) : H^1(u_{2n^2}) -> H^1(u_n) vanishes. Enumeration is run when 2n^2 <= enum_limit.
inline std::vector<RealTowerRow> real_tower_checks(const std::vector<Int>& n_list, Int enum_limit = 200) {
  std::vector<RealTowerRow> rows;
  for (Int n : n_list) {
    RealTowerRow r;
    r.n = n;
    LevelDatum L = LevelDatum::real(n);
    UPoints U = build_u(L);
    ClassGroup H2 = cohomology(2, *U.u);
    r.h2 = H2.group.structure();
    r.h2_ok = H2.group.isomorphic(FinAb::cyclic(gcd(n, 2)));
    Int m = mul_checked(2, mul_checked(n, n));
    Transition T = transition_p(LevelDatum::real(m), L);
    r.h1_transition_zero = induced_cohomology_map(*T.fine.u, *T.coarse.u, T.on_points.matrix(), 1).is_zero();
    r.h1_transition_zero_enumerated = m <= enum_limit ? transition_h1_zero_by_enumeration(T) : false;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace rigid
