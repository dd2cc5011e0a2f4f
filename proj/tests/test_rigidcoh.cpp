#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rigid/rigidcoh.hpp"

using namespace rigid;

namespace {

// L1 / L2 with L1 = {x : N x in target}, L2 = IY + extra, by enumeration of
// Ybar / K Ybar. K = den |Gamma| e kills L1 modulo L2 and L1 cap K Ybar lies in L2.
oracle::QuotientInfo enumerate_quotient(const TorusDatum& T, const std::vector<IntVec>& target,
                                        const std::vector<IntVec>& extra, Int e) {
  const std::size_t r = T.rank();
  const Int K = T.den() * static_cast<Int>(T.group().order()) * e;
  oracle::Module M{&T.group(), std::vector<Int>(r, K), T.actions()};
  IntMatrix N = T.norm();
  IntMatrix test = hcat(IntMatrix::from_columns(r, target), K * N);
  LatticeSolver S(test);
  std::vector<std::size_t> X;
  for (std::size_t i = 0; i < M.size(); ++i)
    if (S.contains(N * M.vec(i))) X.push_back(i);
  std::vector<std::size_t> gens;
  for (const auto& v : T.iy()) gens.push_back(M.index(v));
  for (const auto& v : extra) gens.push_back(M.index(v));
  auto Y = oracle::closure(M, gens);
  return oracle::quotient_info(M, X, Y);
}

oracle::QuotientInfo enumerate_torus(const TorusDatum& T) { return enumerate_quotient(T, {}, {}, 1); }

Int exponent_of_sat(std::size_t r, const std::vector<IntVec>& q) {
  if (q.empty()) return 1;
  Subquotient s(r, saturation(r, q), q);
  return s.group().exponent();
}

std::vector<ReductiveDatum> reductive_battery() {
  return {data::sl2(),
          data::split_sl2(),
          data::pgl2(),
          data::a1xa1_swap(false, false),
          data::a1xa1_swap(false, true),
          data::a1xa1_swap(true, false),
          data::a1xa1_swap(true, true)};
}

std::vector<TorusDatum> random_tori(std::uint64_t seed, int count, bool anisotropic = false) {
  std::mt19937_64 rng(seed);
  std::vector<TorusDatum> out;
  const std::size_t orders[] = {2, 3, 4, 6};
  for (int i = 0; i < count; ++i) {
    RandomTorusOptions opt;
    opt.group_order = orders[i % 4];
    opt.anisotropic_only = anisotropic;
    out.push_back(random_torus(rng, opt));
  }
  return out;
}

// Level 2 [Ybar:Y]-exponent; the generator acts by -1 when |Gamma| is even.
LevelDatum level_for(const TorusDatum& T) {
  Int n = T.exponent() * 2;
  Int u = T.group().order() % 2 == 0 ? n - 1 : 1;
  return LevelDatum::make(T.group_ptr(), n, {u});
}

}  // namespace

TEST(TorusDatum, CoordinatesAndValidation) {
  TorusDatum T = data::norm_one_torus();
  EXPECT_EQ(T.rank(), 1u);
  EXPECT_EQ(T.index(), 2);
  EXPECT_EQ(T.y_basis(), (IntMatrix{{2}}));
  EXPECT_EQ(T.action(1), (IntMatrix{{-1}}));
  EXPECT_EQ(T.from_y(IntVec{3}), (IntVec{6}));
  EXPECT_EQ(T.to_y_rational(IntVec{1})[0], Rational(1, 2));
  // Ybar = Y + Z (1/2, 0) is not preserved by the swap
  EXPECT_THROW(TorusDatum::from_generators(data::z2(), {IntMatrix{{0, 1}, {1, 0}}}, IntMatrix{{1, 0}, {0, 2}}, 2),
               PreconditionError);
  // Ybar must contain Y
  EXPECT_THROW(TorusDatum::from_generators(data::z2(), {IntMatrix{{-1}}}, IntMatrix{{3}}, 2), PreconditionError);
}

TEST(YPlusTorTorus, Examples) {
  EXPECT_TRUE(y_plus_tor_torus(data::split_torus(1)).group().is_trivial());
  EXPECT_TRUE(y_plus_tor_torus(data::split_torus(3)).group().is_trivial());
  EXPECT_EQ(y_plus_tor_torus(data::norm_one_torus()).group().structure(), "Z/4");
  auto plain = TorusDatum::without_center(data::z2(), {IntMatrix{{-1}}});
  EXPECT_EQ(y_plus_tor_torus(plain).group().structure(), "Z/2");
  // induced torus R_{C/R} G_m: no torsion at any Ybar
  auto induced = TorusDatum::from_generators(data::z2(), {IntMatrix{{0, 1}, {1, 0}}}, IntMatrix{{1, 0}, {0, 1}}, 2);
  EXPECT_TRUE(y_plus_tor_torus(induced).group().is_finite());
}

TEST(YPlusTorTorus, WithoutCenterIsTorsionOfCoinvariants) {
  for (const auto& T0 : random_tori(11, 24)) {
    TorusDatum T = TorusDatum::without_center(T0.group_ptr(), {T0.rho(T0.group().generators()[0])});
    FinAb g = y_plus_tor_torus(T).group();
    FinAb coinv = T.y_module().coinvariants();
    EXPECT_TRUE(g.isomorphic(torsion_subgroup(coinv).group)) << g.structure() << " vs " << coinv.structure();
    EXPECT_TRUE(g.isomorphic(tate_minus1(T.y_module()).group));
  }
}

TEST(YPlusTorTorus, MatchesEnumeration) {
  for (const auto& T : random_tori(7, 40)) {
    YPlusTor Y = y_plus_tor_torus(T);
    auto q = enumerate_torus(T);
    EXPECT_EQ(Y.group().order(), q.order) << T.str();
    EXPECT_EQ(Y.group().exponent(), q.exponent) << T.str();
  }
}

TEST(YExactSequence, NormOneTorus) {
  auto s = y_exact_sequence_check(data::norm_one_torus());
  EXPECT_TRUE(s.holds());
  EXPECT_EQ(s.str(), "0 -> Z/2 -> Z/4 -> Z/2 -> 0");
  EXPECT_TRUE(is_surjective(*s.g));
}

TEST(YExactSequence, SplitTorus) {
  auto s = y_exact_sequence_check(data::split_torus(2));
  EXPECT_TRUE(s.holds());
  EXPECT_TRUE(s.ybar_plus->group().is_trivial());
  // [Ybar/Y]^N = (Z/2)^2 embeds into Y^Gamma / N Y = (Z/2)^2
  EXPECT_EQ(s.ybar_mod_y_n->group().structure(), "Z/2 x Z/2");
  EXPECT_TRUE(is_injective(*s.h));
}

TEST(YExactSequence, RandomTori) {
  for (const auto& T : random_tori(2024, 40)) {
    auto s = y_exact_sequence_check(T);
    EXPECT_TRUE(s.injective_f) << T.str();
    EXPECT_TRUE(s.exact_at_ybar_plus) << T.str();
    EXPECT_TRUE(s.exact_at_ybar_mod_y) << T.str();
    EXPECT_EQ(s.ybar_plus->group().order(), y_plus_tor_torus(T).group().order());
  }
}

TEST(ToHomUZ, NormOneTorus) {
  TorusDatum T = data::norm_one_torus();
  LevelDatum L = LevelDatum::real(2);
  GammaModule Z = T.z_module(L);
  IntVec phi = to_hom_uZ(T, IntVec{1}, L);
  EXPECT_FALSE(Z.module().is_zero(phi));
  EXPECT_TRUE(Z.module().is_zero(to_hom_uZ(T, IntVec{2}, L)));
  HomUZ H = hom_u_Z(L, Z);
  EXPECT_EQ(H.group.structure(), "Z/2");
  EXPECT_THROW(to_hom_uZ(T, IntVec{1}, LevelDatum::real(3)), PreconditionError);
}

TEST(ToHomUZ, LandsInNormKernelAndKillsY) {
  for (const auto& T : random_tori(5, 24)) {
    LevelDatum L = level_for(T);
    GammaModule Z = T.z_module(L);
    HomUZ H = hom_u_Z(L, Z);
    std::vector<IntVec> span = H.basis.columns();
    auto rel = Z.module().relation_columns();
    span.insert(span.end(), rel.begin(), rel.end());
    YPlusTor Y = y_plus_tor_torus(T);
    for (const auto& c : Y.group().elements()) {
      IntVec lam = Y.lift(c);
      IntVec phi = to_hom_uZ(T, lam, L);
      EXPECT_TRUE(in_span(T.rank(), span, phi)) << T.str();
    }
    for (const auto& y : T.y_lattice()) EXPECT_TRUE(Z.module().is_zero(to_hom_uZ(T, y, L)));
  }
}

TEST(ToHomUZ, CompatibleAcrossLevels) {
  TorusDatum T = data::norm_one_torus();
  Transition tr = transition_p(LevelDatum::real(8), LevelDatum::real(4));
  GammaModule Z = T.z_module(tr.coarse.level);
  for (Int lam : {0, 1, 3}) {
    IntVec phi = to_hom_uZ(T, IntVec{lam}, tr.coarse.level);
    EXPECT_EQ(phi, to_hom_uZ(T, IntVec{lam}, tr.fine.level));
    AbHom coarse = realize_hom_u_Z(tr.coarse, Z, phi);
    AbHom fine = realize_hom_u_Z(tr.fine, T.z_module(tr.fine.level), phi);
    EXPECT_TRUE(compose(coarse, tr.on_points).equals(fine));
  }
}

TEST(ReductiveDatum, CorootLatticeAndWeyl) {
  ReductiveDatum R = data::sl2();
  ASSERT_EQ(R.coroot_lattice().size(), 1u);
  EXPECT_EQ(R.coroot_lattice()[0], (IntVec{2}));
  EXPECT_EQ(R.weyl_order(), 2u);
  EXPECT_EQ(data::a1xa1_swap(false, false).weyl_order(), 4u);
  for (const auto& D : reductive_battery()) {
    auto w = weyl_triviality_check(D);
    EXPECT_TRUE(w.holds);
    EXPECT_EQ(w.checked, D.rank() * D.reflections().size());
  }
  // <alpha, alpha^vee> != 2
  EXPECT_THROW(ReductiveDatum(data::norm_one_torus(), IntMatrix{{1}}, IntMatrix{{1}}), PreconditionError);
  // roots not integral on Ybar = (1/2) Y
  EXPECT_THROW(ReductiveDatum(data::norm_one_torus(), IntMatrix{{2}}, IntMatrix{{1}}), PreconditionError);
}

TEST(YPlusTorReductive, Examples) {
  EXPECT_EQ(y_plus_tor_reductive(data::sl2(), YMode::Stabilized).group().structure(), "Z/2");
  EXPECT_EQ(y_plus_tor_reductive(data::sl2(), YMode::Fixed).group().structure(), "Z/2");
  EXPECT_EQ(y_plus_tor_reductive(data::pgl2(), YMode::Fixed).group().structure(), "Z/2");
  EXPECT_EQ(y_plus_tor_reductive(data::split_sl2(), YMode::Fixed).group().structure(), "Z/2");
  EXPECT_EQ(y_plus_tor_reductive(data::a1xa1_swap(false, true), YMode::Fixed).group().structure(), "Z/2");
  EXPECT_EQ(y_plus_tor_reductive(data::a1xa1_swap(false, true), YMode::Stabilized).group().structure(),
            "Z/2 x Z/2");
  EXPECT_EQ(y_plus_tor_reductive(data::a1xa1_swap(false, false), YMode::Stabilized).group().structure(), "Z/2");
  // a torus viewed as a reductive group
  TorusDatum T = data::norm_one_torus();
  EXPECT_TRUE(y_plus_tor_reductive(as_reductive(T), YMode::Fixed)
                  .group()
                  .isomorphic(y_plus_tor_torus(T).group()));
}

TEST(YPlusTorReductive, MatchesEnumeration) {
  for (const auto& R : reductive_battery()) {
    const TorusDatum& T = R.torus();
    Int e = exponent_of_sat(T.rank(), R.coroot_lattice());
    for (YMode mode : {YMode::Fixed, YMode::Stabilized}) {
      auto target = mode == YMode::Fixed ? R.coroot_lattice() : saturation(T.rank(), R.coroot_lattice());
      auto q = enumerate_quotient(T, target, R.coroot_lattice(), e);
      auto g = y_plus_tor_reductive(R, mode).group();
      EXPECT_EQ(g.order(), q.order) << mode_name(mode);
      EXPECT_EQ(g.exponent(), q.exponent) << mode_name(mode);
    }
  }
}

TEST(Pizza, Examples) {
  PizzaReport p = pizza_check(data::sl2(), YMode::Stabilized);
  EXPECT_TRUE(p.condition);
  EXPECT_EQ(p.h0_coroots, "0");
  EXPECT_EQ(p.torus_group, "Z/4");
  EXPECT_EQ(p.quotient_group, "Z/2");
  EXPECT_EQ(p.reductive_group, "Z/2");
  EXPECT_TRUE(p.isomorphic);
  for (bool sign : {false, true}) {
    for (YMode mode : {YMode::Fixed, YMode::Stabilized}) {
      PizzaReport d = pizza_check(data::a1xa1_swap(sign, false), mode);
      EXPECT_TRUE(d.condition);
      EXPECT_TRUE(d.isomorphic) << sign << mode_name(mode);
      EXPECT_EQ(d.reductive_group, "Z/2");
    }
    PizzaReport f = pizza_check(data::a1xa1_swap(sign, true), YMode::Fixed);
    EXPECT_TRUE(f.condition);
    EXPECT_TRUE(f.isomorphic);
    // once Gamma may act through a larger quotient the coroot invariants survive
    PizzaReport s = pizza_check(data::a1xa1_swap(sign, true), YMode::Stabilized);
    EXPECT_FALSE(s.coroot_invariants_vanish);
    EXPECT_FALSE(s.isomorphic);
  }
  // split SL_2: H^0 of the trivial module Z is Z/2
  PizzaReport split = pizza_check(data::split_sl2(), YMode::Fixed);
  EXPECT_FALSE(split.condition);
  EXPECT_EQ(split.h0_coroots, "Z/2");
}

TEST(DualCenter, Examples) {
  EXPECT_EQ(pi0_dual_center(data::sl2()).m_tor->group().structure(), "Z/2");
  EXPECT_EQ(pi0_dual_center(data::pgl2()).m_tor->group().structure(), "Z/2");
  EXPECT_EQ(pi0_dual_center(data::a1xa1_swap(false, true)).m_tor->group().structure(), "Z/2 x Z/2");
  EXPECT_EQ(pi0_dual_center(data::a1xa1_swap(false, false)).m_tor->group().structure(), "Z/2");
  EXPECT_TRUE(pi0_dual_center(as_reductive(data::split_torus(2))).m_tor->group().is_trivial());
}

TEST(Pairing, SL2GeneratorPairsToHalf) {
  ReductiveDatum R = data::sl2();
  DualCenter D = pi0_dual_center(R);
  YPlusTor Y = y_plus_tor_reductive(R, YMode::Stabilized);
  ASSERT_EQ(Y.group().order(), 2);
  IntVec gen;
  for (const auto& l : Y.group().elements())
    if (!Y.group().is_zero(l)) gen = l;
  for (const auto& chi : D.dual->dual().elements())
    if (!D.dual->dual().is_zero(chi)) {
      EXPECT_EQ(tn_pairing(D, Y, gen, chi), QZ(1, 2));
    }
}

TEST(Pairing, KernelsOnBattery) {
  for (const auto& R : reductive_battery()) {
    DualCenter D = pi0_dual_center(R);
    for (YMode mode : {YMode::Fixed, YMode::Stabilized}) {
      PairingReport p = pairing_report(D, y_plus_tor_reductive(R, mode));
      EXPECT_TRUE(p.bilinear);
      EXPECT_TRUE(p.left_kernel_trivial) << mode_name(mode);
      if (mode == YMode::Stabilized) {
        EXPECT_TRUE(p.right_kernel_trivial);
        EXPECT_EQ(p.left_order, p.right_order);
      }
    }
  }
}

TEST(Pairing, RandomTori) {
  for (const auto& T : random_tori(99, 24)) {
    ReductiveDatum R = as_reductive(T);
    DualCenter D = pi0_dual_center(R);
    PairingReport p = pairing_report(D, y_plus_tor_reductive(R, YMode::Stabilized));
    EXPECT_TRUE(p.bilinear && p.left_kernel_trivial && p.right_kernel_trivial) << T.str();
  }
}

TEST(RealImage, Battery) {
  for (const auto& R : reductive_battery()) {
    ImageReport r = real_image_characterization(R);
    EXPECT_TRUE(r.equal) << r.image << " vs " << r.kernel;
  }
  for (const auto& T : random_tori(3, 40)) {
    if (T.group().order() != 2) continue;
    EXPECT_TRUE(real_image_characterization(as_reductive(T)).equal) << T.str();
  }
  EXPECT_THROW(real_image_characterization(as_reductive(random_tori(1, 2)[1])), PreconditionError);
}

TEST(Functoriality, NormOneChain) {
  auto T4 = std::make_shared<const TorusDatum>(
      TorusDatum::from_generators(data::z2(), {IntMatrix{{-1}}}, IntMatrix{{1}}, 4));
  auto T2 = std::make_shared<const TorusDatum>(data::norm_one_torus());
  auto T1 = std::make_shared<const TorusDatum>(TorusDatum::without_center(data::z2(), {IntMatrix{{-1}}}));
  TorusMorphism f(T4, T2, IntMatrix{{2}});
  TorusMorphism g(T2, T1, IntMatrix{{2}});
  TorusMorphism gf = compose(g, f);
  EXPECT_TRUE(compose(g.on_y_plus_tor(), f.on_y_plus_tor()).equals(gf.on_y_plus_tor()));
  EXPECT_TRUE(compose(g.on_m_tor(), f.on_m_tor()).equals(gf.on_m_tor()));
  EXPECT_THROW(TorusMorphism(T2, T1, IntMatrix{{1}}), PreconditionError);
  EXPECT_THROW(TorusMorphism(T2, T1, IntMatrix{{0, 1}}), PreconditionError);
}

TEST(Functoriality, RandomEndomorphismChains) {
  for (const auto& T0 : random_tori(17, 20)) {
    auto T = std::make_shared<const TorusDatum>(T0);
    const std::size_t r = T->rank();
    std::vector<TorusMorphism> maps;
    maps.emplace_back(T, T, T->rho(T->group().generators()[0]));
    IntMatrix N(r, r);
    for (const auto& a : T->rho()) N = N + a;
    maps.emplace_back(T, T, N);
    maps.emplace_back(T, T, 3 * IntMatrix::identity(r));
    LevelDatum L = level_for(*T);
    YPlusTor Y = y_plus_tor_torus(*T);
    DualCenter D = pi0_dual_center(as_reductive(*T));
    for (const auto& f : maps)
      for (const auto& g : maps) {
        TorusMorphism gf = compose(g, f);
        EXPECT_TRUE(compose(g.on_y_plus_tor(), f.on_y_plus_tor()).equals(gf.on_y_plus_tor()));
        EXPECT_TRUE(compose(g.on_z(), f.on_z()).equals(gf.on_z()));
      }
    for (const auto& f : maps) {
      AbHom fy = f.on_y_plus_tor(), fz = f.on_z(), fm = f.on_m_tor();
      for (const auto& c : Y.group().elements()) {
        IntVec lam = Y.lift(c);
        // the map to Hom(u, Z) commutes with f
        EXPECT_TRUE(T->ybar_mod_y().equal(fz(to_hom_uZ(*T, lam, L)), to_hom_uZ(*T, f.bar() * lam, L)));
        // pairing naturality: <f lam, chi> = <lam, chi o f>
        for (const auto& chi : D.dual->dual().elements()) {
          QZ lhs = tn_pairing(D, Y, fy(c), chi);
          QZ rhs = D.dual->eval(chi, fm(D.reduce(lam)));
          EXPECT_EQ(lhs, rhs);
        }
      }
    }
  }
}

TEST(RandomTorus, RespectsBounds) {
  std::mt19937_64 rng(1);
  for (std::size_t k : {2u, 3u, 4u, 6u})
    for (int i = 0; i < 25; ++i) {
      RandomTorusOptions opt;
      opt.group_order = k;
      TorusDatum T = random_torus(rng, opt);
      EXPECT_LE(T.rank(), 3u);
      EXPECT_LE(T.index(), 6);
      EXPECT_EQ(T.group().order(), k);
      opt.anisotropic_only = true;
      TorusDatum A = random_torus(rng, opt);
      EXPECT_TRUE(A.y_module().invariants().group.is_trivial());
    }
}
