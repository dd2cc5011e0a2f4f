#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "rigid/realgerb.hpp"

using namespace rigid;

namespace {

std::shared_ptr<const RealGerbLevel> level(Int n) { return std::make_shared<const RealGerbLevel>(n); }

std::shared_ptr<const TorusPoints> points(const TorusDatum& T) {
  return std::make_shared<const TorusPoints>(std::make_shared<const TorusDatum>(T));
}

// xi is a coboundary iff some f : Gamma -> u_n has df = xi.
bool xi_is_coboundary(const RealGerbLevel& W) {
  const std::size_t k = W.u_order();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      std::size_t f[2];
      f[W.gamma_identity()] = a;
      f[W.sigma()] = b;
      bool ok = true;
      for (std::size_t g = 0; g < 2 && ok; ++g)
        for (std::size_t h = 0; h < 2 && ok; ++h) {
          std::size_t gh = W.gamma().mul(g, h);
          // g f(h) - f(gh) + f(g): subtraction via search for the additive inverse
          std::size_t neg = 0;
          while (W.u_add(neg, f[gh]) != W.u_zero()) ++neg;
          std::size_t d = W.u_add(W.u_add(W.u_act(g, f[h]), neg), f[g]);
          ok = d == W.u_index(W.xi(g, h));
        }
      if (ok) return true;
    }
  return false;
}

std::vector<TorusDatum> anisotropic_real_tori(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<TorusDatum> out;
  RandomTorusOptions opt;
  opt.group_order = 2;
  opt.anisotropic_only = true;
  while (static_cast<int>(out.size()) < count) {
    TorusDatum T = random_torus(rng, opt);
    if (8 % T.exponent() == 0) out.push_back(T);
  }
  return out;
}

std::vector<IntVec> norm_kernel_basis(const TorusDatum& T) { return lattice_kernel(T.norm()); }

}  // namespace

TEST(RealGerb, RootAndFundamentalCocycle) {
  EXPECT_EQ(root_k(QZ(1, 2), 4), QZ(1, 8));
  EXPECT_EQ(root_k(QZ(0, 1), 3), QZ(0, 1));
  EXPECT_THROW(root_k(QZ(1, 2), 0), PreconditionError);
  EXPECT_EQ(real_fundamental_cocycle(1, 1, 0), QZ(1, 2));
  EXPECT_EQ(real_fundamental_cocycle(0, 1, 0), QZ(0, 1));
}

TEST(RealGerb, XiValues) {
  for (Int n : {2, 4, 6, 8, 10, 12}) {
    RealGerbLevel W(n);
    const std::size_t e = W.gamma_identity(), s = W.sigma();
    const FinAb& U = W.u_points().u->module();
    EXPECT_TRUE(U.is_zero(W.xi(e, e)));
    EXPECT_TRUE(U.is_zero(W.xi(e, s)));
    EXPECT_TRUE(U.is_zero(W.xi(s, e)));
    // xi(sigma, sigma) = sigma(delta_e(1)) and generates u_n
    EXPECT_TRUE(U.equal(W.xi(s, s), W.u_points().u->apply(s, W.u_points().delta_e(1))));
    EXPECT_EQ(U.order(), n);
    EXPECT_EQ(W.u_order(), static_cast<std::size_t>(n));
  }
  EXPECT_THROW(RealGerbLevel(3), PreconditionError);
}

TEST(RealGerb, XiClassIsNontrivialByEnumeration) {
  for (Int n : {2, 4, 6, 8}) EXPECT_FALSE(xi_is_coboundary(RealGerbLevel(n))) << n;
}

TEST(RealGerb, ExtensionGroup) {
  for (Int n : {2, 4, 6, 8}) {
    RealGerbLevel W(n);
    EXPECT_EQ(W.order(), static_cast<std::size_t>(2 * n));
    EXPECT_TRUE(W.check_group()) << n;
    // the section squares to xi(sigma, sigma)
    std::size_t s = W.section(W.sigma());
    EXPECT_EQ(W.mul(s, s), W.make(W.u_index(W.xi(W.sigma(), W.sigma())), W.gamma_identity()));
  }
  // W_2 is cyclic of order 4
  RealGerbLevel W(2);
  std::size_t s = W.section(W.sigma());
  EXPECT_NE(W.mul(s, s), W.identity());
  EXPECT_EQ(W.mul(W.mul(s, s), W.mul(s, s)), W.identity());
}

TEST(RealGerb, TransitionsAreTrivialTwists) {
  for (Int n : {2, 4, 6}) {
    for (Int m = n; m <= 12; m += n) {
      if (m % 2 != 0) continue;
      WTransition tr = alpha_transition(level(m), level(n));
      EXPECT_TRUE(tr.alpha_trivial) << m << "->" << n;
      EXPECT_TRUE(tr.d_alpha_matches_xi) << m << "->" << n;
      EXPECT_TRUE(tr.is_homomorphism()) << m << "->" << n;
      EXPECT_TRUE(tr.is_surjective()) << m << "->" << n;
    }
  }
  WTransition tr = alpha_transition(level(8), level(2));
  EXPECT_TRUE(tr.is_homomorphism());
  EXPECT_THROW(alpha_transition(level(6), level(4)), PreconditionError);
}

TEST(RealGerb, CayleyEmbeddingIsRealRational) {
  auto S = points(data::norm_one_torus());
  for (Int k = 0; k < 4; ++k) {
    QZ th(k, 4);
    Mat2 e = sl2_torus_point(th);
    EXPECT_EQ(e.det(), Gauss(1));
    EXPECT_EQ(sl2_torus_point(S->apply(1, {th})[0]), e.conj()) << th.str();
  }
  EXPECT_EQ(sl2_torus_point(QZ(1, 4)), sl2_j());
  EXPECT_EQ(sl2_torus_point(QZ(1, 2)), -Mat2::identity());
}

TEST(RigidCocycle, NormOneTorusAtLevelFour) {
  auto S = points(data::norm_one_torus());
  auto W = level(4);
  RealRigidCocycle z = z_lambda(S, W, {1});
  EXPECT_EQ(z.table.size(), 8u);
  EXPECT_EQ(cocycle_failures(z), 0u);  // all 64 pairs
  EXPECT_TRUE(restriction_matches(z, to_hom_uZ(S->torus(), {1}, W->level())));
  EXPECT_EQ(z.at_sigma(), (TorusPoint{QZ(1, 4)}));
  // lambda = 3/2 lands on -J
  RealRigidCocycle z3 = z_lambda(S, W, {3});
  EXPECT_EQ(z3.at_sigma(), (TorusPoint{QZ(3, 4)}));
  EXPECT_TRUE(is_sum(z_lambda(S, W, {4}), z, z3));
  // lambda must lie in the norm kernel and the level must kill Ybar/Y
  auto split = points(data::split_torus(1));
  EXPECT_THROW(z_lambda(split, W, {1}), PreconditionError);
}

TEST(RigidCocycle, RandomAnisotropicData) {
  int checked = 0;
  for (const auto& T : anisotropic_real_tori(5, 12)) {
    auto S = points(T);
    auto basis = norm_kernel_basis(T);
    ASSERT_EQ(basis.size(), T.rank()) << T.str();
    for (Int n : {2, 4, 8}) {
      if (n % T.exponent() != 0) continue;
      auto W = level(n);
      std::vector<RealRigidCocycle> zs;
      for (const auto& l : basis) {
        RealRigidCocycle z = z_lambda(S, W, l);
        EXPECT_EQ(cocycle_failures(z), 0u) << T.str();
        EXPECT_TRUE(restriction_matches(z, to_hom_uZ(T, l, W->level())));
        zs.push_back(z);
      }
      if (basis.size() >= 2) {
        EXPECT_TRUE(is_sum(z_lambda(S, W, vec_add(basis[0], basis[1])), zs[0], zs[1]));
      }
      EXPECT_TRUE(is_sum(z_lambda(S, W, vec_scale(2, basis[0])), zs[0], zs[0]));
      ++checked;
    }
  }
  EXPECT_GE(checked, 10);
}

TEST(RigidCocycle, InflationStability) {
  std::vector<TorusDatum> tori{data::norm_one_torus()};
  for (const auto& T : anisotropic_real_tori(9, 4)) tori.push_back(T);
  for (const auto& T : tori) {
    auto S = points(T);
    for (Int n : {2, 4}) {
      if (n % T.exponent() != 0) continue;
      auto coarse = level(n);
      auto fine = level(2 * n * n);
      WTransition tr = alpha_transition(fine, coarse);
      for (const auto& l : norm_kernel_basis(T))
        EXPECT_TRUE(inflation_matches(tr, z_lambda(S, coarse, l), z_lambda(S, fine, l))) << T.str() << " n=" << n;
    }
  }
}

TEST(RigidCocycle, ClassicalComparisonAndCoboundaries) {
  std::vector<TorusDatum> tori{data::norm_one_torus()};
  for (const auto& T : anisotropic_real_tori(13, 6)) tori.push_back(T);
  for (const auto& T : tori) {
    auto S = points(T);
    auto W = level(std::max<Int>(2, T.exponent() % 2 == 0 ? T.exponent() : 2 * T.exponent()));
    // integral lambda in Y^N, as Ybar coordinates of the Y basis
    IntMatrix yb = T.y_basis();
    for (const auto& ly : lattice_kernel(T.rho(1) + IntMatrix::identity(T.rank()))) {
      IntVec lbar = yb * ly;
      RealRigidCocycle z = z_lambda(S, W, lbar);
      auto cl = classical_cocycle_inflated(*S, *W, ly);
      std::vector<TorusPoint> diff;
      for (std::size_t w = 0; w < cl.size(); ++w) diff.push_back(S->sub(z(w), cl[w]));
      EXPECT_TRUE(find_coboundary(*S, *W, diff, 4 * W->n()).found) << T.str();
    }
    // lambda and lambda + (rho - 1) mu differ by the coboundary of mu / 2
    auto basis = norm_kernel_basis(T);
    IntVec mu(T.rank(), 0);
    mu[0] = 1;
    IntVec shift = yb * ((T.rho(1) - IntMatrix::identity(T.rank())) * mu);
    auto d = difference(z_lambda(S, W, vec_add(basis[0], shift)), z_lambda(S, W, basis[0]));
    CoboundarySearch cb = find_coboundary(*S, *W, d, 4 * W->n());
    EXPECT_TRUE(cb.found) << T.str();
  }
  // a genuinely nontrivial class is not a coboundary: z_{1/2} on the norm-one torus
  auto S = points(data::norm_one_torus());
  auto W = level(4);
  RealRigidCocycle z = z_lambda(S, W, {1});
  EXPECT_FALSE(find_coboundary(*S, *W, z.table, 16).found);
}

TEST(RigidCocycle, BoundarySquare) {
  for (const auto& T : anisotropic_real_tori(21, 4)) {
    auto S = points(T);
    auto W = level(8);
    for (const auto& l : norm_kernel_basis(T)) {
      RealRigidCocycle z = z_lambda(S, W, l);
      for (std::size_t x0 : {W->u_zero(), std::size_t{1}, std::size_t{3}}) {
        BoundarySquareReport r = boundary_square_check(z, x0);
        EXPECT_TRUE(r.holds) << T.str();
        EXPECT_TRUE(r.values_in_z) << T.str();
        EXPECT_EQ(r.checked, 4u);
      }
    }
  }
}

TEST(StrongForms, TorusRoundTrips) {
  std::vector<TorusDatum> tori{data::norm_one_torus()};
  for (const auto& T : anisotropic_real_tori(17, 4)) tori.push_back(T);
  for (const auto& T : tori) {
    auto S = points(T);
    auto W = level(8);
    for (const auto& l : norm_kernel_basis(T)) {
      RealRigidCocycle z = z_lambda(S, W, l);
      TorusStrongForm d = strong_form_from_cocycle(z);
      TorusPoint sq = strong_form_square(*S, d);
      EXPECT_TRUE(S->to_ybar(sq).has_value());
      // delta^2 = z(xi(sigma, sigma))
      EXPECT_EQ(sq, z(W->make(W->u_index(W->xi(W->sigma(), W->sigma())), W->gamma_identity())));
      RealRigidCocycle back = cocycle_from_strong_form(S, W, d);
      EXPECT_TRUE(pointwise_equal(back, z)) << T.str();
      EXPECT_EQ(strong_form_from_cocycle(back).t, d.t);
    }
  }
  // delta with delta^2 outside Z is rejected: on the norm-one torus (1/8) sigma squares to 1/4
  auto S = points(data::norm_one_torus());
  EXPECT_THROW(cocycle_from_strong_form(S, level(8), {{QZ(1, 8)}}), PreconditionError);
}

TEST(StrongForms, SL2) {
  auto W = level(4);
  SL2StrongForm J{sl2_j()}, mJ{-sl2_j()}, triv{Mat2::identity()};
  EXPECT_TRUE(J.valid());
  EXPECT_EQ(J.square(), -Mat2::identity());
  EXPECT_EQ(triv.square(), Mat2::identity());
  EXPECT_EQ(sl2_strong_form_invariant(J), 1);
  EXPECT_EQ(sl2_strong_form_invariant(mJ), -1);
  EXPECT_EQ(sl2_strong_form_invariant(triv), 0);
  EXPECT_FALSE(sl2_equivalence_witness(J, mJ).has_value());
  // g J^-1 = [[2,1],[1,1]] is positive definite, so g sigma is equivalent to J sigma
  SL2StrongForm g{Mat2(-1, 2, -1, 1)};
  EXPECT_EQ(g.square(), -Mat2::identity());
  EXPECT_EQ(sl2_strong_form_invariant(g), 1);
  auto h = sl2_equivalence_witness(J, g);
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(*h * sl2_j(), g.g * h->conj());
  EXPECT_TRUE(sl2_equivalence_witness(triv, SL2StrongForm{Mat2(0, Gauss::i(), Gauss::i(), 0)}).has_value());
  for (const auto& d : {J, mJ, triv}) {
    SL2Cocycle z = sl2_cocycle_from_strong_form(*W, d);
    EXPECT_EQ(sl2_cocycle_failures(*W, z), 0u);
    EXPECT_EQ(sl2_strong_form_from_cocycle(*W, z).g, d.g);
    // delta^2 = z(xi(sigma, sigma))
    EXPECT_EQ(z[W->make(W->u_index(W->xi(W->sigma(), W->sigma())), W->gamma_identity())], d.square());
  }
  // torus cocycles pushed through the Cayley embedding
  auto S = points(data::norm_one_torus());
  for (Int lam : {1, 3}) {
    RealRigidCocycle zt = z_lambda(S, W, {lam});
    SL2Cocycle z = sl2_cocycle_from_torus(zt);
    EXPECT_EQ(sl2_cocycle_failures(*W, z), 0u);
    SL2StrongForm d = sl2_strong_form_from_cocycle(*W, z);
    EXPECT_EQ(d.g, lam == 1 ? sl2_j() : -sl2_j());
    EXPECT_EQ(sl2_cocycle_from_strong_form(*W, d), z);
  }
}

TEST(StrongForms, SL2Census) {
  SL2Census c = sl2_strong_form_census(1, 2);
  EXPECT_GT(c.forms, 2u);
  EXPECT_EQ(c.classes_square_minus_one, 2u);
  EXPECT_EQ(c.classes_square_one, 1u);
  EXPECT_TRUE(c.all_witnessed);
}

TEST(Fact46, PhiOfXiTwoWays) {
  TorusDatum T = data::norm_one_torus();
  for (Int n : {2, 4, 8}) {
    RealGerbLevel W(n);
    GammaModule Z = T.z_module(W.level());
    HomUZ H = hom_u_Z(W.level(), Z);
    for (const auto& c : H.group.elements()) {
      Fact46Report r = fact46_check(W, Z, H.basis * c);
      EXPECT_TRUE(r.agree) << n;
    }
    auto [image, total] = xi_star_image(W, Z);
    EXPECT_EQ(total, 2);
    EXPECT_EQ(image, 2) << n;
  }
  // split torus: Z = mu_2 with trivial twist on Ybar/Y is still mu_2 as a module
  TorusDatum Ts = data::split_torus(2);
  RealGerbLevel W(4);
  GammaModule Z = Ts.z_module(W.level());
  auto [image, total] = xi_star_image(W, Z);
  EXPECT_EQ(image, total);
}
