#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rigid/abgroup.hpp"

using namespace rigid;

namespace {

// Invariant factors from determinantal divisors: D_k = gcd of all k x k minors.
Int minor_det(const IntMatrix& m, const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
  IntMatrix s(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) s(i, j) = m(r[i], c[j]);
  return s.determinant();
}

void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out, std::vector<std::size_t>& cur,
             std::size_t start = 0) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, out, cur, i + 1);
    cur.pop_back();
  }
}

std::vector<Int> minors_oracle(const IntMatrix& m) {
  std::vector<Int> D{1};
  std::size_t r = std::min(m.rows(), m.cols());
  for (std::size_t k = 1; k <= r; ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(m.rows(), k, rs, cur);
    subsets(m.cols(), k, cs, cur);
    Int g = 0;
    for (const auto& a : rs)
      for (const auto& b : cs) g = gcd(g, minor_det(m, a, b));
    D.push_back(g);
  }
  std::vector<Int> d;
  for (std::size_t k = 1; k <= r; ++k) d.push_back(D[k] == 0 ? 0 : D[k] / D[k - 1]);
  return d;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, Int lo, Int hi) {
  std::uniform_int_distribution<Int> dist(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

// Diagonal group Z/d_1 + ... + Z/d_k enumerated without SNF.
std::vector<IntVec> enumerate_diag(const std::vector<Int>& d) {
  std::vector<IntVec> out;
  IntVec c(d.size(), 0);
  for (;;) {
    out.push_back(c);
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == d[i]) c[i++] = 0;
    if (i == c.size()) return out;
  }
}

FinAb random_finite(std::mt19937_64& rng, Int max_order) {
  std::uniform_int_distribution<int> k(1, 3);
  std::uniform_int_distribution<Int> dd(1, 8);
  for (;;) {
    std::vector<Int> d(static_cast<std::size_t>(k(rng)));
    Int o = 1;
    for (auto& x : d) {
      x = dd(rng);
      o *= x;
    }
    if (o > max_order) continue;
    // present it with a scrambled basis
    IntMatrix R = IntMatrix::diagonal(d);
    IntMatrix S = IntMatrix::identity(d.size());
    std::uniform_int_distribution<Int> e(-2, 2);
    for (int t = 0; t < 4 && d.size() > 1; ++t) {
      std::size_t i = rng() % d.size(), j = rng() % d.size();
      if (i == j) continue;
      IntMatrix E = IntMatrix::identity(d.size());
      E(i, j) = e(rng);
      S = E * S;
    }
    return FinAb(d.size(), S * R);
  }
}

}  // namespace

TEST(Smith, IdentityIsFixed) {
  auto s = smith_form(IntMatrix::identity(3));
  EXPECT_EQ(s.diag, (std::vector<Int>{1, 1, 1}));
  EXPECT_EQ(s.U * IntMatrix::identity(3) * s.V, IntMatrix::identity(3));
}

TEST(Smith, TwoByTwo) {
  IntMatrix m{{2, 4}, {6, 8}};
  auto s = smith_form(m);
  EXPECT_EQ(s.diag, (std::vector<Int>{2, 4}));
  EXPECT_EQ(minors_oracle(m), (std::vector<Int>{2, 4}));
}

TEST(Smith, RandomPostconditions) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    if (trial < 100) r = c = 4;
    IntMatrix m = random_matrix(rng, r, c, -9, 9);
    auto s = smith_form(m);
    IntMatrix D(r, c);
    for (std::size_t i = 0; i < s.diag.size(); ++i) D(i, i) = s.diag[i];
    ASSERT_EQ(s.U * m * s.V, D) << m;
    ASSERT_EQ(abs_checked(s.U.determinant()), 1);
    ASSERT_EQ(abs_checked(s.V.determinant()), 1);
    ASSERT_EQ(s.U * s.Uinv, IntMatrix::identity(r));
    for (std::size_t i = 0; i + 1 < s.diag.size(); ++i) {
      if (s.diag[i] == 0) {
        ASSERT_EQ(s.diag[i + 1], 0);
      } else {
        ASSERT_EQ(s.diag[i + 1] % s.diag[i], 0);
      }
    }
    ASSERT_EQ(s.diag, minors_oracle(m)) << m;
  }
}

TEST(Lattice, SolveAndKernel) {
  IntMatrix m{{2, 0}, {0, 3}};
  EXPECT_FALSE(solve(m, {1, 0}).has_value());
  auto x = solve(m, {4, 9});
  ASSERT_TRUE(x);
  EXPECT_EQ(m * *x, (IntVec{4, 9}));
  IntMatrix k{{1, 2, 3}};
  for (const auto& v : kernel_basis(k)) EXPECT_TRUE(vec_is_zero(k * v));
  EXPECT_EQ(kernel_basis(k).size(), 2u);
}

TEST(Lattice, ModularPreimageMatchesExact) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
    IntMatrix M(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) M(i, j) = static_cast<Int>(rng() % 13) - 6;
    // L = diag(d_i) plus a random extra vector
    std::vector<IntVec> L;
    Int e = 1;
    for (std::size_t i = 0; i < m; ++i) {
      Int d = 1 + static_cast<Int>(rng() % 8);
      e = lcm(e, d);
      IntVec c(m, 0);
      c[i] = d;
      L.push_back(c);
    }
    IntVec extra(m);
    for (auto& x : extra) x = static_cast<Int>(rng() % 7) - 3;
    L.push_back(extra);
    auto fast = preimage_mod(M, L, e);
    EXPECT_EQ(fast.size(), n);
    EXPECT_TRUE(lattice_equal(n, fast, preimage(M, L))) << "trial " << t;
    auto basis = modular_basis(m, L, e);
    for (std::size_t r = 0; r < m; ++r) {
      EXPECT_EQ(e % basis[r][r], 0);
      for (std::size_t i = 0; i < r; ++i) EXPECT_EQ(basis[r][i], 0);
    }
    EXPECT_TRUE(lattice_equal(m, basis, L));
  }
}

TEST(Lattice, Saturation) {
  auto sat = saturation(2, {{2, 4}});
  ASSERT_EQ(sat.size(), 1u);
  EXPECT_TRUE(lattice_equal(2, sat, {{1, 2}}));
  EXPECT_EQ(saturation(2, {{2, 0}, {0, 3}}).size(), 2u);
}

TEST(Cokernel, Examples) {
  AbHom zero(FinAb::free(1), FinAb::free(1), IntMatrix{{0}});
  EXPECT_EQ(cokernel(zero).structure(), "Z");
  AbHom times5(FinAb::free(1), FinAb::free(1), IntMatrix{{5}});
  EXPECT_EQ(cokernel(times5).invariants(), (std::vector<Int>{5}));
  AbHom incl(FinAb::free(2), FinAb::free(2), IntMatrix{{2, 0}, {0, 3}});
  FinAb q = cokernel(incl);
  EXPECT_EQ(q.invariants(), (std::vector<Int>{6}));
  // coset oracle: residues mod (2,3) are pairwise distinct in q
  std::set<IntVec> seen;
  for (Int a = 0; a < 2; ++a)
    for (Int b = 0; b < 3; ++b) seen.insert(q.canonical({a, b}));
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(q.element_order({1, 1}), 6);
}

TEST(Kernel, Examples) {
  FinAb z6 = FinAb::cyclic(6);
  EXPECT_TRUE(kernel(AbHom(z6, z6, IntMatrix{{1}})).group.is_trivial());
  auto k2 = kernel(AbHom(z6, z6, IntMatrix{{2}}));
  EXPECT_EQ(k2.group.invariants(), (std::vector<Int>{2}));
  std::set<Int> members;
  for (const auto& h : k2.group.elements()) members.insert(mod_floor(k2.include(h)[0], 6));
  EXPECT_EQ(members, (std::set<Int>{0, 3}));
  FinAb z4 = FinAb::cyclic(4);
  EXPECT_EQ(kernel(AbHom(z4, z4, IntMatrix{{0}})).group.invariants(), (std::vector<Int>{4}));
}

TEST(Kernel, RejectsIllDefined) {
  EXPECT_THROW(AbHom(FinAb::cyclic(4), FinAb::cyclic(3), IntMatrix{{1}}), PreconditionError);
}

TEST(Torsion, Examples) {
  FinAb a = FinAb::from_invariants({0, 4});
  EXPECT_EQ(torsion_subgroup(a).group.invariants(), (std::vector<Int>{4}));
  EXPECT_TRUE(torsion_subgroup(FinAb::free(2)).group.is_trivial());
  FinAb c(2, IntMatrix{{2, 1}, {0, 2}});
  EXPECT_EQ(c.invariants(), (std::vector<Int>{4}));
  EXPECT_EQ(torsion_subgroup(c).group.invariants(), (std::vector<Int>{4}));
}

TEST(Dual, CyclicSelfDuality) {
  EXPECT_TRUE(FiniteDual(FinAb::cyclic(1)).dual().is_trivial());
  for (Int n = 2; n <= 12; ++n) {
    FiniteDual d(FinAb::cyclic(n));
    for (Int j = 0; j < n; ++j)
      for (Int a = 0; a < n; ++a) ASSERT_EQ(d.eval({j}, {a}), QZ(j * a, n));
  }
  FiniteDual k(FinAb::from_invariants({2, 4}));
  EXPECT_EQ(k.dual().invariants(), (std::vector<Int>{2, 4}));
}

TEST(Dual, NondegenerateAndDoubleDual) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    FinAb A = random_finite(rng, 64);
    FiniteDual D(A);
    auto elems = A.elements();
    auto chars = D.dual().elements();
    ASSERT_EQ(static_cast<Int>(chars.size()), A.order());
    // bilinearity and left/right nondegeneracy over the full pairing matrix
    for (const auto& chi : chars) {
      bool nonzero = false;
      for (const auto& a : elems) nonzero |= !D.eval(chi, a).is_zero();
      ASSERT_EQ(nonzero, !D.dual().is_zero(chi));
    }
    for (const auto& a : elems) {
      bool nonzero = false;
      for (const auto& chi : chars) nonzero |= !D.eval(chi, a).is_zero();
      ASSERT_EQ(nonzero, !A.is_zero(a));
    }
    for (std::size_t i = 0; i < std::min<std::size_t>(elems.size(), 8); ++i)
      for (std::size_t j = 0; j < std::min<std::size_t>(elems.size(), 8); ++j)
        ASSERT_EQ(D.eval(chars[j % chars.size()], vec_add(elems[i], elems[j])),
                  D.eval(chars[j % chars.size()], elems[i]) + D.eval(chars[j % chars.size()], elems[j]));
    // double dual: a -> (chi -> chi(a)) is a bijection onto the characters of the dual
    FiniteDual DD(D.dual());
    std::set<std::vector<Int>> images;
    for (const auto& a : elems) {
      std::vector<Int> row;
      for (const auto& chi : chars) {
        QZ v = D.eval(chi, a);
        row.push_back(v.num() * (A.order() / v.den()));
      }
      images.insert(row);
    }
    ASSERT_EQ(static_cast<Int>(images.size()), DD.dual().order());
  }
}

TEST(Hom, OrderEquationOnRandomHoms) {
  std::mt19937_64 rng(3);
  int tested = 0;
  while (tested < 60) {
    FinAb A = random_finite(rng, 48), B = random_finite(rng, 48);
    IntMatrix m = random_matrix(rng, B.ngens(), A.ngens(), -3, 3);
    // force well-definedness by composing with multiplication by the target exponent when needed
    bool ok = true;
    for (const auto& r : A.relation_columns()) ok &= B.is_zero(m * r);
    if (!ok) continue;
    AbHom f(A, B, m);
    auto K = kernel(f);
    auto I = image(f);
    ASSERT_EQ(A.order(), K.group.order() * I.group.order());
    // kernel oracle: count elements mapping to zero
    Int zeros = 0;
    for (const auto& a : A.elements()) zeros += B.is_zero(f(a));
    ASSERT_EQ(zeros, K.group.order());
    ASSERT_EQ(cokernel(f).order() * I.group.order(), B.order());
    ++tested;
  }
}

TEST(Element, EqualityIsCongruence) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    FinAb A = random_finite(rng, 64);
    auto elems = A.elements();
    for (const auto& r : A.relation_columns()) {
      for (std::size_t i = 0; i < std::min<std::size_t>(elems.size(), 10); ++i) {
        IntVec shifted = vec_add(elems[i], r);
        ASSERT_TRUE(A.equal(shifted, elems[i]));
        ASSERT_TRUE(A.equal(vec_add(shifted, elems[0]), vec_add(elems[i], elems[0])));
      }
    }
  }
}

TEST(Element, EnumerationMatchesDiagonalOracle) {
  std::vector<Int> d{2, 6};
  FinAb A = FinAb::from_invariants(d);
  std::set<IntVec> a, b;
  for (const auto& x : A.elements()) a.insert(A.canonical(x));
  for (const auto& x : enumerate_diag(d)) b.insert(A.canonical(x));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 12u);
}

TEST(Exactness, ShortSequence) {
  // 0 -> Z/2 -> Z/4 -> Z/2 -> 0
  FinAb z2 = FinAb::cyclic(2), z4 = FinAb::cyclic(4);
  AbHom i(z2, z4, IntMatrix{{2}}), p(z4, z2, IntMatrix{{1}});
  EXPECT_TRUE(is_exact_at(i, p));
  EXPECT_TRUE(is_injective(i));
  EXPECT_TRUE(is_surjective(p));
  AbHom zero(z2, z4, IntMatrix{{0}});
  EXPECT_FALSE(is_exact_at(zero, p));
}

TEST(Subquotient, HalfLatticeModTwo) {
  // (1/2)Z / 2Z scaled by 2: Z / 4Z
  Subquotient sq(1, {{1}}, {{4}});
  EXPECT_EQ(sq.group().invariants(), (std::vector<Int>{4}));
  EXPECT_EQ(sq.canonical({5}), sq.canonical({1}));
}
