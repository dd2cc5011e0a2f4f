// rigidcli: command-line front end for the rigid cohomology computations.
//
// Exit status: 0 all checks pass, 1 some check fails, 2 schema or input error,
// 3 unsupported shape.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rigid/io.hpp"
#include "rigid/realgerb.hpp"
#include "rigid/spectra.hpp"

using namespace rigid;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::string name, status, value;
};

struct Report {
  std::string command;
  std::string digest = "-";
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> values;

  void check(const std::string& name, bool ok, const std::string& value = "") {
    checks.push_back({name, ok ? "pass" : "fail", value});
  }
  void skip(const std::string& name, const std::string& why) { checks.push_back({name, "skipped", why}); }
  void value(const std::string& name, const std::string& v) { values.emplace_back(name, v); }

  bool passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == "fail"; });
  }

  /// Compare expected values against computed values or check values.
  /// Keys this command does not produce are skipped.
  void apply_expectations(const std::map<std::string, std::string>& expect) {
    for (const auto& [k, want] : expect) {
      std::optional<std::string> got;
      for (const auto& [n, v] : values)
        if (n == k) got = v;
      for (const auto& c : checks)
        if (c.name == k) got = c.value.empty() ? c.status : c.value;
      if (got) check("expect " + k, *got == want, *got);
      else skip("expect " + k, "not computed by this command");
    }
  }

  std::string render(bool machine) const {
    if (machine) {
      io::json j{{"command", command}, {"input_digest", digest}, {"checks", io::json::array()},
                 {"values", io::json::array()}, {"result", passed() ? "pass" : "fail"}};
      for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"status", c.status}, {"value", c.value}});
      for (const auto& [n, v] : values) j["values"].push_back({{"name", n}, {"value", v}});
      return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "command  " << command << "\ninput    " << digest << "\n";
    if (!values.empty()) os << "values\n";
    for (const auto& [n, v] : values) os << "  " << n << " = " << v << "\n";
    if (!checks.empty()) os << "checks\n";
    for (const auto& c : checks) {
      os << "  [" << c.status << "] " << c.name;
      if (!c.value.empty()) os << ": " << c.value;
      os << "\n";
    }
    os << "result   " << (passed() ? "pass" : "fail") << "\n";
    return os.str();
  }
};

struct Options {
  std::string input;
  std::string mode = "stabilized";
  Int level = 0;
  std::uint64_t seed = 0;
  std::string format = "human";
  std::vector<int> degrees;
  std::vector<Int> n_list;
  std::string module = "all";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::SchemaError("cannot read input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

YMode parse_mode(const std::string& m) {
  if (m == "fixed") return YMode::Fixed;
  if (m == "stabilized") return YMode::Stabilized;
  throw io::SchemaError("--mode must be fixed or stabilized");
}

std::string qz_table(const std::vector<std::vector<QZ>>& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t k = 0; k < t[i].size(); ++k) s += (k ? "," : "") + t[i][k].str();
    s += "]";
  }
  return s + "]";
}

std::string point_str(const TorusPoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + p[i].str();
  return s + ")";
}

std::string vec_str(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

template <class T>
const T& payload(const io::Document& d, const char* want) {
  if (!std::holds_alternative<T>(d.payload))
    throw io::SchemaError(std::string("this command needs a document of kind ") + want + ", got " + d.kind);
  return std::get<T>(d.payload);
}

// ---------------------------------------------------------------------------
// commands

void cmd_tate(const io::Document& d, const Options& o, Report& r) {
  GammaModule A = payload<io::GammaModuleSpec>(d, "gamma-module").build();
  std::vector<int> degrees = o.degrees.empty() ? std::vector<int>{-1, 0, 1, 2} : o.degrees;
  for (int k : degrees) {
    if (k < -1 || k > 2) throw io::SchemaError("--degree must be in -1..2");
    r.value("H^" + std::to_string(k), tate(k, A).group.structure());
  }
  r.value("module", A.module().structure());
  r.value("group order", std::to_string(A.group().order()));
  // Tate groups are killed by |Gamma|
  for (int k : degrees) {
    FinAb H = tate(k, A).group;
    bool killed = H.is_finite() && static_cast<Int>(A.group().order()) % H.exponent() == 0;
    r.check("H^" + std::to_string(k) + " killed by |Gamma|", killed, H.structure());
  }
  if (A.group().generators().size() == 1) {
    r.check("periodicity H^-1 = H^1", tate(-1, A).group.isomorphic(tate(1, A).group));
    r.check("periodicity H^0 = H^2", tate(0, A).group.isomorphic(tate(2, A).group));
  }
}

void torus_checks(const TorusDatum& T, Report& r) {
  r.value("torus", T.str());
  YPlusTor Y = y_plus_tor_torus(T);
  r.value("Ybar+tor", Y.group().structure());
  YExactSequence s = y_exact_sequence_check(T);
  r.check("exactness", s.holds(), s.str());
  ReductiveDatum R = as_reductive(T);
  DualCenter D = pi0_dual_center(R);
  YPlusTor Ys = y_plus_tor_reductive(R, YMode::Stabilized);
  PairingReport p = pairing_report(D, Ys);
  r.check("pairing bilinear", p.bilinear);
  r.check("pairing left kernel trivial", p.left_kernel_trivial);
  r.check("pairing right kernel trivial", p.right_kernel_trivial);
}

void pairing_table(const DualCenter& D, const YPlusTor& Y, Report& r) {
  auto ls = Y.group().elements();
  auto cs = D.dual->dual().elements();
  std::vector<std::vector<QZ>> t;
  for (const auto& l : ls) {
    std::vector<QZ> row;
    for (const auto& c : cs) row.push_back(tn_pairing(D, Y, l, c));
    t.push_back(row);
  }
  r.value("pairing table", qz_table(t));
}

void cmd_yplustor(const io::Document& d, const Options& o, Report& r) {
  YMode mode = parse_mode(o.mode);
  r.value("mode", mode_name(mode));
  if (std::holds_alternative<io::TorusSpec>(d.payload)) {
    TorusDatum T = std::get<io::TorusSpec>(d.payload).build();
    torus_checks(T, r);
    ReductiveDatum R = as_reductive(T);
    pairing_table(pi0_dual_center(R), y_plus_tor_reductive(R, YMode::Stabilized), r);
    return;
  }
  ReductiveDatum R = payload<io::ReductiveSpec>(d, "torus or reductive").build();
  YPlusTor Y = y_plus_tor_reductive(R, mode);
  r.value("Ybar+tor", Y.group().structure());
  r.value("weyl group order", std::to_string(R.weyl_order()));
  WeylReport w = weyl_triviality_check(R);
  r.check("weyl action trivial on Ybar/Q", w.holds, std::to_string(w.checked) + " reflections x basis vectors");
  PizzaReport pz = pizza_check(R, mode);
  r.value("H^0 of coroots", pz.h0_coroots);
  if (pz.condition) {
    r.check("quotient model", pz.isomorphic,
            pz.torus_group + " / " + pz.image_group + " = " + pz.quotient_group + " vs " + pz.reductive_group);
  } else {
    r.skip("quotient model", "H^0 of the coroot lattice is " + pz.h0_coroots);
  }
  DualCenter D = pi0_dual_center(R);
  r.value("pi0 dual center", D.m_tor->group().structure());
  PairingReport p = pairing_report(D, Y);
  r.check("pairing bilinear", p.bilinear);
  r.check("pairing left kernel trivial", p.left_kernel_trivial);
  if (mode == YMode::Stabilized) r.check("pairing right kernel trivial", p.right_kernel_trivial);
  else r.value("pairing right kernel trivial", p.right_kernel_trivial ? "yes" : "no");
  pairing_table(D, Y, r);
  if (R.torus().group().order() == 2) {
    ImageReport im = real_image_characterization(R);
    r.check("real image", im.equal, im.image + " vs " + im.kernel);
  }
}

void cmd_gerb(const io::Document* d, const Options& o, Report& r) {
  std::vector<Int> ns = o.n_list;
  if (ns.empty()) {
    if (d) {
      const auto& l = payload<io::LevelSpec>(*d, "level");
      if (l.n) ns = {*l.n};
    }
    if (ns.empty())
      for (Int n = 2; n <= 12; ++n) ns.push_back(n);
  }
  for (Int n : ns)
    if (n < 1 || n > 64) throw io::SchemaError("--n-list entries must be in 1..64");
  if (!d) {
    for (const auto& row : real_tower_checks(ns, 200)) {
      std::string n = std::to_string(row.n);
      r.check("H^2(u_" + n + ") = Z/gcd(n,2)", row.h2_ok, row.h2);
      r.check("H^1 transition u_" + std::to_string(2 * row.n * row.n) + " -> u_" + n + " zero", row.h1_transition_zero);
      if (2 * row.n * row.n <= 200)
        r.check("H^1 transition zero by enumeration, n = " + n, row.h1_transition_zero_enumerated);
      else
        r.skip("H^1 transition zero by enumeration, n = " + n, "u_" + std::to_string(2 * row.n * row.n) + " too large");
      LevelDatum L = LevelDatum::real(row.n);
      FinAb h0 = invariants_of_u_characters(L);
      r.check("H^0(X*(u_" + n + ")) = Z/gcd(n,2)", h0.isomorphic(FinAb::cyclic(gcd(row.n, 2))), h0.structure());
    }
    return;
  }
  const auto& spec = payload<io::LevelSpec>(*d, "level");
  for (Int n : ns) {
    LevelDatum L = spec.build(n);
    std::string s = std::to_string(n);
    Int k = static_cast<Int>(L.G->order());
    UPoints U = build_u(L);
    r.value("H^2(u_" + s + ")", cohomology(2, *U.u).group.structure());
    FinAb h0 = invariants_of_u_characters(L);
    bool trivial_action = std::all_of(L.cyclo.begin(), L.cyclo.end(), [&](Int c) { return mod_floor(c - 1, n) == 0; });
    if (trivial_action)
      r.check("H^0(X*(u_" + s + ")) = Z/gcd(n,|Gamma|)", h0.isomorphic(FinAb::cyclic(gcd(n, k))), h0.structure());
    else
      r.value("H^0(X*(u_" + s + "))", h0.structure());
    r.check("character pairing perfect, n = " + s, character_pairing_is_perfect(U, build_u_characters(L)));
  }
}

IntVec default_lambda(const TorusDatum& T) {
  auto basis = lattice_kernel(T.norm());
  if (basis.empty()) return IntVec(T.rank(), 0);
  return basis.front();
}

void cmd_cocycle(const io::Document& d, const Options& o, Report& r) {
  const auto& spec = payload<io::TorusSpec>(d, "torus");
  auto T = std::make_shared<const TorusDatum>(spec.build());
  if (T->group().order() != 2) throw UnsupportedShapeError("cocycle: only Gamma = Z/2 (the real gerb) is supported");
  IntVec lambda = spec.lambda ? IntVec(spec.lambda->begin(), spec.lambda->end()) : default_lambda(*T);
  if (lambda.size() != T->rank()) throw io::SchemaError("torus.lambda: length must equal the rank");
  Int n = o.level ? o.level : std::max<Int>(4, 2 * T->exponent());
  if (n % 2 != 0 || n % T->exponent() != 0)
    throw io::SchemaError("--level must be even and divisible by the exponent of Ybar/Y");
  auto S = std::make_shared<const TorusPoints>(T);
  auto W = std::make_shared<const RealGerbLevel>(n);
  RealRigidCocycle z = z_lambda(S, W, lambda);
  r.value("level", std::to_string(n));
  r.value("lambda", vec_str(lambda));
  r.value("z(sigma)", point_str(z.at_sigma()));
  r.value("phi(delta_e(1))", vec_str(to_hom_uZ(*T, lambda, W->level())));
  r.check("cocycle identity", cocycle_failures(z) == 0,
          std::to_string(W->order() * W->order()) + " pairs");
  r.check("restriction to u", restriction_matches(z, to_hom_uZ(*T, lambda, W->level())));
  r.check("additivity", is_sum(z_lambda(S, W, vec_scale(2, lambda)), z, z));
  if (2 * n * n <= 128) {
    auto fine = std::make_shared<const RealGerbLevel>(2 * n * n);
    r.check("inflation n -> 2n^2", inflation_matches(alpha_transition(fine, W), z, z_lambda(S, fine, lambda)));
  } else {
    r.skip("inflation n -> 2n^2", "level " + std::to_string(2 * n * n) + " too large");
  }
  BoundarySquareReport b = boundary_square_check(z);
  r.check("boundary square", b.holds && b.values_in_z);
  // integral lambda: compare with the classical cocycle
  auto y = T->to_y_rational(lambda);
  bool integral = std::all_of(y.begin(), y.end(), [](const Rational& q) { return q.is_integer(); });
  if (integral) {
    IntVec ly;
    for (const auto& q : y) ly.push_back(q.num());
    auto cl = classical_cocycle_inflated(*S, *W, ly);
    std::vector<TorusPoint> diff;
    for (std::size_t w = 0; w < cl.size(); ++w) diff.push_back(S->sub(z(w), cl[w]));
    r.check("classical comparison up to coboundary", find_coboundary(*S, *W, diff, 4 * n).found);
  } else {
    r.skip("classical comparison up to coboundary", "lambda is not integral");
  }
}

void cmd_strongform(const io::Document& d, const Options& o, Report& r) {
  const auto& spec = payload<io::StrongFormSpec>(d, "strong-form");
  Int n = o.level ? o.level : 4;
  if (n % 2 != 0) throw io::SchemaError("--level must be even");
  auto W = std::make_shared<const RealGerbLevel>(n);
  r.value("level", std::to_string(n));
  if (spec.target == "sl2") {
    SL2StrongForm f{*spec.g};
    if (!f.valid()) throw io::SchemaError("strong-form.g: need det 1 and g conj(g) = +-1");
    r.value("delta^2", f.square().str());
    int inv = sl2_strong_form_invariant(f);
    r.value("class", inv == 0 ? "split (delta^2 = 1)" : (inv > 0 ? "J sigma" : "-J sigma"));
    SL2Cocycle z = sl2_cocycle_from_strong_form(*W, f);
    r.check("cocycle identity", sl2_cocycle_failures(*W, z) == 0);
    r.check("round trip delta -> z -> delta", sl2_strong_form_from_cocycle(*W, z).g == f.g);
    std::size_t xi = W->make(W->u_index(W->xi(W->sigma(), W->sigma())), W->gamma_identity());
    r.check("delta^2 = z(xi(sigma,sigma))", z[xi] == f.square());
    SL2StrongForm rep{inv == 0 ? Mat2::identity() : (inv > 0 ? sl2_j() : -sl2_j())};
    auto h = sl2_equivalence_witness(rep, f);
    if (h) r.check("equivalent to representative", true, h->str());
    else r.skip("equivalent to representative", "no witness in the search box");
    return;
  }
  auto T = std::make_shared<const TorusDatum>(spec.torus->build());
  if (T->group().order() != 2) throw UnsupportedShapeError("strongform: only Gamma = Z/2 is supported");
  if (n % T->exponent() != 0) throw io::SchemaError("--level must be divisible by the exponent of Ybar/Y");
  auto S = std::make_shared<const TorusPoints>(T);
  TorusStrongForm f{TorusPoints::from_rational(spec.t)};
  TorusPoint sq = strong_form_square(*S, f);
  r.value("delta^2", point_str(sq));
  bool in_z = S->to_ybar(sq).has_value();
  r.check("delta^2 in Z", in_z);
  if (!in_z) return;
  RealRigidCocycle z = cocycle_from_strong_form(S, W, f);
  r.check("cocycle identity", cocycle_failures(z) == 0);
  r.check("round trip delta -> z -> delta", strong_form_from_cocycle(z).t == f.t);
  RealRigidCocycle back = cocycle_from_strong_form(S, W, strong_form_from_cocycle(z));
  r.check("round trip z -> delta -> z", pointwise_equal(back, z));
  std::size_t xi = W->make(W->u_index(W->xi(W->sigma(), W->sigma())), W->gamma_identity());
  r.check("delta^2 = z(xi(sigma,sigma))", z(xi) == sq);
}

void cmd_sl2demo(const Options&, Report& r) {
  PacketReport p = sl2_packet_report();
  r.check("S_phi order 4, elementary abelian", p.s_phi_order == 4 && p.s_phi_elementary_abelian && p.s_phi_matches_list,
          std::to_string(p.s_phi_order));
  r.check("S_phi+ order 8", p.s_phi_plus_order == 8 && p.s_phi_plus_matches_list, std::to_string(p.s_phi_plus_order));
  r.check("S_phi+ is the preimage of S_phi", p.s_phi_plus_is_preimage);
  r.check("S_phi+ quaternion", p.quaternion);
  std::string deg;
  for (Int x : p.degrees) deg += (deg.empty() ? "" : ",") + std::to_string(x);
  r.check("irreducible degrees", p.degrees == std::vector<Int>{1, 1, 1, 1, 2}, "(" + deg + ")");
  r.check("character table orthogonal", p.rows_orthogonal && p.columns_orthogonal);
  r.check("central character of rho5 at -1", p.rho5_central == QZ(1, 2),
          p.rho5_central.is_zero() ? "1" : "exp(2 pi i " + p.rho5_central.str() + ")");
  r.check("linear characters kill -1", std::all_of(p.linear_central.begin(), p.linear_central.end(),
                                                   [](const QZ& q) { return q.is_zero(); }));
  r.check("rho5 is the defining representation", p.rho5_character_is_natural_trace);
  r.check("tr rho5 = 0 off the center", p.rho5_vanishes_off_center);
  r.check("tr rho5 on lifts of 1", p.rho5_on_lifts_of_one == std::vector<Int>{2, -2},
          std::to_string(p.rho5_on_lifts_of_one[0]) + "," + std::to_string(p.rho5_on_lifts_of_one[1]));
  r.check("kernel of pi0 Z+ -> pi0 S_phi+ trivial", p.kernel_trivial);
  r.value("packet size", std::to_string(p.packet_size));
  r.value("packet members over the split form", std::to_string(p.packet_split));
  r.value("packet members over the inner form", std::to_string(p.packet_nonsplit));
  r.check("packet 4 + 1", p.packet_split == 4 && p.packet_nonsplit == 1);
  r.check("rigid classes match central characters", p.rigid_classes == 2, std::to_string(p.rigid_classes));
  SL2Census c = sl2_strong_form_census(1, 2);
  r.value("strong real forms with delta^2 = -1", std::to_string(c.classes_square_minus_one) + " classes");
  r.value("strong real forms with delta^2 = 1", std::to_string(c.classes_square_one) + " class");
  r.check("two strong forms over the nontrivial class", c.classes_square_minus_one == 2 && c.all_witnessed);
}

// ---------------------------------------------------------------------------
// verify: property batteries

std::vector<TorusDatum> random_tori(std::mt19937_64& rng, int count) {
  std::vector<TorusDatum> out;
  const std::size_t orders[] = {2, 3, 4, 6};
  for (int i = 0; i < count; ++i) {
    RandomTorusOptions opt;
    opt.group_order = orders[i % 4];
    out.push_back(random_torus(rng, opt));
  }
  return out;
}

void verify_suite(const std::string& module, std::uint64_t seed, Report& r) {
  std::mt19937_64 rng(seed);
  auto want = [&](const char* m) { return module == "all" || module == m; };
  if (want("abgroup")) {
    bool ok = true;
    for (int t = 0; t < 30; ++t) {
      IntMatrix m(3, 3);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) m(i, k) = static_cast<Int>(rng() % 9) - 4;
      Int det = m.determinant();
      if (det == 0) continue;
      ok = ok && FinAb(3, m).order() == (det < 0 ? -det : det);
    }
    r.check("abgroup: |coker M| = |det M|", ok);
  }
  if (want("gmodule")) {
    bool ok = true;
    for (const auto& T : random_tori(rng, 8)) {
      GammaModule Y = T.y_module();
      ok = ok && tate(-1, Y).group.isomorphic(tate(1, Y).group) && tate(0, Y).group.isomorphic(tate(2, Y).group);
    }
    r.check("gmodule: periodicity on random lattices", ok);
  }
  if (want("cochain")) {
    bool ok = true;
    for (int which = 0; which < 4; ++which)
      for (int rep = 0; rep < 5; ++rep) {
        gen::Instance s = gen::random_instance(which, rng);
        std::size_t i = 1 + rng() % 3, j = 1 + rng() % i;
        ok = ok && leibniz_check(gen::random_cochain(s, i, j, rng), gen::random_lambda(s, rng), *s.P).holds;
      }
    r.check("cochain: Leibniz rule", ok);
  }
  if (want("gerb")) {
    bool ok = true;
    for (const auto& row : real_tower_checks({2, 3, 4, 5, 6}, 200))
      ok = ok && row.h2_ok && row.h1_transition_zero && row.h1_transition_zero_enumerated;
    r.check("gerb: real tower", ok);
  }
  if (want("rigidcoh")) {
    bool ok = true;
    for (const auto& T : random_tori(rng, 12)) {
      ok = ok && y_exact_sequence_check(T).holds();
      ReductiveDatum R = as_reductive(T);
      PairingReport p = pairing_report(pi0_dual_center(R), y_plus_tor_reductive(R, YMode::Stabilized));
      ok = ok && p.bilinear && p.left_kernel_trivial && p.right_kernel_trivial;
    }
    r.check("rigidcoh: exactness and pairing", ok);
  }
  if (want("realgerb")) {
    bool ok = true;
    RandomTorusOptions opt;
    opt.group_order = 2;
    opt.anisotropic_only = true;
    for (int t = 0; t < 6; ++t) {
      auto T = std::make_shared<const TorusDatum>(random_torus(rng, opt));
      if (8 % T->exponent() != 0) continue;
      auto S = std::make_shared<const TorusPoints>(T);
      auto W = std::make_shared<const RealGerbLevel>(8);
      for (const auto& l : lattice_kernel(T->norm())) ok = ok && cocycle_failures(z_lambda(S, W, l)) == 0;
    }
    r.check("realgerb: cocycle identity", ok);
  }
  if (want("spectra")) r.check("spectra: SL2 packet", sl2_packet_report().holds());
}

void cmd_verify(const io::Document* d, const Options& o, Report& r) {
  static const std::vector<std::string> modules{"all",      "abgroup",  "gmodule", "cochain",
                                                "gerb",     "rigidcoh", "realgerb", "spectra"};
  if (std::find(modules.begin(), modules.end(), o.module) == modules.end())
    throw io::SchemaError("--module must be one of all, abgroup, gmodule, cochain, gerb, rigidcoh, realgerb, spectra");
  r.value("seed", std::to_string(o.seed));
  if (!d) {
    verify_suite(o.module, o.seed, r);
    return;
  }
  // a single document: run the checks for its kind
  if (d->kind == "gamma-module") cmd_tate(*d, o, r);
  else if (d->kind == "torus") torus_checks(std::get<io::TorusSpec>(d->payload).build(), r);
  else if (d->kind == "reductive") cmd_yplustor(*d, o, r);
  else if (d->kind == "level") cmd_gerb(d, o, r);
  else if (d->kind == "strong-form") cmd_strongform(*d, o, r);
  else if (d->kind == "matrix-group") {
    const auto& m = std::get<io::MatrixGroupSpec>(d->payload);
    MatrixGroup G = MatrixGroup::generate(m.generators, m.bound, m.mod_center);
    r.value("order", std::to_string(G.order()));
    CharacterTable T = character_table(G.group_ptr());
    std::string deg;
    for (Int x : T.degrees) deg += (deg.empty() ? "" : ",") + std::to_string(x);
    r.value("degrees", "(" + deg + ")");
    r.value("classes", std::to_string(T.classes.count()));
    r.check("sum of squared degrees", T.sum_of_squares() == static_cast<Int>(G.order()));
    r.check("row orthogonality", T.row_orthogonal());
    r.check("column orthogonality", T.column_orthogonal());
  } else {
    GroupPtr G = std::get<io::GroupSpec>(d->payload).build();
    r.value("order", std::to_string(G->order()));
    r.value("abelian", G->is_abelian() ? "yes" : "no");
    r.value("classes", std::to_string(conjugacy_classes(*G).count()));
  }
}

int run_one(const std::string& command, const std::string* path, const Options& o) {
  Report r;
  r.command = command;
  std::optional<io::Document> doc;
  if (path) {
    doc = io::parse_document_text(read_file(*path));
    r.digest = io::digest(*doc);
  }
  auto need_doc = [&]() -> const io::Document& {
    if (!doc) throw io::SchemaError(command + " needs --input");
    return *doc;
  };
  if (command == "tate") cmd_tate(need_doc(), o, r);
  else if (command == "yplustor") cmd_yplustor(need_doc(), o, r);
  else if (command == "gerb") cmd_gerb(doc ? &*doc : nullptr, o, r);
  else if (command == "cocycle") cmd_cocycle(need_doc(), o, r);
  else if (command == "strongform") cmd_strongform(need_doc(), o, r);
  else if (command == "sl2demo") cmd_sl2demo(o, r);
  else cmd_verify(doc ? &*doc : nullptr, o, r);
  if (doc) r.apply_expectations(doc->expect);
  std::cout << r.render(o.format == "machine");
  return r.passed() ? 0 : 1;
}

int guarded(const std::string& command, const std::string* path, const Options& o) {
  try {
    return run_one(command, path, o);
  } catch (const UnsupportedShapeError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-level computations for rigid inner forms and their Galois cohomology"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool input) {
    if (input) c->add_option("--input", o.input, "input document (JSON) or a directory of them");
    c->add_option("--format", o.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  };
  auto* tate = app.add_subcommand("tate", "Tate cohomology of a gamma-module");
  common(tate, true);
  tate->add_option("--degree", o.degrees, "degrees in -1..2 (default all)");
  auto* ypt = app.add_subcommand("yplustor", "Ybar+tor with exactness, Weyl, quotient-model and pairing checks");
  common(ypt, true);
  ypt->add_option("--mode", o.mode, "fixed or stabilized")->check(CLI::IsMember({"fixed", "stabilized"}));
  auto* gerb = app.add_subcommand("gerb", "finite levels of the real gerb, or of a given level datum");
  common(gerb, true);
  gerb->add_option("--n-list", o.n_list, "levels (default 2..12)");
  auto* coc = app.add_subcommand("cocycle", "the rigidifying cocycle z_lambda of a real torus");
  common(coc, true);
  coc->add_option("--level", o.level, "finite level n");
  auto* sf = app.add_subcommand("strongform", "strong real forms and rigid cocycles in both directions");
  common(sf, true);
  sf->add_option("--level", o.level, "finite level n");
  auto* demo = app.add_subcommand("sl2demo", "the SL_2 L-packet example end to end");
  common(demo, false);
  auto* ver = app.add_subcommand("verify", "property batteries, or the checks for one input document");
  common(ver, true);
  ver->add_option("--seed", o.seed, "seed for the random batteries");
  ver->add_option("--module", o.module, "restrict to one module");
  ver->add_option("--mode", o.mode, "fixed or stabilized")->check(CLI::IsMember({"fixed", "stabilized"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (o.input.empty()) return guarded(command, nullptr, o);
  if (!fs::is_directory(o.input)) return guarded(command, &o.input, o);
  // batch: every .json file in the directory, in name order
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(o.input))
    if (e.path().extension() == ".json") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  int worst = 0;
  for (const auto& f : files) {
    std::cout << "== " << fs::path(f).filename().string() << "\n";
    worst = std::max(worst, guarded(command, &f, o));
  }
  return worst;
}
