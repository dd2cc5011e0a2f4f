#pragma once

// JSON input documents: strict parsing (unknown keys rejected), conversion to
// the computational types, and serialization back to JSON.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rigid/gaussian.hpp"
#include "rigid/gerb.hpp"
#include "rigid/gmodule.hpp"
#include "rigid/rigidcoh.hpp"

namespace rigid::io {

using nlohmann::json;

struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// strict object access

class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw SchemaError(where_ + ": expected an object");
  }
  const json& need(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw SchemaError(where_ + ": missing key '" + key + "'");
    return j_.at(key);
  }
  const json* maybe(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw SchemaError(where_ + ": unknown key '" + k + "'");
  }
  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

inline Int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<Int>();
}

inline std::size_t as_size(const json& j, const std::string& where) {
  Int v = as_int(j, where);
  if (v < 0) throw SchemaError(where + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline std::vector<Int> as_int_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected a list of integers");
  std::vector<Int> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_int(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

/// A rational as an integer or a string "a/b".
inline Rational as_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<Int>());
  if (!j.is_string()) throw SchemaError(where + ": expected an integer or a fraction string");
  const std::string s = j.get<std::string>();
  try {
    std::size_t slash = s.find('/');
    std::size_t pos = 0;
    Int num = std::stoll(s.substr(0, slash), &pos);
    if (pos != (slash == std::string::npos ? s.size() : slash)) throw std::invalid_argument(s);
    Int den = 1;
    if (slash != std::string::npos) {
      std::string d = s.substr(slash + 1);
      den = std::stoll(d, &pos);
      if (pos != d.size()) throw std::invalid_argument(s);
    }
    if (den == 0) throw SchemaError(where + ": zero denominator");
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw SchemaError(where + ": '" + s + "' is not a fraction");
  }
}

inline json rational_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

/// A Gaussian rational as a rational or a pair [re, im].
inline Gauss as_gauss(const json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 2) throw SchemaError(where + ": expected a pair [re, im]");
    return Gauss(as_rational(j[0], where + ".re"), as_rational(j[1], where + ".im"));
  }
  return Gauss(as_rational(j, where));
}

inline json gauss_json(const Gauss& z) { return json::array({rational_json(z.re), rational_json(z.im)}); }

inline Mat2 as_mat2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw SchemaError(where + ": expected four entries (row-major 2x2)");
  return Mat2(as_gauss(j[0], where + "[0]"), as_gauss(j[1], where + "[1]"), as_gauss(j[2], where + "[2]"),
              as_gauss(j[3], where + "[3]"));
}

inline json mat2_json(const Mat2& m) {
  return json::array({gauss_json(m(0, 0)), gauss_json(m(0, 1)), gauss_json(m(1, 0)), gauss_json(m(1, 1))});
}

/// {"rows": r, "cols": c, "entries": [row-major]}
inline IntMatrix as_matrix(const json& j, const std::string& where) {
  Fields f(j, where);
  std::size_t r = as_size(f.need("rows"), where + ".rows");
  std::size_t c = as_size(f.need("cols"), where + ".cols");
  std::vector<Int> e = as_int_list(f.need("entries"), where + ".entries");
  f.finish();
  if (e.size() != r * c) throw SchemaError(where + ": expected rows*cols entries");
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < c; ++k) m(i, k) = e[i * c + k];
  return m;
}

inline json matrix_json(const IntMatrix& m) {
  std::vector<Int> e;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) e.push_back(m(i, k));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
}

// ---------------------------------------------------------------------------
// document types

struct GroupSpec {
  std::size_t cyclic = 0;
  std::vector<std::vector<std::size_t>> permutations;
  bool operator==(const GroupSpec&) const = default;

  GroupPtr build() const {
    if (cyclic > 0) return make_group(FiniteGroup::cyclic(cyclic));
    return make_group(FiniteGroup::from_permutations(permutations));
  }
  std::size_t generator_count() const { return cyclic > 0 ? 1 : permutations.size(); }
};

struct GammaModuleSpec {
  GroupSpec group;
  std::vector<Int> invariants;  // 0 is a copy of Z
  std::vector<IntMatrix> actions;
  bool operator==(const GammaModuleSpec&) const = default;

  GammaModule build() const {
    GroupPtr G = group.build();
    if (actions.size() != G->generators().size())
      throw SchemaError("gamma-module: need one action matrix per group generator");
    return GammaModule::from_generators(G, FinAb::from_invariants(invariants), actions);
  }
};

struct TorusSpec {
  GroupSpec group;
  std::vector<IntMatrix> actions;
  std::optional<IntMatrix> center_num;  // Ybar basis numerators (columns, Y coordinates)
  Int center_den = 1;
  std::optional<std::vector<Int>> lambda;  // Ybar coordinates
  bool operator==(const TorusSpec&) const = default;

  TorusDatum build() const {
    GroupPtr G = group.build();
    if (actions.size() != G->generators().size()) throw SchemaError("torus: need one action matrix per group generator");
    if (!center_num) return TorusDatum::without_center(G, actions);
    return TorusDatum::from_generators(G, actions, *center_num, center_den);
  }
};

struct ReductiveSpec {
  TorusSpec torus;
  IntMatrix coroots;  // columns in Y coordinates
  IntMatrix roots;    // rows
  bool operator==(const ReductiveSpec&) const = default;

  ReductiveDatum build() const { return ReductiveDatum(torus.build(), coroots, roots); }
};

struct LevelSpec {
  GroupSpec group;
  std::optional<Int> n;
  std::vector<Int> units;  // per group generator
  bool operator==(const LevelSpec&) const = default;

  LevelDatum build(Int level) const { return LevelDatum::make(group.build(), level, units); }
};

struct StrongFormSpec {
  std::string target;  // "sl2" or "torus"
  std::optional<Mat2> g;
  std::optional<TorusSpec> torus;
  std::vector<Rational> t;  // Y coordinates of t, for a torus
  bool operator==(const StrongFormSpec&) const = default;
};

struct MatrixGroupSpec {
  std::vector<Mat2> generators;
  bool mod_center = false;
  std::size_t bound = 64;
  bool operator==(const MatrixGroupSpec&) const = default;
};

using Payload = std::variant<GroupSpec, GammaModuleSpec, TorusSpec, ReductiveSpec, LevelSpec, StrongFormSpec,
                             MatrixGroupSpec>;

struct Document {
  std::string kind;
  std::string name;
  Payload payload;
  std::map<std::string, std::string> expect;  // check name -> expected value
  bool operator==(const Document&) const = default;
};

// ---------------------------------------------------------------------------
// parsing

namespace detail {

inline GroupSpec parse_group_fields(Fields& f) {
  GroupSpec g;
  const json* c = f.maybe("cyclic");
  const json* p = f.maybe("permutations");
  if ((c != nullptr) == (p != nullptr)) throw SchemaError(f.where() + ": give exactly one of 'cyclic', 'permutations'");
  if (c) {
    g.cyclic = as_size(*c, f.where() + ".cyclic");
    if (g.cyclic == 0) throw SchemaError(f.where() + ": cyclic order must be positive");
  } else {
    if (!p->is_array() || p->empty()) throw SchemaError(f.where() + ": 'permutations' must be a non-empty list");
    for (std::size_t i = 0; i < p->size(); ++i) {
      std::vector<std::size_t> perm;
      for (const auto& x : as_int_list((*p)[i], f.where() + ".permutations")) {
        if (x < 0) throw SchemaError(f.where() + ": negative point in a permutation");
        perm.push_back(static_cast<std::size_t>(x));
      }
      g.permutations.push_back(perm);
    }
  }
  return g;
}

inline GroupSpec parse_group(const json& j, const std::string& where) {
  Fields f(j, where);
  GroupSpec g = parse_group_fields(f);
  f.finish();
  return g;
}

inline std::vector<IntMatrix> parse_matrices(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected a list of matrices");
  std::vector<IntMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_matrix(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline TorusSpec parse_torus_fields(Fields& f) {
  TorusSpec t;
  t.group = parse_group(f.need("group"), f.where() + ".group");
  t.actions = parse_matrices(f.need("actions"), f.where() + ".actions");
  if (const json* c = f.maybe("center")) {
    Fields cf(*c, f.where() + ".center");
    t.center_num = as_matrix(cf.need("num"), cf.where() + ".num");
    t.center_den = as_int(cf.need("den"), cf.where() + ".den");
    cf.finish();
    if (t.center_den < 1) throw SchemaError(f.where() + ".center: den must be positive");
  }
  if (const json* l = f.maybe("lambda")) t.lambda = as_int_list(*l, f.where() + ".lambda");
  return t;
}

inline TorusSpec parse_torus(const json& j, const std::string& where) {
  Fields f(j, where);
  TorusSpec t = parse_torus_fields(f);
  f.finish();
  return t;
}

}  // namespace detail

inline const std::vector<std::string>& document_kinds() {
  static const std::vector<std::string> k{"group",        "gamma-module", "torus",       "reductive",
                                          "level",        "strong-form",  "matrix-group"};
  return k;
}

inline Document parse_document(const json& j) {
  Fields f(j, "document");
  Document d;
  const json& kind = f.need("kind");
  if (!kind.is_string()) throw SchemaError("document.kind: expected a string");
  d.kind = kind.get<std::string>();
  if (const json* n = f.maybe("name")) {
    if (!n->is_string()) throw SchemaError("document.name: expected a string");
    d.name = n->get<std::string>();
  }
  if (const json* e = f.maybe("expect")) {
    if (!e->is_object()) throw SchemaError("document.expect: expected an object");
    for (const auto& [k, v] : e->items()) {
      if (!v.is_string()) throw SchemaError("document.expect." + k + ": expected a string");
      d.expect[k] = v.get<std::string>();
    }
  }
  const std::string w = d.kind;
  if (d.kind == "group") {
    d.payload = detail::parse_group_fields(f);
  } else if (d.kind == "gamma-module") {
    GammaModuleSpec m;
    m.group = detail::parse_group(f.need("group"), w + ".group");
    m.invariants = as_int_list(f.need("invariants"), w + ".invariants");
    for (Int x : m.invariants)
      if (x < 0 || x == 1) throw SchemaError(w + ".invariants: entries must be 0 (for Z) or at least 2");
    m.actions = detail::parse_matrices(f.need("actions"), w + ".actions");
    d.payload = m;
  } else if (d.kind == "torus") {
    d.payload = detail::parse_torus_fields(f);
  } else if (d.kind == "reductive") {
    ReductiveSpec r;
    r.torus = detail::parse_torus(f.need("torus"), w + ".torus");
    r.coroots = as_matrix(f.need("coroots"), w + ".coroots");
    r.roots = as_matrix(f.need("roots"), w + ".roots");
    d.payload = r;
  } else if (d.kind == "level") {
    LevelSpec l;
    l.group = detail::parse_group(f.need("group"), w + ".group");
    if (const json* n = f.maybe("n")) {
      l.n = as_int(*n, w + ".n");
      if (*l.n < 1) throw SchemaError(w + ".n: must be positive");
    }
    l.units = as_int_list(f.need("units"), w + ".units");
    if (l.units.size() != l.group.generator_count()) throw SchemaError(w + ".units: need one unit per group generator");
    d.payload = l;
  } else if (d.kind == "strong-form") {
    StrongFormSpec s;
    const json& t = f.need("target");
    if (!t.is_string()) throw SchemaError(w + ".target: expected a string");
    s.target = t.get<std::string>();
    if (s.target == "sl2") {
      s.g = as_mat2(f.need("g"), w + ".g");
    } else if (s.target == "torus") {
      s.torus = detail::parse_torus(f.need("torus"), w + ".torus");
      const json& tv = f.need("t");
      if (!tv.is_array()) throw SchemaError(w + ".t: expected a list of fractions");
      for (std::size_t i = 0; i < tv.size(); ++i) s.t.push_back(as_rational(tv[i], w + ".t"));
      if (s.t.size() != s.torus->actions.at(0).rows()) throw SchemaError(w + ".t: length must equal the torus rank");
    } else {
      throw SchemaError(w + ".target: expected 'sl2' or 'torus'");
    }
    d.payload = s;
  } else if (d.kind == "matrix-group") {
    MatrixGroupSpec m;
    const json& g = f.need("generators");
    if (!g.is_array() || g.empty()) throw SchemaError(w + ".generators: expected a non-empty list");
    for (std::size_t i = 0; i < g.size(); ++i) m.generators.push_back(as_mat2(g[i], w + ".generators"));
    if (const json* mc = f.maybe("mod_center")) {
      if (!mc->is_boolean()) throw SchemaError(w + ".mod_center: expected a boolean");
      m.mod_center = mc->get<bool>();
    }
    if (const json* b = f.maybe("bound")) m.bound = as_size(*b, w + ".bound");
    d.payload = m;
  } else {
    throw SchemaError("document.kind: unknown kind '" + d.kind + "'");
  }
  f.finish();
  return d;
}

inline Document parse_document_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return parse_document(j);
}

// ---------------------------------------------------------------------------
// serialization

inline json group_json(const GroupSpec& g) {
  if (g.cyclic > 0) return {{"cyclic", g.cyclic}};
  return {{"permutations", g.permutations}};
}

inline json torus_json(const TorusSpec& t) {
  json j{{"group", group_json(t.group)}, {"actions", json::array()}};
  for (const auto& m : t.actions) j["actions"].push_back(matrix_json(m));
  if (t.center_num) j["center"] = {{"num", matrix_json(*t.center_num)}, {"den", t.center_den}};
  if (t.lambda) j["lambda"] = *t.lambda;
  return j;
}

inline json document_json(const Document& d) {
  json j;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GroupSpec>) {
          j = group_json(p);
        } else if constexpr (std::is_same_v<T, GammaModuleSpec>) {
          j = {{"group", group_json(p.group)}, {"invariants", p.invariants}, {"actions", json::array()}};
          for (const auto& m : p.actions) j["actions"].push_back(matrix_json(m));
        } else if constexpr (std::is_same_v<T, TorusSpec>) {
          j = torus_json(p);
        } else if constexpr (std::is_same_v<T, ReductiveSpec>) {
          j = {{"torus", torus_json(p.torus)}, {"coroots", matrix_json(p.coroots)}, {"roots", matrix_json(p.roots)}};
        } else if constexpr (std::is_same_v<T, LevelSpec>) {
          j = {{"group", group_json(p.group)}, {"units", p.units}};
          if (p.n) j["n"] = *p.n;
        } else if constexpr (std::is_same_v<T, StrongFormSpec>) {
          j = {{"target", p.target}};
          if (p.g) j["g"] = mat2_json(*p.g);
          if (p.torus) {
            j["torus"] = torus_json(*p.torus);
            j["t"] = json::array();
            for (const auto& x : p.t) j["t"].push_back(rational_json(x));
          }
        } else {
          j = {{"generators", json::array()}, {"mod_center", p.mod_center}, {"bound", p.bound}};
          for (const auto& m : p.generators) j["generators"].push_back(mat2_json(m));
        }
      },
      d.payload);
  j["kind"] = d.kind;
  if (!d.name.empty()) j["name"] = d.name;
  if (!d.expect.empty()) j["expect"] = d.expect;
  return j;
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = hex[h & 15];
  return s;
}

/// Digest of the canonical serialization, so formatting does not matter.
inline std::string digest(const Document& d) { return fnv1a(document_json(d).dump()); }

}  // namespace rigid::io
