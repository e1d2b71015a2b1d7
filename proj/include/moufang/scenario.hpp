#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario JSON parsing, the fixed check registry and the deterministic
 *        report body.
 *
 * All scalars in scenarios and reports are JSON strings: integers, field
 * elements and values are written textually, never as floating point.
 */

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "moufang/suites.hpp"

namespace moufang {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  static const char* d = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = d[x & 15];
  return s;
}

namespace detail {

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + " needs \"" + key + "\"");
  return j.at(key);
}

inline std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + " must be a string");
  return j.get<std::string>();
}

inline long long integer(const Json& j, const std::string& where) {
  const std::string s = text(j, where);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw SchemaError(where + " must be an integer string, got \"" + s + "\"");
  }
  if (pos != s.size()) throw SchemaError(where + " must be an integer string, got \"" + s + "\"");
  return v;
}

inline std::size_t count(const Json& j, const std::string& where) {
  const long long v = integer(j, where);
  if (v < 0) throw SchemaError(where + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

inline void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw SchemaError(where + " has unknown key \"" + it.key() + "\"");
  }
}

inline std::map<std::string, std::string> images(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + " must map variables to expressions");
  std::map<std::string, std::string> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = text(it.value(), where + "." + it.key());
  return m;
}

}  // namespace detail

inline FieldPtr parse_field(const Json& j, const std::string& where = "field") {
  const std::string kind = detail::text(detail::member(j, "kind", where), where + ".kind");
  if (kind == "rational") {
    detail::only_keys(j, {"kind"}, where);
    return Field::rational();
  }
  if (kind == "prime") {
    detail::only_keys(j, {"kind", "p"}, where);
    return Field::prime(detail::integer(detail::member(j, "p", where), where + ".p"));
  }
  if (kind == "galois") {
    detail::only_keys(j, {"kind", "p", "modulus", "generator"}, where);
    const Json& m = detail::member(j, "modulus", where);
    if (!m.is_array()) throw SchemaError(where + ".modulus must list coefficients from degree 0 up");
    std::vector<std::int64_t> c;
    for (const auto& x : m) c.push_back(detail::integer(x, where + ".modulus"));
    const std::string g = j.contains("generator") ? detail::text(j.at("generator"), where + ".generator") : "a";
    return Field::galois(detail::integer(detail::member(j, "p", where), where + ".p"), c, g);
  }
  if (kind == "ratfunc") {
    detail::only_keys(j, {"kind", "variable", "base"}, where);
    return Field::ratfunc(detail::text(detail::member(j, "variable", where), where + ".variable"),
                          parse_field(detail::member(j, "base", where), where + ".base"));
  }
  throw SchemaError(where + ".kind \"" + kind + "\" is not rational, prime, galois or ratfunc");
}

inline Valuation parse_valuation(const Json& j, const FieldPtr& f, const std::string& where = "valuation") {
  const std::string kind = detail::text(detail::member(j, "kind", where), where + ".kind");
  if (kind == "trivial") {
    detail::only_keys(j, {"kind"}, where);
    return Valuation::trivial(f);
  }
  if (kind == "p_adic") {
    detail::only_keys(j, {"kind", "p"}, where);
    return Valuation::p_adic(f, detail::integer(detail::member(j, "p", where), where + ".p"));
  }
  if (kind == "t_adic") {
    detail::only_keys(j, {"kind"}, where);
    return Valuation::t_adic(f);
  }
  if (kind == "composite") {
    detail::only_keys(j, {"kind", "inner", "outer"}, where);
    Valuation in = parse_valuation(detail::member(j, "inner", where), f, where + ".inner");
    return compose_valuations(in, parse_valuation(detail::member(j, "outer", where), in.residue_field(), where + ".outer"));
  }
  throw SchemaError(where + ".kind \"" + kind + "\" is not trivial, p_adic, t_adic or composite");
}

/// The registered check names, in registry order.
inline const std::vector<std::string>& check_registry() {
  static const std::vector<std::string> names = {
      "gp_axioms", "moufang", "wd_axioms", "opposition", "commutator_relations", "unique_decomposition",
      "descent_bridge", "property_star", "lemma_kappa", "lemma_switch", "cor_switch", "cor_prod",
      "lemma_prod", "lemma_rigid", "subring_recovery", "epi_surjective", "epi_incidence", "epi_fibres",
      "epi_find_lift", "image_moufang", "residue_anisotropic", "realize", "factor", "compat_qq",
      "compat_qp", "compat_hex", "compat_oct", "compat_exceptional", "strengthen_rank1"};
  return names;
}

inline bool is_compat_check(const std::string& name) { return name.rfind("compat_", 0) == 0 || name == "strengthen_rank1"; }

struct Scenario {
  Json raw;
  std::string digest;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  FieldPtr field;
  std::optional<Valuation> valuation;
  std::string geometry;
  std::optional<QuadraticSpace> form;
  std::size_t flag_rank = 0;
  Vector scaling;
  std::optional<Value> qq_level;
  std::size_t incidence_pairs = 1000;
  std::size_t fibre_count = 10;
  Json compat;
  std::vector<std::string> checks;
};

inline Scenario parse_scenario(const std::string& body) {
  Scenario s;
  try {
    s.raw = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  const Json& j = s.raw;
  detail::only_keys(j, {"description", "seed", "samples", "field", "valuation", "geometry", "epi", "compat", "checks"}, "scenario");
  s.digest = hex64(fnv1a(j.dump()));
  s.seed = static_cast<std::uint64_t>(detail::integer(detail::member(j, "seed", "scenario"), "seed"));
  s.samples = detail::count(detail::member(j, "samples", "scenario"), "samples");
  try {
    s.field = parse_field(detail::member(j, "field", "scenario"));
    s.valuation = j.contains("valuation") ? parse_valuation(j.at("valuation"), s.field) : Valuation::trivial(s.field);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(std::string("field or valuation: ") + e.what());
  }
  if (j.contains("geometry")) {
    const Json& g = j.at("geometry");
    detail::only_keys(g, {"class", "form", "rank"}, "geometry");
    s.geometry = detail::text(detail::member(g, "class", "geometry"), "geometry.class");
    if (s.geometry == "QQ") {
      const Json& f = detail::member(g, "form", "geometry");
      if (!f.is_array() || f.empty()) throw SchemaError("geometry.form must be a square matrix of strings");
      std::vector<std::vector<Element>> c;
      for (const auto& row : f) {
        if (!row.is_array() || row.size() != f.size()) throw SchemaError("geometry.form must be square");
        std::vector<Element> r;
        for (const auto& x : row) {
          try {
            r.push_back(parse_element(s.field, detail::text(x, "geometry.form")));
          } catch (const ParseError& e) {
            throw SchemaError(std::string("geometry.form: ") + e.what());
          }
        }
        c.push_back(std::move(r));
      }
      s.form = QuadraticSpace(s.field, std::move(c));
    } else if (s.geometry == "A") {
      s.flag_rank = detail::count(detail::member(g, "rank", "geometry"), "geometry.rank");
      if (s.flag_rank < 1) throw SchemaError("geometry.rank must be at least 1");
    } else if (s.geometry != "T") {
      throw SchemaError("geometry.class \"" + s.geometry + "\" is not T, QQ or A");
    }
  }
  if (j.contains("epi")) {
    const Json& e = j.at("epi");
    detail::only_keys(e, {"scaling", "level", "incidence_pairs", "fibre_count"}, "epi");
    if (e.contains("scaling")) {
      if (!e.at("scaling").is_array() || e.at("scaling").size() != 3) throw SchemaError("epi.scaling must hold three field elements");
      for (const auto& x : e.at("scaling")) s.scaling.push_back(parse_element(s.field, detail::text(x, "epi.scaling")));
    }
    if (e.contains("level")) s.qq_level = parse_value(detail::text(e.at("level"), "epi.level"), s.valuation->group(), s.valuation->rank());
    if (e.contains("incidence_pairs")) s.incidence_pairs = detail::count(e.at("incidence_pairs"), "epi.incidence_pairs");
    if (e.contains("fibre_count")) s.fibre_count = detail::count(e.at("fibre_count"), "epi.fibre_count");
  }
  s.compat = j.contains("compat") ? j.at("compat") : Json::object();
  detail::only_keys(s.compat, {"qq", "qp", "hex", "oct", "exceptional"}, "compat");
  const Json& checks = detail::member(j, "checks", "scenario");
  if (!checks.is_array()) throw SchemaError("checks must be an array of names");
  const auto& reg = check_registry();
  for (const auto& c : checks) {
    const std::string name = detail::text(c, "checks");
    if (std::find(reg.begin(), reg.end(), name) == reg.end()) throw SchemaError("unknown check \"" + name + "\"");
    s.checks.push_back(name);
  }
  return s;
}

/// Lazily built objects shared by the checks of one scenario run.
class ScenarioContext {
 public:
  explicit ScenarioContext(const Scenario& s) : s_(s) {}

  const Scenario& scenario() const { return s_; }
  const Valuation& valuation() const { return *s_.valuation; }

  ModelPtr model() {
    if (!model_) {
      if (s_.geometry == "T") model_ = std::make_shared<PlaneModel>(s_.field);
      else if (s_.geometry == "QQ") model_ = std::make_shared<QuadricModel>(*s_.form);
      else throw UnsupportedClass("this check needs geometry class T or QQ");
    }
    return model_;
  }
  const RootGroups& root_groups() {
    if (!rg_) {
      ModelPtr m = model();
      if (auto p = std::dynamic_pointer_cast<const PlaneModel>(m)) rg_ = RootGroups::plane(p, s_.scaling);
      else rg_ = RootGroups::quadric(std::dynamic_pointer_cast<const QuadricModel>(m));
    }
    return *rg_;
  }
  EpiDescriptor descriptor() { return {model(), valuation(), s_.qq_level}; }
  const Epimorphism& epimorphism() {
    if (!epi_) epi_ = realize(descriptor(), Rng(s_.seed).split(0xe91), s_.samples);
    return *epi_;
  }
  const FiniteModel& finite_model() {
    if (!s_.field->is_finite()) throw UnsupportedClass("exhaustive checks need a finite field, got " + s_.field->describe());
    if (!fm_) fm_.emplace(model());
    return *fm_;
  }
  const WeylTable& weyl() {
    if (s_.geometry != "A") throw UnsupportedClass("chamber checks need geometry class A");
    if (!s_.field->is_finite()) throw UnsupportedClass("chamber checks need a finite field");
    if (!wt_) wt_ = weyl_table(enumerate_flags(s_.field, s_.flag_rank));
    return *wt_;
  }
  const QuadraticSpace& form() const {
    if (!s_.form) throw UnsupportedClass("this check needs a quadratic form");
    return *s_.form;
  }
  Value compat_level(const char* section) const {
    const Valuation& v = valuation();
    if (s_.compat.contains(section) && s_.compat.at(section).contains("level"))
      return parse_value(detail::text(s_.compat.at(section).at("level"), std::string("compat.") + section + ".level"), v.group(), v.rank());
    return s_.qq_level.value_or(v.zero());
  }
  const Json& compat(const char* section) const {
    if (!s_.compat.contains(section)) throw SchemaError(std::string("check needs a compat.") + section + " section");
    return s_.compat.at(section);
  }

 private:
  const Scenario& s_;
  ModelPtr model_;
  std::optional<RootGroups> rg_;
  std::optional<Epimorphism> epi_;
  std::optional<FiniteModel> fm_;
  std::optional<WeylTable> wt_;
};

namespace detail {

/// Concatenate reports, prefixing condition names.
inline CheckReport merge(std::string name, std::vector<std::pair<std::string, CheckReport>> parts) {
  CheckReport r;
  r.name = std::move(name);
  for (auto& [prefix, p] : parts) {
    for (auto& c : p.conditions) {
      c.name = prefix + "." + c.name;
      r.conditions.push_back(std::move(c));
    }
    for (auto& f : p.facts) r.fact(prefix + "." + f.first, f.second);
  }
  return r;
}

inline Value parse_group_value(const Json& j, const Valuation& v, const std::string& where) {
  return parse_value(text(j, where), v.group(), v.rank());
}

inline std::vector<std::array<Value, 3>> value_triples(const Json& j, const Valuation& v, const std::string& where) {
  std::vector<std::array<Value, 3>> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw SchemaError(where + " must be a list of value triples");
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) throw SchemaError(where + " entries are triples");
    out.push_back({parse_group_value(t[0], v, where), parse_group_value(t[1], v, where), parse_group_value(t[2], v, where)});
  }
  return out;
}

inline FieldHom parse_sigma(const Json& section, const FieldPtr& f, const std::string& where) {
  const std::map<std::string, std::string> im = section.contains("sigma") ? images(section.at("sigma"), where + ".sigma") : std::map<std::string, std::string>{};
  return FieldHom::from_images(f, f, im);
}

}  // namespace detail

using CheckFn = std::function<CheckReport(ScenarioContext&, Rng)>;

/// Implementation of every registered check.
inline const std::map<std::string, CheckFn>& check_table() {
  static const std::map<std::string, CheckFn> table = [] {
    std::map<std::string, CheckFn> t;
    t["gp_axioms"] = [](ScenarioContext& c, Rng) {
      const auto& fm = c.finite_model();
      return detail::merge("gp_axioms", {{"primal", verify_gp_axioms(fm.graph, fm.model->gonality())},
                                         {"dual", verify_gp_axioms(fm.graph.dual(), fm.model->gonality())}});
    };
    t["moufang"] = [](ScenarioContext& c, Rng) {
      auto r = verify_moufang(c.finite_model(), c.root_groups().datum());
      r.name = "moufang";
      return r;
    };
    t["wd_axioms"] = [](ScenarioContext& c, Rng) { return verify_wd_axioms(c.weyl()); };
    t["opposition"] = [](ScenarioContext& c, Rng) { return verify_opposition(c.weyl()); };
    t["commutator_relations"] = [](ScenarioContext& c, Rng rng) { return commutator_relations(c.root_groups(), c.scenario().samples, rng); };
    t["unique_decomposition"] = [](ScenarioContext& c, Rng rng) { return unique_decomposition(c.root_groups(), c.scenario().samples, rng); };
    t["descent_bridge"] = [](ScenarioContext& c, Rng rng) {
      const auto& rg = c.root_groups();
      const auto& e = c.epimorphism();
      return detail::merge("descent_bridge", {{"U0", derive_vw(e, rg, 0, c.scenario().samples, rng.split(0))},
                                              {"U" + std::to_string(rg.n()), derive_vw(e, rg, rg.n(), c.scenario().samples, rng.split(1))}});
    };
    t["property_star"] = [](ScenarioContext& c, Rng rng) {
      const auto& rg = c.root_groups();
      const auto& e = c.epimorphism();
      CheckReport r;
      r.name = "property_star";
      auto& star = r.add("descending_elations");
      const std::size_t rounds = 10, budget = std::max<std::size_t>(1, c.scenario().samples / rounds);
      for (std::size_t k = 0; k < rounds; ++k) {
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * rg.n())));
        Vector a = e.is_identity() ? rg.sample_nonzero_param(i, rng, 5) : sample_in_class(rg, e.valuation(), i, kAllClasses[1 + rng.below(2)], rng);
        const GeoElement x = random_element(e, rng.coin() ? Kind::point : Kind::line, rng);
        auto sub = property_star(e, rg.elation(i, a), x, budget, rng.split(k));
        star.samples += sub.conditions.front().samples;
        if (!sub.passed()) r.fail(star, param_text(rg, i, a) + " at " + x.str() + ": " + sub.conditions.front().witness);
      }
      return r;
    };
    t["lemma_kappa"] = [](ScenarioContext& c, Rng rng) { return lemma_kappa(c.root_groups(), c.valuation(), c.scenario().samples, rng); };
    t["lemma_switch"] = [](ScenarioContext& c, Rng rng) { return lemma_switch(c.root_groups(), c.valuation(), c.scenario().samples, rng); };
    t["cor_switch"] = [](ScenarioContext& c, Rng rng) { return cor_switch(c.root_groups(), c.valuation(), c.scenario().samples, rng); };
    t["cor_prod"] = [](ScenarioContext& c, Rng rng) { return cor_prod(c.root_groups(), c.valuation(), c.scenario().samples, rng); };
    t["lemma_prod"] = [](ScenarioContext& c, Rng rng) { return lemma_prod(c.epimorphism(), c.root_groups(), c.scenario().samples, rng); };
    t["lemma_rigid"] = [](ScenarioContext& c, Rng rng) { return lemma_rigid(c.epimorphism(), c.root_groups(), c.scenario().samples, rng); };
    t["subring_recovery"] = [](ScenarioContext& c, Rng rng) {
      if (c.root_groups().eta_class() != EtaClass::T) throw UnsupportedClass("subring recovery uses the projective line of T");
      return subring_recovery(c.root_groups(), c.valuation(), c.scenario().samples, rng);
    };
    t["epi_surjective"] = [](ScenarioContext& c, Rng rng) { return epi_surjective(c.epimorphism(), rng); };
    t["epi_incidence"] = [](ScenarioContext& c, Rng rng) { return epi_incidence(c.epimorphism(), c.scenario().incidence_pairs, rng); };
    t["epi_fibres"] = [](ScenarioContext& c, Rng rng) { return epi_fibres(c.epimorphism(), c.scenario().fibre_count, rng); };
    t["epi_find_lift"] = [](ScenarioContext& c, Rng rng) { return epi_find_lift(c.epimorphism(), c.scenario().samples, rng); };
    t["image_moufang"] = [](ScenarioContext& c, Rng) { return image_moufang(c.epimorphism(), c.root_groups()); };
    t["residue_anisotropic"] = [](ScenarioContext& c, Rng) { return residue_anisotropic(c.form(), c.valuation()); };
    t["realize"] = [](ScenarioContext& c, Rng rng) {
      CheckReport r;
      r.name = "realize";
      const Valuation& v = c.valuation();
      std::optional<bool> compat_ok;
      if (c.scenario().geometry == "QQ" && !v.is_trivial())
        compat_ok = check_qq(c.form(), v, c.scenario().qq_level.value_or(v.zero()), rng.split(1), c.scenario().samples).passed();
      auto& done = r.add("realized", true, 1);
      std::optional<Epimorphism> e;
      try {
        e = realize(c.descriptor(), rng.split(2), c.scenario().samples);
      } catch (const CompatibilityFailure& f) {
        r.fail(done, f.what());
      }
      if (compat_ok) {
        auto& agree = r.add("refusal_matches_compat", e.has_value() == *compat_ok, 1);
        if (!agree.passed) agree.witness = std::string("check_qq ") + (*compat_ok ? "passes" : "fails") + " but realize " + (e ? "succeeds" : "refuses");
        r.fact("compat_qq", *compat_ok ? "pass" : "fail");
      }
      if (!e) return r;
      r.fact("provenance", e->provenance());
      r.fact("target", e->target()->describe());
      if (e->is_identity()) {
        auto& id = r.add("identity_exact");
        for (std::size_t t = 0; t < c.scenario().samples; ++t) {
          const GeoElement x = random_element(*e, t % 2 ? Kind::line : Kind::point, rng);
          ++id.samples;
          if (!((*e)(x) == x)) r.fail(id, x.str() + " moves to " + (*e)(x).str());
        }
      }
      return r;
    };
    t["factor"] = [](ScenarioContext& c, Rng rng) {
      const Valuation& v = c.valuation();
      ModelPtr m = c.model();
      const Epimorphism& two_step = c.epimorphism();
      const Epimorphism direct = Epimorphism::direct(m, v);
      if (v.rank() < 2) {
        auto r = factor_check(two_step, direct, c.scenario().samples, rng);
        r.fact("connecting_map", v.is_trivial() ? "identity" : "isomorphism");
        return r;
      }
      const Epimorphism fine = Epimorphism::direct(m, coarsen(v).first);
      return detail::merge("factor", {{"direct", factor_check(fine, direct, c.scenario().samples, rng.split(0))},
                                      {"two_step", factor_check(fine, two_step, c.scenario().samples, rng.split(1))}});
    };
    t["compat_qq"] = [](ScenarioContext& c, Rng rng) { return check_qq(c.form(), c.valuation(), c.compat_level("qq"), rng, c.scenario().samples); };
    t["compat_qp"] = [](ScenarioContext& c, Rng rng) {
      const Json& sec = c.compat("qp");
      const FieldHom sigma = detail::parse_sigma(sec, c.scenario().field, "compat.qp");
      std::optional<QPForm> form;
      if (c.scenario().form) {
        // With sigma trivial the pseudo-quadratic data are (u, q(u)) with f the polar form.
        const QuadraticSpace q = c.form();
        const Valuation v = c.valuation();
        form = QPForm{[q, v](Rng& g) {
                        Vector u(q.dim());
                        for (auto& x : u) x = v.is_trivial() ? sample_element(q.field(), g, 5) : sample_valued(v, g, 4, 2);
                        return std::make_pair(u, q.q(u));
                      },
                      [q](const Vector& a, const Vector& b) { return q.f(a, b); }};
      }
      return check_qp(sigma, c.valuation(), c.compat_level("qp"), rng, c.scenario().samples, form);
    };
    t["compat_hex"] = [](ScenarioContext& c, Rng rng) {
      const Json& sec = c.compat("hex");
      const std::string norm = detail::text(detail::member(sec, "norm", "compat.hex"), "compat.hex.norm");
      if (norm != "cube") throw SchemaError("compat.hex.norm supports \"cube\": N(x) = x^3, T(u,v) = 3uv");
      const FieldPtr f = c.scenario().field;
      const Element three = Element::from_int(f, 3);
      return check_hex([](const Element& x) { return x * x * x; }, [three](const Element& u, const Element& w) { return three * u * w; },
                       c.valuation(), c.compat_level("hex"), rng, c.scenario().samples);
    };
    t["compat_oct"] = [](ScenarioContext& c, Rng rng) {
      return check_oct(detail::parse_sigma(c.compat("oct"), c.scenario().field, "compat.oct"), c.valuation(), rng, c.scenario().samples);
    };
    t["compat_exceptional"] = [](ScenarioContext& c, Rng) {
      const Json& sec = c.compat("exceptional");
      const Valuation& v = c.valuation();
      detail::only_keys(sec, {"k", "l", "u1", "u4", "c13", "c24", "mu"}, "compat.exceptional");
      ExceptionalData d;
      auto get = [&](const char* key) { return sec.contains(key) ? sec.at(key) : Json(); };
      d.u1 = detail::value_triples(get("u1"), v, "compat.exceptional.u1");
      d.u4 = detail::value_triples(get("u4"), v, "compat.exceptional.u4");
      d.c13 = detail::value_triples(get("c13"), v, "compat.exceptional.c13");
      d.c24 = detail::value_triples(get("c24"), v, "compat.exceptional.c24");
      if (sec.contains("mu"))
        for (const auto& m : sec.at("mu")) {
          ExceptionalData::Mu s;
          s.identity = detail::text(detail::member(m, "identity", "compat.exceptional.mu"), "compat.exceptional.mu.identity");
          for (const auto& a : detail::member(m, "args", "compat.exceptional.mu")) s.args.push_back(detail::parse_group_value(a, v, "compat.exceptional.mu.args"));
          s.image = detail::parse_group_value(detail::member(m, "image", "compat.exceptional.mu"), v, "compat.exceptional.mu.image");
          d.mu.push_back(std::move(s));
        }
      return check_exceptional(d, detail::parse_group_value(detail::member(sec, "k", "compat.exceptional"), v, "compat.exceptional.k"),
                               detail::parse_group_value(detail::member(sec, "l", "compat.exceptional"), v, "compat.exceptional.l"));
    };
    t["strengthen_rank1"] = [](ScenarioContext& c, Rng rng) { return strengthen_rank1(c.form(), c.valuation(), rng, c.scenario().samples); };
    return t;
  }();
  return table;
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  /// Restrict to checks accepted by this filter.
  std::function<bool(const std::string&)> filter;
  /// Checks to run even when the scenario does not list them.
  std::vector<std::string> extra;
};

struct RunResult {
  int exit_code = 0;
  Json report;
  bool passed() const { return exit_code == 0; }
};

inline Json report_json(const CheckReport& r) {
  Json j = Json::object();
  j["name"] = r.name;
  j["status"] = r.passed() ? "pass" : "fail";
  std::size_t total = 0;
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    total += c.samples;
    Json cj = {{"name", c.name}, {"status", c.passed ? "pass" : "fail"}, {"samples", std::to_string(c.samples)}};
    if (!c.passed) cj["witness"] = c.witness;
    conds.push_back(std::move(cj));
  }
  j["samples"] = std::to_string(total);
  for (const auto& c : r.conditions)
    if (!c.passed) {
      j["witness"] = c.witness;
      break;
    }
  j["conditions"] = std::move(conds);
  Json facts = Json::object();
  for (const auto& [k, v] : r.facts) facts[k] = v;
  j["facts"] = std::move(facts);
  return j;
}

/// Run the checks of a parsed scenario in declaration order; every check runs.
inline RunResult run_scenario(Scenario s, const std::string& subcommand, const RunOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  if (opt.seed) s.seed = *opt.seed;
  if (opt.samples) s.samples = *opt.samples;
  std::vector<std::string> names;
  for (const auto& n : s.checks)
    if (!opt.filter || opt.filter(n)) names.push_back(n);
  for (const auto& n : opt.extra)
    if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  ScenarioContext ctx(s);
  Json body = Json::object();
  body["tool"] = "moufang";
  body["version"] = kToolVersion;
  body["subcommand"] = subcommand;
  body["scenario_digest"] = s.digest;
  body["seed"] = std::to_string(s.seed);
  body["samples"] = std::to_string(s.samples);
  body["field"] = s.field->describe();
  body["valuation"] = ctx.valuation().describe();
  if (s.geometry == "T" || s.geometry == "QQ") {
    const auto& rg = ctx.root_groups();
    body["geometry"] = rg.model().describe();
    body["hatrack"] = rg.describe();
    Json levels = Json::object();
    for (int i = 0; i < 2 * rg.n(); ++i) levels["U" + std::to_string(i)] = rg.level(i, ctx.valuation()).str();
    body["levels"] = std::move(levels);
  } else if (s.geometry == "A") {
    body["geometry"] = "A_" + std::to_string(s.flag_rank) + "(" + s.field->describe() + ")";
  }
  if (s.qq_level) body["qq_level"] = s.qq_level->str();
  Json checks = Json::array();
  Json timing = Json::object();
  bool all = true;
  const Rng root(s.seed);
  for (const auto& name : names) {
    const auto t0 = clock::now();
    Json j;
    try {
      CheckReport r = check_table().at(name)(ctx, root.split(fnv1a(name)));
      r.name = name;
      j = report_json(r);
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      j = Json::object();
      j["name"] = name;
      j["status"] = "error";
      j["samples"] = "0";
      j["witness"] = e.what();
      j["conditions"] = Json::array();
      j["facts"] = Json::object();
    }
    all = all && j["status"] == "pass";
    checks.push_back(std::move(j));
    timing[name + "_us"] = std::to_string(std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - t0).count());
  }
  body["checks"] = std::move(checks);
  body["status"] = all ? "pass" : "fail";
  timing["total_us"] = std::to_string(std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - start).count());
  RunResult out;
  out.exit_code = all ? 0 : 1;
  out.report = Json::object();
  out.report["body"] = std::move(body);
  out.report["timing"] = std::move(timing);
  return out;
}

}  // namespace moufang
