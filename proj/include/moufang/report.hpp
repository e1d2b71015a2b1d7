#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace moufang {

/// One named condition inside a check.
struct Condition {
  std::string name;
  bool passed = true;
  std::size_t samples = 0;
  std::string witness;
};

/// Outcome of a verifier: conditions plus auditable facts, all as text.
/// Conditions live in a deque so references returned by add() stay valid.
struct CheckReport {
  std::string name;
  std::deque<Condition> conditions;
  std::vector<std::pair<std::string, std::string>> facts;

  bool passed() const {
    for (const auto& c : conditions)
      if (!c.passed) return false;
    return true;
  }
  Condition& add(std::string cond, bool ok = true, std::size_t samples = 0, std::string witness = {}) {
    conditions.push_back({std::move(cond), ok, samples, std::move(witness)});
    return conditions.back();
  }
  void fact(std::string key, std::string value) { facts.emplace_back(std::move(key), std::move(value)); }
  const Condition* find(const std::string& cond) const {
    for (const auto& c : conditions)
      if (c.name == cond) return &c;
    return nullptr;
  }
  std::string fact_value(const std::string& key) const {
    for (const auto& [k, v] : facts)
      if (k == key) return v;
    return {};
  }
  /// Record a failure on cond unless one is already recorded.
  void fail(Condition& c, std::string witness) {
    if (c.passed) {
      c.passed = false;
      c.witness = std::move(witness);
    }
  }
};

}  // namespace moufang
