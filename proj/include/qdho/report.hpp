#pragma once

// Lightweight verification reports: named checks with a measured deviation
// against a tolerance, serializable to JSON for the CLI.

#include <json.hpp>
#include <string>
#include <vector>

#include "qdho/errors.hpp"

namespace qdho {

struct CheckEntry {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct Report {
  std::string title;
  std::vector<CheckEntry> entries;

  explicit Report(std::string t = "") : title(std::move(t)) {}

  void add(const std::string& name, double deviation, double tolerance,
           const std::string& note = "") {
    entries.push_back(
        {name, deviation, tolerance, deviation <= tolerance, note});
  }

  void add_flag(const std::string& name, bool ok, const std::string& note = "") {
    entries.push_back({name, ok ? 0.0 : 1.0, 0.5, ok, note});
  }

  bool pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }

  double max_deviation() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.deviation);
    return m;
  }

  /// Throws InconsistentTable naming every failed entry.
  void throw_if_failed() const {
    if (pass()) return;
    std::string msg = title + ": failed checks:";
    for (const auto& e : entries)
      if (!e.pass)
        msg += " [" + e.name + " dev=" + std::to_string(e.deviation) + "]";
    throw InconsistentTable(msg);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["title"] = title;
    j["pass"] = pass();
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
      j["entries"].push_back({{"name", e.name},
                              {"deviation", e.deviation},
                              {"tolerance", e.tolerance},
                              {"pass", e.pass},
                              {"note", e.note}});
    }
    return j;
  }

  std::string summary() const {
    std::string s = title + ": " + (pass() ? "PASS" : "FAIL");
    int failed = 0;
    for (const auto& e : entries)
      if (!e.pass) ++failed;
    s += " (" + std::to_string(entries.size()) + " checks";
    if (failed > 0) s += ", " + std::to_string(failed) + " failed";
    s += ")";
    return s;
  }
};

}  // namespace qdho
