#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace iserre {

using Json = nlohmann::ordered_json;

/// Outcome of one checked claim. The witness is the serialized nonzero
/// difference (or a diagnostic) when the claim fails.
struct Report {
  std::string claim;
  Json args = Json::object();
  bool pass = true;
  std::optional<std::string> witness;
  double millis = 0;

  static Report ok(std::string claim, Json args) { return {std::move(claim), std::move(args), true, std::nullopt, 0}; }
  static Report fail(std::string claim, Json args, std::string witness) {
    return {std::move(claim), std::move(args), false, std::move(witness), 0};
  }

  Json to_json(bool timings) const {
    Json j;
    j["claim"] = claim;
    j["args"] = args;
    j["pass"] = pass;
    if (witness) j["witness"] = *witness;
    if (timings) j["millis"] = millis;
    return j;
  }
};

/// Ordered collection of reports.
struct Suite {
  std::vector<Report> rows;

  void add(Report r) { rows.push_back(std::move(r)); }
  void append(const Suite& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.pass ? 0 : 1;
    return n;
  }
  bool pass() const { return failures() == 0; }
  const Report* first_failure() const {
    for (const auto& r : rows)
      if (!r.pass) return &r;
    return nullptr;
  }
};

}  // namespace iserre
