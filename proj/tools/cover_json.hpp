#pragma once

// JSON form of the cover file, used by `gen --format json`. Readers accept it
// wherever a cover file is expected.

#include <optional>
#include <string>
#include <vector>

#include "bracketing/geometry.hpp"
#include "json.hpp"

namespace bracketing::cli {

inline nlohmann::json to_json(const Cover& c) {
  nlohmann::json j;
  j["method"] = to_string(c.method());
  j["delta"] = c.delta();
  j["dim"] = c.dim();
  j["p"] = c.p() ? nlohmann::json(*c.p()) : nlohmann::json(nullptr);
  j["count"] = c.size();
  auto& brackets = j["brackets"] = nlohmann::json::array();
  if (c.is_anchored()) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::vector<double> row(c.lo(i).begin(), c.lo(i).end());
      row.insert(row.end(), c.hi(i).begin(), c.hi(i).end());
      brackets.push_back(std::move(row));
    }
    return j;
  }
  const auto corners = [](const Box& b) {
    std::vector<double> v(b.lower().coords().begin(), b.lower().coords().end());
    v.insert(v.end(), b.upper().coords().begin(), b.upper().coords().end());
    return v;
  };
  for (const auto& b : c.unanchored_brackets()) {
    nlohmann::json e;
    e["inner"] = b.inner() ? nlohmann::json(corners(*b.inner())) : nlohmann::json(nullptr);
    e["outer"] = corners(b.outer());
    brackets.push_back(std::move(e));
  }
  return j;
}

inline Cover from_json(const nlohmann::json& j) {
  CoverInfo info;
  const auto method = method_from_string(j.at("method").get<std::string>());
  if (!method) throw std::invalid_argument("unknown method in JSON cover");
  info.method = *method;
  info.delta = j.at("delta").get<double>();
  info.dim = j.at("dim").get<int>();
  if (!j.at("p").is_null()) info.p = j.at("p").get<int>();
  const auto& brackets = j.at("brackets");
  if (j.at("count").get<std::size_t>() != brackets.size())
    throw std::invalid_argument("JSON count does not match bracket list");
  const auto box = [](const std::vector<double>& v) {
    const auto half = static_cast<std::ptrdiff_t>(v.size() / 2);
    return Box(Point(std::vector<double>(v.begin(), v.begin() + half)),
               Point(std::vector<double>(v.begin() + half, v.end())));
  };
  if (info.method != Method::unanchored) {
    std::vector<double> coords;
    for (const auto& b : brackets) {
      const auto row = b.get<std::vector<double>>();
      if (row.size() != 2 * static_cast<std::size_t>(info.dim))
        throw std::invalid_argument("JSON bracket has the wrong number of coordinates");
      coords.insert(coords.end(), row.begin(), row.end());
    }
    return Cover::anchored(info, std::move(coords));
  }
  std::vector<UnanchoredBracket> out;
  for (const auto& b : brackets) {
    std::optional<Box> inner;
    if (!b.at("inner").is_null()) inner = box(b.at("inner").get<std::vector<double>>());
    out.emplace_back(std::move(inner), box(b.at("outer").get<std::vector<double>>()));
  }
  return Cover::unanchored(info, std::move(out));
}

}  // namespace bracketing::cli
