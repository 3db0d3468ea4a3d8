#pragma once

#include <string>

#include "json.hpp"
#include "ohba/instance.hpp"

// JSON interchange formats.
//
// Instance file: {"parts": [sizes...], "lists": [[colours...], ...]} with
// one inner array per vertex in global index order. Colour identifiers are
// non-negative integers and are preserved verbatim.
//
// Colouring file: a single array with one entry per vertex, each a
// non-negative integer or null (uncoloured).

namespace ohba {

using Json = nlohmann::ordered_json;

inline Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  if (!j.contains("parts") || !j["parts"].is_array()) {
    throw ParseError("instance needs a \"parts\" array");
  }
  if (!j.contains("lists") || !j["lists"].is_array()) {
    throw ParseError("instance needs a \"lists\" array");
  }
  std::vector<int> parts;
  for (const auto& p : j["parts"]) {
    if (!p.is_number_integer() || p.get<long long>() <= 0) {
      throw StructuralError("part sizes must be positive integers");
    }
    parts.push_back(p.get<int>());
  }
  std::vector<ColourSet> lists;
  for (const auto& l : j["lists"]) {
    if (!l.is_array()) throw ParseError("each list must be an array");
    ColourSet cs;
    for (const auto& c : l) {
      if (!c.is_number_integer() || c.get<long long>() < 0) {
        throw StructuralError("colours must be non-negative integers");
      }
      cs.push_back(c.get<Colour>());
    }
    ColourSet sorted = make_colour_set(cs);
    if (sorted.size() != cs.size()) {
      throw StructuralError("duplicate colour in a list");
    }
    lists.push_back(std::move(sorted));
  }
  return make_instance(std::move(parts), std::move(lists));
}

inline Instance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("instance JSON malformed at byte " +
                     std::to_string(e.byte) + ": " + e.what());
  }
  return instance_from_json(j);
}

inline Json instance_to_json(const Instance& inst) {
  Json j;
  j["parts"] = inst.structure.part_sizes();
  Json lists = Json::array();
  for (int v = 0; v < inst.n(); ++v) lists.push_back(inst.list(v));
  j["lists"] = std::move(lists);
  return j;
}

inline std::string serialize_instance(const Instance& inst) {
  return instance_to_json(inst).dump();
}

inline Json colouring_to_json(const Colouring& col) {
  Json j = Json::array();
  for (const auto& c : col.colours) {
    if (c) {
      j.push_back(*c);
    } else {
      j.push_back(nullptr);
    }
  }
  return j;
}

inline Colouring colouring_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("colouring must be a JSON array");
  Colouring col;
  for (const auto& e : j) {
    if (e.is_null()) {
      col.colours.emplace_back(std::nullopt);
    } else if (e.is_number_integer() && e.get<long long>() >= 0) {
      col.colours.emplace_back(e.get<Colour>());
    } else {
      throw StructuralError("colouring entries must be null or non-negative");
    }
  }
  return col;
}

inline Colouring parse_colouring(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("colouring JSON malformed at byte " +
                     std::to_string(e.byte) + ": " + e.what());
  }
  return colouring_from_json(j);
}

inline std::string serialize_colouring(const Colouring& col) {
  return colouring_to_json(col).dump();
}

}  // namespace ohba
