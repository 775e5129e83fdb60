#pragma once

#include "errors.hpp"
#include "machine.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

namespace instant {

/// Machine file problem, carrying the offending line or field path.
class MachineFileError : public SpecViolation {
public:
  using SpecViolation::SpecViolation;
};

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

inline const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw MachineFileError(std::string("missing field '") + key + "'");
  return doc.at(key);
}

inline std::string string_at(const nlohmann::json& v, const std::string& path) {
  if (!v.is_string()) throw MachineFileError(path + ": expected a string");
  return v.get<std::string>();
}

inline char symbol_at(const nlohmann::json& v, const std::string& path) {
  const std::string s = string_at(v, path);
  if (s.size() != 1) throw MachineFileError(path + ": symbols are single characters, got '" + s + "'");
  return s[0];
}

inline Move move_at(const nlohmann::json& v, const std::string& path) {
  const std::string s = string_at(v, path);
  if (s == "L") return Move::left;
  if (s == "R") return Move::right;
  if (s == "S") return Move::stay;
  throw MachineFileError(path + ": head move must be L, R or S, got '" + s + "'");
}

} // namespace detail

/// Builds a machine from its JSON document (fields `name`, `states`,
/// `alphabet`, `blank`, `transitions`, `initial`, `result_states`).
inline TMSpec machine_from_json(const nlohmann::json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw MachineFileError("machine document must be a JSON object");

  std::string name = doc.contains("name") ? string_at(doc["name"], "name") : "machine";

  const auto& states_json = field(doc, "states");
  if (!states_json.is_array()) throw MachineFileError("states: expected an array");
  std::vector<std::string> states;
  for (std::size_t i = 0; i < states_json.size(); ++i)
    states.push_back(string_at(states_json[i], "states[" + std::to_string(i) + "]"));

  const auto& alphabet_json = field(doc, "alphabet");
  if (!alphabet_json.is_array()) throw MachineFileError("alphabet: expected an array");
  std::string alphabet;
  for (std::size_t i = 0; i < alphabet_json.size(); ++i)
    alphabet.push_back(symbol_at(alphabet_json[i], "alphabet[" + std::to_string(i) + "]"));

  const char blank = symbol_at(field(doc, "blank"), "blank");

  const auto& rules_json = field(doc, "transitions");
  if (!rules_json.is_array()) throw MachineFileError("transitions: expected an array");
  std::vector<TMSpec::Rule> rules;
  for (std::size_t i = 0; i < rules_json.size(); ++i) {
    const std::string path = "transitions[" + std::to_string(i) + "]";
    const auto& r = rules_json[i];
    if (!r.is_array() || r.size() != 5)
      throw MachineFileError(path + ": expected [state, read, next, write, move]");
    rules.push_back({string_at(r[0], path + "[0]"), symbol_at(r[1], path + "[1]"),
                     string_at(r[2], path + "[2]"), symbol_at(r[3], path + "[3]"),
                     move_at(r[4], path + "[4]")});
  }

  const std::string initial = string_at(field(doc, "initial"), "initial");

  const auto& result_json = field(doc, "result_states");
  if (!result_json.is_array()) throw MachineFileError("result_states: expected an array");
  std::vector<std::string> result_states;
  for (std::size_t i = 0; i < result_json.size(); ++i)
    result_states.push_back(string_at(result_json[i], "result_states[" + std::to_string(i) + "]"));

  try {
    return TMSpec(std::move(name), std::move(states), std::move(alphabet), blank, rules, initial,
                  result_states);
  } catch (const MachineFileError&) {
    throw;
  } catch (const SpecViolation& e) {
    throw MachineFileError(e.what());
  }
}

inline TMSpec machine_from_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MachineFileError("line " + std::to_string(detail::line_of(text, e.byte)) + ": " +
                           e.what());
  }
  return machine_from_json(doc);
}

inline TMSpec load_machine(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MachineFileError("cannot open machine file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return machine_from_string(buffer.str());
  } catch (const MachineFileError& e) {
    throw MachineFileError(path + ": " + e.what());
  }
}

inline nlohmann::json machine_to_json(const TMSpec& spec) {
  nlohmann::json doc;
  doc["name"] = spec.name();
  doc["states"] = spec.states();
  nlohmann::json alphabet = nlohmann::json::array();
  for (char c : spec.alphabet()) alphabet.push_back(std::string(1, c));
  doc["alphabet"] = alphabet;
  doc["blank"] = std::string(1, spec.blank());
  nlohmann::json rules = nlohmann::json::array();
  nlohmann::json results = nlohmann::json::array();
  for (StateId s = 0; s < spec.states().size(); ++s) {
    if (spec.is_result_state(s)) results.push_back(spec.states()[s]);
    for (char a : spec.alphabet()) {
      const Transition& t = spec.transition(s, a);
      rules.push_back({spec.states()[s], std::string(1, a), spec.states()[t.next],
                       std::string(1, t.write), std::string(1, move_char(t.move))});
    }
  }
  doc["transitions"] = rules;
  doc["initial"] = spec.states()[spec.initial()];
  doc["result_states"] = results;
  return doc;
}

} // namespace instant
