#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace instant {

enum class Move : std::int8_t { left = -1, stay = 0, right = 1 };

using StateId = std::uint32_t;

struct Transition {
  StateId next = 0;
  char write = 0;
  Move move = Move::stay;
};

/// Decoded result register r = (z, v): z = 0 (halted) iff the current state
/// is a result state, v is the non-blank tape content read left to right.
struct Result {
  bool halted = false;
  std::string value;

  friend bool operator==(const Result&, const Result&) = default;
  friend auto operator<=>(const Result&, const Result&) = default;
};

/// Instantaneous description. The tape map never stores blank cells, so two
/// configurations are equal exactly when they describe the same machine state.
struct Configuration {
  std::map<std::int64_t, char> tape;
  std::int64_t head = 0;
  StateId state = 0;

  char read(char blank) const {
    auto it = tape.find(head);
    return it == tape.end() ? blank : it->second;
  }

  void write(char symbol, char blank) {
    if (symbol == blank)
      tape.erase(head);
    else
      tape[head] = symbol;
  }

  std::string content() const {
    std::string out;
    out.reserve(tape.size());
    for (const auto& [cell, symbol] : tape) out.push_back(symbol);
    return out;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// A deterministic single-tape Turing machine with a total transition table.
class TMSpec {
public:
  struct Rule {
    std::string state;
    char read;
    std::string next;
    char write;
    Move move;
  };

  TMSpec(std::string name, std::vector<std::string> states, std::string alphabet, char blank,
         const std::vector<Rule>& rules, const std::string& initial,
         const std::vector<std::string>& result_states)
      : name_(std::move(name)), states_(std::move(states)), alphabet_(std::move(alphabet)),
        blank_(blank) {
    if (states_.empty()) throw SpecViolation("machine has no states");
    for (std::size_t i = 0; i < states_.size(); ++i)
      for (std::size_t j = i + 1; j < states_.size(); ++j)
        if (states_[i] == states_[j]) throw SpecViolation("duplicate state '" + states_[i] + "'");
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
      if (alphabet_.find(alphabet_[i], i + 1) != std::string::npos)
        throw SpecViolation(std::string("duplicate symbol '") + alphabet_[i] + "'");
    if (alphabet_.find(blank_) == std::string::npos)
      throw SpecViolation(std::string("blank '") + blank_ + "' is not in the alphabet");

    initial_ = state_index(initial);
    is_result_.assign(states_.size(), false);
    for (const auto& s : result_states) is_result_[state_index(s)] = true;

    table_.assign(states_.size() * alphabet_.size(), std::nullopt);
    for (const auto& rule : rules) {
      const StateId from = state_index(rule.state);
      const std::size_t sym = symbol_index(rule.read);
      auto& slot = table_[from * alphabet_.size() + sym];
      if (slot)
        throw SpecViolation("duplicate transition for (" + rule.state + ", " +
                            std::string(1, rule.read) + ")");
      symbol_index(rule.write);
      slot = Transition{state_index(rule.next), rule.write, rule.move};
    }
    for (StateId s = 0; s < states_.size(); ++s)
      for (std::size_t a = 0; a < alphabet_.size(); ++a)
        if (!table_[s * alphabet_.size() + a])
          throw SpecViolation("transition table is not total: missing (" + states_[s] + ", " +
                              std::string(1, alphabet_[a]) + ")");
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::string& alphabet() const noexcept { return alphabet_; }
  char blank() const noexcept { return blank_; }
  StateId initial() const noexcept { return initial_; }

  bool is_result_state(StateId s) const {
    check_state(s);
    return is_result_[s];
  }

  StateId state_index(std::string_view name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) throw SpecViolation("unknown state '" + std::string(name) + "'");
    return static_cast<StateId>(it - states_.begin());
  }

  std::size_t symbol_index(char symbol) const {
    auto pos = alphabet_.find(symbol);
    if (pos == std::string::npos)
      throw SpecViolation(std::string("unknown symbol '") + symbol + "'");
    return pos;
  }

  const Transition& transition(StateId state, char symbol) const {
    check_state(state);
    return *table_[state * alphabet_.size() + symbol_index(symbol)];
  }

  /// Input word written at cells 0.., head on cell 0, initial state.
  Configuration start(std::string_view word) const {
    Configuration c;
    c.state = initial_;
    for (std::size_t i = 0; i < word.size(); ++i) {
      symbol_index(word[i]);
      if (word[i] != blank_) c.tape[static_cast<std::int64_t>(i)] = word[i];
    }
    return c;
  }

  Result decode(const Configuration& c) const { return {is_result_state(c.state), c.content()}; }

private:
  void check_state(StateId s) const {
    if (s >= states_.size()) throw SpecViolation("unknown state id " + std::to_string(s));
  }

  std::string name_;
  std::vector<std::string> states_;
  std::string alphabet_;
  char blank_;
  StateId initial_ = 0;
  std::vector<bool> is_result_;
  std::vector<std::optional<Transition>> table_;
};

/// Successor configuration under one application of the transition map.
inline Configuration step(const TMSpec& spec, const Configuration& config) {
  const Transition& t = spec.transition(config.state, config.read(spec.blank()));
  Configuration next = config;
  next.write(t.write, spec.blank());
  next.head += static_cast<std::int64_t>(t.move);
  next.state = t.next;
  return next;
}

/// Execution history. `steps` holds the configurations c_0 .. c_s, so a trace
/// of s transitions has s + 1 entries.
struct Trace {
  std::vector<Configuration> steps;
  bool halted = false;
  bool budget_exceeded = false;
  std::optional<Result> result;

  std::size_t transitions() const noexcept { return steps.empty() ? 0 : steps.size() - 1; }
};

/// Runs until a result state is entered or `max_steps` transitions were made.
/// Running out of budget is reported in the trace, never thrown.
inline Trace run(const TMSpec& spec, const Configuration& input, std::size_t max_steps) {
  if (max_steps < 1) throw PreconditionError("run: max_steps must be >= 1");
  spec.transition(input.state, input.read(spec.blank()));

  Trace trace;
  trace.steps.push_back(input);
  while (!spec.is_result_state(trace.steps.back().state)) {
    if (trace.transitions() == max_steps) {
      trace.budget_exceeded = true;
      return trace;
    }
    trace.steps.push_back(step(spec, trace.steps.back()));
  }
  trace.halted = true;
  trace.result = spec.decode(trace.steps.back());
  return trace;
}

inline char move_char(Move m) {
  switch (m) {
  case Move::left: return 'L';
  case Move::right: return 'R';
  default: return 'S';
  }
}

} // namespace instant
