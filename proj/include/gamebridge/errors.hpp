#pragma once

#include <stdexcept>
#include <string>

namespace gb {

// Every failure the library reports deliberately is an `error`; plain
// std::logic_error etc. only escape on programming mistakes.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- net level ---------------------------------------------------------------
struct UnknownTransition : error {
  explicit UnknownTransition(const std::string& t) : error("unknown transition: " + t) {}
};
struct NotEnabled : error {
  explicit NotEnabled(const std::string& t) : error("transition not enabled: " + t) {}
};
struct BoundExceeded : error {
  explicit BoundExceeded(const std::string& what) : error("bound exceeded: " + what) {}
};

// -- traces / automata -------------------------------------------------------
struct UnknownAction : error {
  explicit UnknownAction(const std::string& a) : error("action not in alphabet: " + a) {}
};
struct ActionOutsideAlphabet : error {
  explicit ActionOutsideAlphabet(const std::string& a)
      : error("local process uses action outside the distributed alphabet: " + a) {}
};
struct NotDefined : error {
  explicit NotDefined(const std::string& what) : error("transition function undefined: " + what) {}
};

// -- unfolding ---------------------------------------------------------------
struct NotOneBounded : error {
  explicit NotOneBounded(const std::string& what) : error("net is not 1-bounded: " + what) {}
};
struct UnknownNode : error {
  explicit UnknownNode(const std::string& x) : error("unknown node: " + x) {}
};

// -- distribution ------------------------------------------------------------
struct NotConcurrencyPreserving : error {
  explicit NotConcurrencyPreserving(const std::string& t)
      : error("transition does not preserve the token count: " + t) {}
};
struct IncompatibleFamily : error {
  explicit IncompatibleFamily(const std::string& what) : error("incompatible family: " + what) {}
};
struct MalformedFormula : error {
  explicit MalformedFormula(const std::string& what) : error("malformed formula: " + what) {}
};

// -- translations ------------------------------------------------------------
struct InvalidDistribution : error {
  explicit InvalidDistribution(const std::string& what) : error("invalid distribution: " + what) {}
};
struct NonReachabilityObjective : error {
  NonReachabilityObjective() : error("translation requires a reachability objective") {}
};
struct NonSafetyObjective : error {
  NonSafetyObjective() : error("translation requires a safety objective") {}
};
struct StateCapExceeded : error {
  explicit StateCapExceeded(const std::string& what) : error("state cap exceeded: " + what) {}
};
struct ReconstructionAssertionFailed : error {
  explicit ReconstructionAssertionFailed(const std::string& what)
      : error("strategy reconstruction assertion failed: " + what) {}
};
struct AssumptionViolated : error {
  explicit AssumptionViolated(const std::string& what) : error("assumption violated: " + what) {}
};

// -- search caps -------------------------------------------------------------
struct SizeLimit : error {
  explicit SizeLimit(const std::string& what) : error("size limit reached: " + what) {}
};

// -- serialization -----------------------------------------------------------
struct ParseError : error {
  ParseError(std::size_t line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what) {}
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              what) {}
};

// A parsed file that fails the semantic checks of its in-memory type.
struct ValidationError : error {
  ValidationError(const std::string& clause, const std::string& what)
      : error(clause + ": " + what) {}
};

}  // namespace gb
