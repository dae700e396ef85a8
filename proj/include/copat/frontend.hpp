#ifndef COPAT_FRONTEND_HPP
#define COPAT_FRONTEND_HPP

#include <string>
#include <variant>

#include "copat/comp_semantics.hpp"
#include "copat/mono_semantics.hpp"
#include "copat/syntax.hpp"

namespace copat {

// Positions are 1-based; `found` is the offending lexeme (or "end of input").
struct ParseError {
  int line = 1;
  int column = 1;
  std::string expected;
  std::string found;

  std::string render() const;
};

// Parsers produce resolved (freshened) syntax and reject the reserved index
// Open. Monolithic sources (.copat) hold a term; compositional sources
// (.ccopat) hold a response.
std::variant<MonoPtr, ParseError> parseMonoTerm(const std::string& src);
std::variant<CompResponse, ParseError> parseCompResponse(const std::string& src);

// Minimal-parenthesis printers; parse(pretty(t)) is alpha-equal to t.
std::string pretty(const MonoPtr& m);
std::string pretty(const CompPtr& m);
std::string pretty(const CompOptPtr& o);
std::string pretty(const CompResponse& r);

// Question frames in brackets, payloads parenthesized when compound:
// "[(g x) Head]".
std::string pretty(const MonoQuestion& q);
std::string pretty(const CompQuestion& q);

// Machine states in bracket notation, e.g. "<count. | [Head]>"; comatching
// and compositional states separate their components with '|' and render the
// handler stack in brackets.
std::string pretty(const MonoMachineState& s);
std::string pretty(const CompMachineState& s);

// Freshens binders apart; throws std::invalid_argument if the reserved index
// Open occurs anywhere.
MonoPtr resolveNames(const MonoPtr& m);
CompResponse resolveNames(const CompResponse& r);

}  // namespace copat

#endif
