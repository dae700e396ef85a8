#ifndef COPAT_SUBST_HPP
#define COPAT_SUBST_HPP

#include <set>
#include <utility>
#include <vector>

#include "copat/syntax.hpp"

namespace copat {

// Simultaneous substitutions. Domain names must be pairwise distinct.
using MonoSubst = std::vector<std::pair<Name, MonoPtr>>;

struct TermSub {
  CompPtr m;
};
struct ResponseSub {
  CompResponse r;
};
using CompSubstEntry = std::variant<TermSub, ResponseSub>;
using CompSubst = std::vector<std::pair<Name, CompSubstEntry>>;

// Capture-avoiding simultaneous substitution. Binders that collide with free
// names of the environment's range are renamed with a case-local fresh counter
// (suffix "#n"). Substituting a response for a term-position variable (or a
// term for a covariable) throws std::logic_error.
MonoPtr substMono(const MonoPtr& m, const MonoSubst& env);
CompPtr substComp(const CompPtr& m, const CompSubst& env);
CompOptPtr substCompOption(const CompOptPtr& o, const CompSubst& env);
CompResponse substCompResponse(const CompResponse& r, const CompSubst& env);

// Free (co)variable names; index names are a separate kind and never counted.
std::set<Name> freeNames(const MonoPtr& m);
std::set<Name> freeNames(const CompPtr& m);
std::set<Name> freeNames(const CompOptPtr& o);
std::set<Name> freeNames(const CompResponse& r);

// Alpha-equivalent copy in which every binder is globally unique.
MonoPtr freshen(const MonoPtr& m);
CompPtr freshen(const CompPtr& m);
CompResponse freshen(const CompResponse& r);

// Equality up to consistent renaming of bound (co)variables.
bool alphaEq(const MonoPtr& a, const MonoPtr& b);
bool alphaEq(const CompPtr& a, const CompPtr& b);
bool alphaEq(const CompResponse& a, const CompResponse& b);

}  // namespace copat

#endif
