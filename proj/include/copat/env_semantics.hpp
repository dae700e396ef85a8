#ifndef COPAT_ENV_SEMANTICS_HPP
#define COPAT_ENV_SEMANTICS_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "copat/comp_semantics.hpp"
#include "copat/mono_semantics.hpp"
#include "copat/syntax.hpp"

namespace copat {

// ---------------------------------------------------------------------------
// Closures over monolithic terms
// ---------------------------------------------------------------------------

struct MonoClosure;
using MonoClosEnv = PList<std::pair<Name, MonoClosure>>;
// Delayed substitutions: newest binding first, lookup shadows older entries.
struct MonoClosure {
  MonoPtr openTerm;
  MonoClosEnv staticEnv;
};
using ClosQuestion = Question<MonoClosure>;

std::optional<MonoClosure> envLookup(const MonoClosEnv& env, const Name& x);

// ---------------------------------------------------------------------------
// Small-step reduction with an environment
// ---------------------------------------------------------------------------

struct ERxIntrospect {
  MonoPtr m;
  MonoClosEnv env;
};
struct ERxRespond {
  std::vector<MonoOption> options;
  MonoClosEnv env;
};
struct ERxFreeVar {
  Name x;
  MonoClosEnv env;
};
using EnvMonoRedex = std::variant<ERxIntrospect, ERxRespond, ERxFreeVar>;

struct ERdReduced {
  MonoClosure c;
};
struct ERdUnhandled {};
struct ERdUnknown {
  Name x;
};
using EnvMonoReduct = std::variant<ERdReduced, ERdUnhandled, ERdUnknown>;

struct EFuNext {
  EnvMonoReduct r;
  ClosQuestion q;
};
struct EFuMore {
  Copattern lhs;  // never empty
  MonoClosure rhs;
  std::vector<MonoOption> options;
  MonoClosEnv env;
  ClosQuestion q;
};
using EnvFollowup = std::variant<EFuNext, EFuMore>;

EnvFollowup envReduceMono(const EnvMonoRedex& r, const ClosQuestion& q);

struct EnvMonoUnder {
  Copattern lhs;  // never empty
  MonoClosure rhs;
  std::vector<MonoOption> options;
  MonoClosEnv env;
  ClosQuestion q;
};
struct EnvMonoRaise {
  ClosQuestion q;
};
struct EnvMonoStuck {
  Name x;
  ClosQuestion q;
};
using EnvMonoAnswer = std::variant<EnvMonoUnder, EnvMonoRaise, EnvMonoStuck>;

CanonicalMono canonicalize(const EnvMonoAnswer& a);

std::optional<EnvMonoAnswer> evalEnvMonoSmallStep(const MonoPtr& m, long fuel);

// ---------------------------------------------------------------------------
// Environment-passing machine for the monolithic calculus
// ---------------------------------------------------------------------------

struct EnvMonoEval {
  MonoPtr focus;
  MonoClosEnv env;
  ClosQuestion k;
};
struct EnvMonoComatching {
  Copattern lhs;
  ClosQuestion ctx;
  MonoClosEnv matched;  // bindings consumed so far, newest first
  MonoPtr rhs;
  std::vector<MonoOption> options;
  MonoClosEnv env;  // environment of the remaining options
  ClosQuestion saved;
};
using EnvMonoMachineState = std::variant<EnvMonoEval, EnvMonoComatching>;

std::variant<EnvMonoMachineState, EnvMonoAnswer> stepEnvMonoMachine(const EnvMonoMachineState& s);

using EnvMonoTraceHook = std::function<void(const EnvMonoMachineState&)>;
std::optional<EnvMonoAnswer> runEnvMonoMachine(const MonoPtr& m, long fuel,
                                               const EnvMonoTraceHook& trace = nullptr);

// ---------------------------------------------------------------------------
// Environment-parameterized CPS, monolithic calculus
// ---------------------------------------------------------------------------

std::optional<MonoCpsAnswer> evalEnvMonoCps(const MonoPtr& m, long fuel);

// ---------------------------------------------------------------------------
// Environment-parameterized CPS, compositional calculus
// ---------------------------------------------------------------------------

std::optional<CompCpsAnswer> runEnvCompCps(const CompResponse& r, long fuel);
std::optional<CompCpsAnswer> evalEnvCompCps(const CompPtr& m, long fuel);
std::optional<CompCpsAnswer> tryEnvCompCps(const CompOptPtr& o, long fuel);

// ---------------------------------------------------------------------------
// Environment-passing machine for the compositional calculus
// ---------------------------------------------------------------------------

struct CompClosure;
struct CompClosEntry;
using CompClosEnv = PList<std::pair<Name, CompClosEntry>>;
struct CompClosure {
  CompPtr openTerm;
  CompClosEnv staticEnv;
};
using CompClosQuestion = Question<CompClosure>;
// Term variables are bound to closures, covariables to closure questions.
struct CompClosEntry {
  std::variant<CompClosure, CompClosQuestion> v;
};

std::optional<CompClosEntry> envLookup(const CompClosEnv& env, const Name& x);

struct EnvCFinalA {
  CompClosQuestion q;
};
struct EnvCStuckA {
  std::vector<CompClosure> meta;  // pending handlers, innermost first
  Name x;
  CompClosQuestion q;
};
struct EnvCCoStuckA {
  std::vector<CompClosure> meta;
  Name k;
};
using EnvCompAnswer = std::variant<EnvCFinalA, EnvCStuckA, EnvCCoStuckA>;

CanonicalComp canonicalize(const EnvCompAnswer& a);

using CompClosMeta = PList<CompClosure>;  // innermost handler first

struct EnvCDelimSt {
  CompResponse r;
  CompClosEnv env;
  CompClosMeta s;
};
struct EnvCRefocusSt {
  CompPtr m;
  CompClosEnv env;
  CompClosQuestion k;
  CompClosMeta s;
};
struct EnvCComatchSt {
  CompOptPtr o;
  CompClosEnv env;
  CompClosQuestion k;
  CompClosure m;  // failure alternative
  CompClosQuestion saved;
  CompClosMeta s;
};
using EnvCompMachineState = std::variant<EnvCDelimSt, EnvCRefocusSt, EnvCComatchSt>;

std::variant<EnvCompMachineState, EnvCompAnswer> stepEnvCompMachine(const EnvCompMachineState& s);

using EnvCompTraceHook = std::function<void(const EnvCompMachineState&)>;
std::optional<EnvCompAnswer> runEnvCompMachine(const CompResponse& r, long fuel,
                                               const EnvCompTraceHook& trace = nullptr);
std::optional<EnvCompAnswer> evalEnvCompMachine(const CompPtr& m, long fuel,
                                                const EnvCompTraceHook& trace = nullptr);
std::optional<EnvCompAnswer> tryEnvCompMachine(const CompOptPtr& o, long fuel,
                                               const EnvCompTraceHook& trace = nullptr);

}  // namespace copat

#endif
