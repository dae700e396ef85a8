#ifndef COPAT_MONO_SEMANTICS_HPP
#define COPAT_MONO_SEMANTICS_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "copat/canonical.hpp"
#include "copat/subst.hpp"
#include "copat/syntax.hpp"

namespace copat {

// ---------------------------------------------------------------------------
// Copattern matching against a question (generic in the question payload)
// ---------------------------------------------------------------------------

template <class P>
struct RemFollowup {
  Question<P> q;
};
struct RemUnasked {
  Copattern lhs;
};
template <class P>
struct RemMismatch {
  Copattern lhs;
  Question<P> q;
};

template <class P>
struct CoMatch {
  std::vector<std::pair<Name, P>> prefix;  // bindings in lhs order
  std::variant<RemFollowup<P>, RemUnasked, RemMismatch<P>> suffix;
};

// First clause wins: empty lhs yields the remaining question; an exhausted
// question with lhs left over is an incomplete match; argument frames bind;
// matching indices consume; anything else is a mismatch.
template <class P>
CoMatch<P> comatch(Copattern lhs, Question<P> q) {
  if (!lhs) return {{}, RemFollowup<P>{q}};
  if (!q) return {{}, RemUnasked{lhs}};
  if (lhs->head.kind == CopatFrame::Kind::Bind) {
    if (const auto* a = std::get_if<ArgFrame<P>>(&q->head)) {
      CoMatch<P> rest = comatch(lhs->tail, q->tail);
      rest.prefix.insert(rest.prefix.begin(), {lhs->head.name, a->payload});
      return rest;
    }
  } else if (const auto* i = std::get_if<IdxFrame>(&q->head)) {
    if (i->index == lhs->head.name) return comatch(lhs->tail, q->tail);
  }
  return {{}, RemMismatch<P>{lhs, q}};
}

// ---------------------------------------------------------------------------
// Small-step interpreter pieces
// ---------------------------------------------------------------------------

struct RxIntrospect {
  MonoPtr m;
};
struct RxRespond {
  std::vector<MonoOption> options;
};
struct RxFreeVar {
  Name x;
};
using MonoRedex = std::variant<RxIntrospect, RxRespond, RxFreeVar>;

struct RdReduced {
  MonoPtr m;
};
struct RdUnhandled {};
struct RdUnknown {
  Name x;
};
using MonoReduct = std::variant<RdReduced, RdUnhandled, RdUnknown>;

struct FuNext {
  MonoReduct r;
  MonoQuestion q;
};
struct FuMore {
  Copattern lhs;  // never empty
  MonoPtr rhs;
  std::vector<MonoOption> options;
  MonoQuestion q;
};
using Followup = std::variant<FuNext, FuMore>;

Followup reduceMono(const MonoRedex& r, const MonoQuestion& q);

struct MonoDecomp {
  MonoRedex redex;
  MonoQuestion q;
};

MonoDecomp searchMono(const MonoPtr& m);
MonoDecomp refocusMono(const MonoPtr& m, MonoQuestion k);
MonoDecomp decompMono(const MonoPtr& m);

struct MonoUnder {
  Copattern lhs;  // never empty
  MonoPtr rhs;
  std::vector<MonoOption> options;
  MonoQuestion q;
};
struct MonoRaise {
  MonoQuestion q;
};
struct MonoStuck {
  Name x;
  MonoQuestion q;
};
using MonoAnswer = std::variant<MonoUnder, MonoRaise, MonoStuck>;

// nullopt means the fuel budget ran out before a final answer.
std::optional<MonoAnswer> evalMonoSmallStep(MonoPtr m, long fuel);

// ---------------------------------------------------------------------------
// Abstract machine
// ---------------------------------------------------------------------------

struct MonoEval {
  MonoPtr focus;
  MonoQuestion k;
};
struct MonoComatching {
  Copattern lhs;
  MonoQuestion ctx;
  MonoPtr rhs;
  std::vector<MonoOption> options;
  MonoQuestion saved;
};
using MonoMachineState = std::variant<MonoEval, MonoComatching>;

std::variant<MonoMachineState, MonoAnswer> stepMonoMachine(const MonoMachineState& s);

using MonoTraceHook = std::function<void(const MonoMachineState&)>;
std::optional<MonoAnswer> runMonoMachine(MonoPtr m, long fuel, const MonoTraceHook& trace = nullptr);

// ---------------------------------------------------------------------------
// CPS evaluator
// ---------------------------------------------------------------------------

struct MonoCpsAnswer;
struct MonoCpsArg;
using MonoCpsQuestion = Question<MonoCpsArg>;
using MonoCpsTerm = std::function<MonoCpsAnswer(MonoCpsQuestion)>;
struct MonoCpsArg {
  MonoCpsTerm use;
};

struct CpsUnder {
  MonoCpsTerm resume;
};
struct CpsRaise {
  MonoCpsQuestion q;
};
struct CpsStuck {
  Name x;
  MonoCpsQuestion q;
};
struct MonoCpsAnswer {
  std::variant<CpsUnder, CpsRaise, CpsStuck> v;
};

std::optional<MonoCpsAnswer> evalMonoCps(const MonoPtr& m, long fuel);

// ---------------------------------------------------------------------------
// Canonical observables
// ---------------------------------------------------------------------------

CanonicalMono canonicalize(const MonoAnswer& a);
CanonicalMono canonicalize(const MonoCpsAnswer& a);

}  // namespace copat

#endif
