#ifndef COPAT_COMP_SEMANTICS_HPP
#define COPAT_COMP_SEMANTICS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "copat/canonical.hpp"
#include "copat/subst.hpp"
#include "copat/syntax.hpp"

namespace copat {

// ---------------------------------------------------------------------------
// Syntactic answers (machine and small-step)
// ---------------------------------------------------------------------------

struct CFinalA {
  CompQuestion q;
};
struct CStuckA {
  std::vector<CompPtr> meta;  // pending handlers, innermost first
  Name x;
  CompQuestion q;
};
struct CCoStuckA {
  std::vector<CompPtr> meta;
  Name k;
};
using CompSynAnswer = std::variant<CFinalA, CStuckA, CCoStuckA>;

CanonicalComp canonicalize(const CompSynAnswer& a);

// ---------------------------------------------------------------------------
// CPS evaluator
// ---------------------------------------------------------------------------

struct CompCpsAnswer;
struct CompCpsArg;
using CompCpsQuestion = Question<CompCpsArg>;
using CompCpsTerm = std::function<CompCpsAnswer(CompCpsQuestion)>;
struct CompCpsArg {
  CompCpsTerm use;
};

struct CCpsFinal {
  CompCpsQuestion q;
};
struct CCpsStuck {
  std::vector<CompCpsTerm> meta;
  Name x;
  CompCpsQuestion q;
};
struct CCpsCoStuck {
  std::vector<CompCpsTerm> meta;
  Name k;
};
struct CompCpsAnswer {
  std::variant<CCpsFinal, CCpsStuck, CCpsCoStuck> v;
};

CanonicalComp canonicalize(const CompCpsAnswer& a);

std::optional<CompCpsAnswer> runCompCps(const CompResponse& r, long fuel);
std::optional<CompCpsAnswer> evalCompCps(const CompPtr& m, long fuel);
std::optional<CompCpsAnswer> tryCompCps(const CompOptPtr& o, long fuel);

// The earlier option translation of the third refactor, which receives the
// saved question separately so failure can restart from it. Exists only to
// state the corollary Opt O k f k = Opt' O f k executably; both entry points
// use Raise as the failure term and k as both question arguments.
std::optional<CompCpsAnswer> legacyOptCps(const CompOptPtr& o, const CompQuestion& k, long fuel);
// The single-pass form on the same question, for comparison.
std::optional<CompCpsAnswer> primeOptCps(const CompOptPtr& o, const CompQuestion& k, long fuel);

// ---------------------------------------------------------------------------
// Abstract machine with meta-continuation
// ---------------------------------------------------------------------------

using CompMetaCont = PList<CompPtr>;  // innermost handler first

struct CDelimSt {
  CompResponse r;
  CompMetaCont s;
};
struct CRefocusSt {
  CompPtr m;
  CompQuestion k;
  CompMetaCont s;
};
struct CComatchSt {
  CompOptPtr o;
  CompPtr m;  // failure alternative under construction
  CompQuestion k;
  CompMetaCont s;
};
using CompMachineState = std::variant<CDelimSt, CRefocusSt, CComatchSt>;

std::variant<CompMachineState, CompSynAnswer> stepCompMachine(const CompMachineState& s);

using CompTraceHook = std::function<void(const CompMachineState&)>;
std::optional<CompSynAnswer> runCompMachine(const CompResponse& r, long fuel,
                                            const CompTraceHook& trace = nullptr);
std::optional<CompSynAnswer> evalCompMachine(const CompPtr& m, long fuel,
                                             const CompTraceHook& trace = nullptr);
std::optional<CompSynAnswer> tryCompMachine(const CompOptPtr& o, long fuel,
                                            const CompTraceHook& trace = nullptr);

// The reified continuation K[Raise] ! end substituted for a captured covariable.
CompSubstEntry subQSyn(const CompQuestion& k);

// ---------------------------------------------------------------------------
// Direct-style delimited small-step interpreter
// ---------------------------------------------------------------------------

struct CoFrameArg {
  Name x;
};
struct CoFrameAt {
  Name index;
};
using CoFrame = std::variant<CoFrameArg, CoFrameAt>;

struct CoObject {
  CoFrame coframe;
  CompOptPtr success;
  CompPtr failure;
};

struct CRxFreeVar {
  Name x;
};
struct CRxIntrospect {
  CompPtr m;
};
struct CRxTry {
  Name x;
  CompPtr n;  // success body
  CompPtr m;  // failure alternative
};
struct CRxPop {
  CoObject co;
  CompPtr n;
};
struct CRxGet {
  CoObject co;
  Name j;
};
using CompRxTerm = std::variant<CRxFreeVar, CRxIntrospect, CRxTry, CRxPop, CRxGet>;

struct CRdT {
  CompPtr m;
};
struct CRdUnknownA {
  Name x;
};
using CompRdTerm = std::variant<CRdT, CRdUnknownA>;

struct CRxFreeCoVar {
  Name k;
};
struct CRxReset {
  CompPtr m;
  CompQuestion q;
};
struct CRxShift {
  Name k;
  CompResponse r;
  CompQuestion q;
};
struct CRxUnderCo {
  CoObject co;
};
using CompRxResponse = std::variant<CRxFreeCoVar, CRxReset, CRxShift, CRxUnderCo>;

struct CRdR {
  CompResponse r;
};
struct CRdUnknownQ {
  Name k;
};
using CompRdResponse = std::variant<CRdR, CRdUnknownQ>;

struct DecompInternal {
  CompRxTerm rx;
  CompQuestion q;
};
struct DecompExternal {
  CompRxResponse rx;
};
struct DecompRaised {
  CompQuestion q;
};
using CompDecomp = std::variant<DecompInternal, DecompExternal, DecompRaised>;

struct DelimAround {
  CompRxTerm rx;
  CompQuestion q;
  std::vector<CompPtr> s;
};
struct DelimCaught {
  CompRxResponse rx;
  std::vector<CompPtr> s;
};
struct DelimUncaught {
  CompQuestion q;
};
using CompDelimit = std::variant<DelimAround, DelimCaught, DelimUncaught>;

CompRdTerm reduceComp(const CompRxTerm& rx);
CompRdResponse handleComp(const CompRxResponse& rx);
CompDecomp decompComp(const CompPtr& m);
CompDelimit delimitComp(const CompResponse& r);
CompResponse unwindComp(const std::vector<CompPtr>& s, CompResponse r);

std::optional<CompSynAnswer> runCompSmallStep(CompResponse r, long fuel);
std::optional<CompSynAnswer> evalCompSmallStep(const CompPtr& m, long fuel);
std::optional<CompSynAnswer> tryCompSmallStep(const CompOptPtr& o, long fuel);

}  // namespace copat

#endif
