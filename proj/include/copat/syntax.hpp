#ifndef COPAT_SYNTAX_HPP
#define COPAT_SYNTAX_HPP

#include <any>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace copat {

using Name = std::string;

// Persistent cons list. Empty list is nullptr.
template <class T>
struct PListNode;
template <class T>
using PList = std::shared_ptr<const PListNode<T>>;
template <class T>
struct PListNode {
  T head;
  PList<T> tail;
};

template <class T>
PList<T> cons(T h, PList<T> t) {
  return std::make_shared<const PListNode<T>>(PListNode<T>{std::move(h), std::move(t)});
}

template <class T>
std::size_t listLength(PList<T> l) {
  std::size_t n = 0;
  for (; l; l = l->tail) ++n;
  return n;
}

template <class T>
PList<T> listConcat(PList<T> l, PList<T> r) {
  if (!l) return r;
  return cons(l->head, listConcat(l->tail, r));
}

template <class T>
std::vector<T> listToVector(PList<T> l) {
  std::vector<T> out;
  for (; l; l = l->tail) out.push_back(l->head);
  return out;
}

template <class T>
PList<T> listFromVector(const std::vector<T>& v) {
  PList<T> out;
  for (auto it = v.rbegin(); it != v.rend(); ++it) out = cons(*it, out);
  return out;
}

// ---------------------------------------------------------------------------
// Copatterns and questions
// ---------------------------------------------------------------------------

// One copattern frame: either bind the next argument or match an index.
struct CopatFrame {
  enum class Kind { Bind, Match };
  Kind kind;
  Name name;

  friend bool operator==(const CopatFrame&, const CopatFrame&) = default;
};

using Copattern = PList<CopatFrame>;

inline Copattern copatBind(Name x, Copattern rest) {
  return cons(CopatFrame{CopatFrame::Kind::Bind, std::move(x)}, std::move(rest));
}
inline Copattern copatMatch(Name index, Copattern rest) {
  return cons(CopatFrame{CopatFrame::Kind::Match, std::move(index)}, std::move(rest));
}

// A question is a copattern whose argument slots are filled with payloads
// (terms, closures, or semantic values depending on the artifact).
template <class P>
struct ArgFrame {
  P payload;
};
struct IdxFrame {
  Name index;
};
template <class P>
using QFrame = std::variant<ArgFrame<P>, IdxFrame>;
template <class P>
using Question = PList<QFrame<P>>;

template <class P>
Question<P> askArg(P payload, Question<P> rest) {
  return cons<QFrame<P>>(ArgFrame<P>{std::move(payload)}, std::move(rest));
}
template <class P>
Question<P> askIdx(Name index, Question<P> rest) {
  return cons<QFrame<P>>(IdxFrame{std::move(index)}, std::move(rest));
}

// Monoid composition: left-to-right concatenation, Nop (null) is identity.
inline Copattern copatCompose(Copattern l, Copattern r) { return listConcat(l, r); }
template <class P>
Question<P> copatCompose(Question<P> l, Question<P> r) {
  return listConcat(l, r);
}

// ---------------------------------------------------------------------------
// Monolithic terms
// ---------------------------------------------------------------------------

struct MonoTerm;
using MonoPtr = std::shared_ptr<const MonoTerm>;
using MonoQuestion = Question<MonoPtr>;

struct MonoOption {
  Copattern lhs;
  MonoPtr rhs;
};

struct MVar {
  Name x;
};
struct MApp {
  MonoPtr fun;
  MonoPtr arg;
};
struct MIdx {
  MonoPtr obj;
  Name index;
};
struct MDot {
  MonoPtr self;
};
struct MObj {
  std::vector<MonoOption> options;
};
// A variable position already substituted by a semantic denotation (CPS only).
struct MSem {
  std::any denot;
};

struct MonoTerm {
  std::variant<MVar, MApp, MIdx, MDot, MObj, MSem> node;
};

MonoPtr mVar(Name x);
MonoPtr mApp(MonoPtr fun, MonoPtr arg);
MonoPtr mIdx(MonoPtr obj, Name index);
MonoPtr mDot(MonoPtr self);
MonoPtr mObj(std::vector<MonoOption> options);
MonoPtr mSem(std::any denot);

// Plug a term into a question, accumulating applications/indexings.
MonoPtr ask(MonoPtr m, const MonoQuestion& q);

// Structural equality; semantic leaves are never equal.
bool termEq(const MonoPtr& a, const MonoPtr& b);
bool questionEq(const MonoQuestion& a, const MonoQuestion& b);
bool copatEq(const Copattern& a, const Copattern& b);

// ---------------------------------------------------------------------------
// Compositional terms, options and responses
// ---------------------------------------------------------------------------

struct CompTerm;
using CompPtr = std::shared_ptr<const CompTerm>;
struct CompOption;
using CompOptPtr = std::shared_ptr<const CompOption>;
using CompQuestion = Question<CompPtr>;

struct RSplat {
  Name q;
};
struct REnd {};
// A covariable position substituted by a semantic question (CPS only).
struct RSplatSem {
  std::any denot;
};

// R ::= M ! (M ! ... tail); the chain lists handlers outermost first.
struct CompResponse {
  std::vector<CompPtr> chain;
  std::variant<REnd, RSplat, RSplatSem> tail;
};

struct OPop {
  Name x;
  CompOptPtr rest;
};
struct OGet {
  Name index;
  CompOptPtr rest;
};
struct ODone {
  Name failVar;
  CompPtr rhs;
};

struct CompOption {
  std::variant<OPop, OGet, ODone> node;
};

struct CVar {
  Name x;
};
struct CApp {
  CompPtr fun;
  CompPtr arg;
};
struct CIdx {
  CompPtr obj;
  Name index;
};
struct CDot {
  CompPtr self;
};
struct CHandle {
  CompOptPtr option;
  CompPtr fallback;
};
struct CCapture {
  Name q;
  CompResponse body;
};
struct CRaise {};
struct CSem {
  std::any denot;
};

struct CompTerm {
  std::variant<CVar, CApp, CIdx, CDot, CHandle, CCapture, CRaise, CSem> node;
};

CompPtr cVar(Name x);
CompPtr cApp(CompPtr fun, CompPtr arg);
CompPtr cIdx(CompPtr obj, Name index);
CompPtr cDot(CompPtr self);
CompPtr cHandle(CompOptPtr option, CompPtr fallback);
CompPtr cCapture(Name q, CompResponse body);
CompPtr cRaise();
CompPtr cSem(std::any denot);

CompOptPtr oPop(Name x, CompOptPtr rest);
CompOptPtr oGet(Name index, CompOptPtr rest);
CompOptPtr oDone(Name failVar, CompPtr rhs);

CompResponse rEnd();
CompResponse rSplat(Name q);
CompResponse rThen(CompPtr m, CompResponse rest);

CompPtr ask(CompPtr m, const CompQuestion& q);

bool termEq(const CompPtr& a, const CompPtr& b);
bool optionEq(const CompOptPtr& a, const CompOptPtr& b);
bool responseEq(const CompResponse& a, const CompResponse& b);
bool questionEq(const CompQuestion& a, const CompQuestion& b);

}  // namespace copat

#endif
