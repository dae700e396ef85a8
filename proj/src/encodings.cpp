#include "copat/encodings.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "copat/subst.hpp"

namespace copat {

namespace {

Name freshAgainst(const Name& base, const std::set<Name>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    Name cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

CompOptPtr desugarOption(const Copattern& lhs, const MonoPtr& rhs) {
  if (!lhs) {
    CompPtr body = desugarMonoToComp(rhs);
    return oDone(freshAgainst("_", freeNames(body)), body);
  }
  const CopatFrame& f = lhs->head;
  CompOptPtr rest = desugarOption(lhs->tail, rhs);
  if (f.kind == CopatFrame::Kind::Bind) return oPop(f.name, rest);
  return oGet(f.name, rest);
}

void reportWalk(const MonoPtr& m, DesugarReport& rep) {
  if (auto* v = std::get_if<MApp>(&m->node)) {
    reportWalk(v->fun, rep);
    reportWalk(v->arg, rep);
  } else if (auto* i = std::get_if<MIdx>(&m->node)) {
    reportWalk(i->obj, rep);
  } else if (auto* d = std::get_if<MDot>(&m->node)) {
    reportWalk(d->self, rep);
  } else if (auto* o = std::get_if<MObj>(&m->node)) {
    for (const auto& opt : o->options) {
      rep.optionCount += 1;
      if (opt.lhs) rep.underApplyRisk = true;
      reportWalk(opt.rhs, rep);
    }
  }
}

}  // namespace

CompPtr desugarMonoToComp(const MonoPtr& m) {
  return std::visit(
      [&](const auto& t) -> CompPtr {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, MVar>) {
          return cVar(t.x);
        } else if constexpr (std::is_same_v<T, MApp>) {
          return cApp(desugarMonoToComp(t.fun), desugarMonoToComp(t.arg));
        } else if constexpr (std::is_same_v<T, MIdx>) {
          return cIdx(desugarMonoToComp(t.obj), t.index);
        } else if constexpr (std::is_same_v<T, MDot>) {
          return cDot(desugarMonoToComp(t.self));
        } else if constexpr (std::is_same_v<T, MObj>) {
          CompPtr acc = cRaise();
          for (auto it = t.options.rbegin(); it != t.options.rend(); ++it)
            acc = cHandle(desugarOption(it->lhs, it->rhs), acc);
          return acc;
        } else {
          throw std::logic_error("semantic leaf in desugaring");
        }
      },
      m->node);
}

DesugarReport desugarReport(const MonoPtr& m) {
  DesugarReport rep;
  rep.input = m;
  reportWalk(m, rep);
  rep.output = desugarMonoToComp(m);
  return rep;
}

CompPtr objectEnc(const std::vector<CompOptPtr>& options) {
  std::set<Name> avoid;
  for (const auto& o : options) {
    auto fn = freeNames(o);
    avoid.insert(fn.begin(), fn.end());
  }
  Name self = freshAgainst("self", avoid);
  Name x = freshAgainst("x", avoid);
  Name f1 = freshAgainst("_", avoid);
  Name f2 = freshAgainst("_f", avoid);

  auto chainOnto = [&](CompPtr tail) {
    for (auto it = options.rbegin(); it != options.rend(); ++it)
      tail = cHandle(*it, tail);
    return tail;
  };

  // fun{ x -> O ? x }, i.e. the extension handler that retries the chain
  // before deferring to the argument
  CompPtr inner = cHandle(oPop(x, oDone(f2, chainOnto(cVar(x)))), cRaise());
  CompOptPtr openOpt = oPop(self, oGet(kOpenIndex, oDone(f1, inner)));
  return chainOnto(cHandle(openOpt, cRaise()));
}

CompPtr objectEnc(const CompOptPtr& option) {
  return objectEnc(std::vector<CompOptPtr>{option});
}

CompPtr openApp(const CompPtr& m, const CompPtr& n) {
  return cApp(cIdx(cDot(m), kOpenIndex), n);
}

CompPtr composeEnc(const CompPtr& m1, const CompPtr& m2) {
  std::set<Name> avoid = freeNames(m1);
  auto fn2 = freeNames(m2);
  avoid.insert(fn2.begin(), fn2.end());
  Name x = freshAgainst("x", avoid);
  return objectEnc(oDone(x, openApp(m1, openApp(m2, cVar(x)))));
}

}  // namespace copat
