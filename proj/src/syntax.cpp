#include "copat/syntax.hpp"

namespace copat {

MonoPtr mVar(Name x) { return std::make_shared<const MonoTerm>(MonoTerm{MVar{std::move(x)}}); }
MonoPtr mApp(MonoPtr fun, MonoPtr arg) {
  return std::make_shared<const MonoTerm>(MonoTerm{MApp{std::move(fun), std::move(arg)}});
}
MonoPtr mIdx(MonoPtr obj, Name index) {
  return std::make_shared<const MonoTerm>(MonoTerm{MIdx{std::move(obj), std::move(index)}});
}
MonoPtr mDot(MonoPtr self) { return std::make_shared<const MonoTerm>(MonoTerm{MDot{std::move(self)}}); }
MonoPtr mObj(std::vector<MonoOption> options) {
  return std::make_shared<const MonoTerm>(MonoTerm{MObj{std::move(options)}});
}
MonoPtr mSem(std::any denot) { return std::make_shared<const MonoTerm>(MonoTerm{MSem{std::move(denot)}}); }

MonoPtr ask(MonoPtr m, const MonoQuestion& q) {
  for (auto n = q; n; n = n->tail) {
    if (const auto* a = std::get_if<ArgFrame<MonoPtr>>(&n->head)) {
      m = mApp(std::move(m), a->payload);
    } else {
      m = mIdx(std::move(m), std::get<IdxFrame>(n->head).index);
    }
  }
  return m;
}

bool copatEq(const Copattern& a, const Copattern& b) {
  auto x = a, y = b;
  for (; x && y; x = x->tail, y = y->tail)
    if (!(x->head == y->head)) return false;
  return !x && !y;
}

bool termEq(const MonoPtr& a, const MonoPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  struct Cmp {
    const MonoTerm& other;
    bool operator()(const MVar& v) const { return v.x == std::get<MVar>(other.node).x; }
    bool operator()(const MApp& v) const {
      const auto& o = std::get<MApp>(other.node);
      return termEq(v.fun, o.fun) && termEq(v.arg, o.arg);
    }
    bool operator()(const MIdx& v) const {
      const auto& o = std::get<MIdx>(other.node);
      return v.index == o.index && termEq(v.obj, o.obj);
    }
    bool operator()(const MDot& v) const { return termEq(v.self, std::get<MDot>(other.node).self); }
    bool operator()(const MObj& v) const {
      const auto& o = std::get<MObj>(other.node);
      if (v.options.size() != o.options.size()) return false;
      for (std::size_t i = 0; i < v.options.size(); ++i)
        if (!copatEq(v.options[i].lhs, o.options[i].lhs) || !termEq(v.options[i].rhs, o.options[i].rhs))
          return false;
      return true;
    }
    bool operator()(const MSem&) const { return false; }
  };
  return std::visit(Cmp{*b}, a->node);
}

bool questionEq(const MonoQuestion& a, const MonoQuestion& b) {
  auto x = a, y = b;
  for (; x && y; x = x->tail, y = y->tail) {
    if (x->head.index() != y->head.index()) return false;
    if (const auto* ax = std::get_if<ArgFrame<MonoPtr>>(&x->head)) {
      if (!termEq(ax->payload, std::get<ArgFrame<MonoPtr>>(y->head).payload)) return false;
    } else if (std::get<IdxFrame>(x->head).index != std::get<IdxFrame>(y->head).index) {
      return false;
    }
  }
  return !x && !y;
}

CompPtr cVar(Name x) { return std::make_shared<const CompTerm>(CompTerm{CVar{std::move(x)}}); }
CompPtr cApp(CompPtr fun, CompPtr arg) {
  return std::make_shared<const CompTerm>(CompTerm{CApp{std::move(fun), std::move(arg)}});
}
CompPtr cIdx(CompPtr obj, Name index) {
  return std::make_shared<const CompTerm>(CompTerm{CIdx{std::move(obj), std::move(index)}});
}
CompPtr cDot(CompPtr self) { return std::make_shared<const CompTerm>(CompTerm{CDot{std::move(self)}}); }
CompPtr cHandle(CompOptPtr option, CompPtr fallback) {
  return std::make_shared<const CompTerm>(CompTerm{CHandle{std::move(option), std::move(fallback)}});
}
CompPtr cCapture(Name q, CompResponse body) {
  return std::make_shared<const CompTerm>(CompTerm{CCapture{std::move(q), std::move(body)}});
}
CompPtr cRaise() { return std::make_shared<const CompTerm>(CompTerm{CRaise{}}); }
CompPtr cSem(std::any denot) { return std::make_shared<const CompTerm>(CompTerm{CSem{std::move(denot)}}); }

CompOptPtr oPop(Name x, CompOptPtr rest) {
  return std::make_shared<const CompOption>(CompOption{OPop{std::move(x), std::move(rest)}});
}
CompOptPtr oGet(Name index, CompOptPtr rest) {
  return std::make_shared<const CompOption>(CompOption{OGet{std::move(index), std::move(rest)}});
}
CompOptPtr oDone(Name failVar, CompPtr rhs) {
  return std::make_shared<const CompOption>(CompOption{ODone{std::move(failVar), std::move(rhs)}});
}

CompResponse rEnd() { return CompResponse{{}, REnd{}}; }
CompResponse rSplat(Name q) { return CompResponse{{}, RSplat{std::move(q)}}; }
CompResponse rThen(CompPtr m, CompResponse rest) {
  rest.chain.insert(rest.chain.begin(), std::move(m));
  return rest;
}

CompPtr ask(CompPtr m, const CompQuestion& q) {
  for (auto n = q; n; n = n->tail) {
    if (const auto* a = std::get_if<ArgFrame<CompPtr>>(&n->head)) {
      m = cApp(std::move(m), a->payload);
    } else {
      m = cIdx(std::move(m), std::get<IdxFrame>(n->head).index);
    }
  }
  return m;
}

bool termEq(const CompPtr& a, const CompPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  struct Cmp {
    const CompTerm& other;
    bool operator()(const CVar& v) const { return v.x == std::get<CVar>(other.node).x; }
    bool operator()(const CApp& v) const {
      const auto& o = std::get<CApp>(other.node);
      return termEq(v.fun, o.fun) && termEq(v.arg, o.arg);
    }
    bool operator()(const CIdx& v) const {
      const auto& o = std::get<CIdx>(other.node);
      return v.index == o.index && termEq(v.obj, o.obj);
    }
    bool operator()(const CDot& v) const { return termEq(v.self, std::get<CDot>(other.node).self); }
    bool operator()(const CHandle& v) const {
      const auto& o = std::get<CHandle>(other.node);
      return optionEq(v.option, o.option) && termEq(v.fallback, o.fallback);
    }
    bool operator()(const CCapture& v) const {
      const auto& o = std::get<CCapture>(other.node);
      return v.q == o.q && responseEq(v.body, o.body);
    }
    bool operator()(const CRaise&) const { return true; }
    bool operator()(const CSem&) const { return false; }
  };
  return std::visit(Cmp{*b}, a->node);
}

bool optionEq(const CompOptPtr& a, const CompOptPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  if (const auto* p = std::get_if<OPop>(&a->node)) {
    const auto& o = std::get<OPop>(b->node);
    return p->x == o.x && optionEq(p->rest, o.rest);
  }
  if (const auto* g = std::get_if<OGet>(&a->node)) {
    const auto& o = std::get<OGet>(b->node);
    return g->index == o.index && optionEq(g->rest, o.rest);
  }
  const auto& d = std::get<ODone>(a->node);
  const auto& o = std::get<ODone>(b->node);
  return d.failVar == o.failVar && termEq(d.rhs, o.rhs);
}

bool responseEq(const CompResponse& a, const CompResponse& b) {
  if (a.chain.size() != b.chain.size()) return false;
  for (std::size_t i = 0; i < a.chain.size(); ++i)
    if (!termEq(a.chain[i], b.chain[i])) return false;
  if (a.tail.index() != b.tail.index()) return false;
  if (const auto* s = std::get_if<RSplat>(&a.tail)) return s->q == std::get<RSplat>(b.tail).q;
  return !std::holds_alternative<RSplatSem>(a.tail);
}

bool questionEq(const CompQuestion& a, const CompQuestion& b) {
  auto x = a, y = b;
  for (; x && y; x = x->tail, y = y->tail) {
    if (x->head.index() != y->head.index()) return false;
    if (const auto* ax = std::get_if<ArgFrame<CompPtr>>(&x->head)) {
      if (!termEq(ax->payload, std::get<ArgFrame<CompPtr>>(y->head).payload)) return false;
    } else if (std::get<IdxFrame>(x->head).index != std::get<IdxFrame>(y->head).index) {
      return false;
    }
  }
  return !x && !y;
}

}  // namespace copat
