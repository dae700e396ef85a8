#include "copat/subst.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace copat {

namespace {

void collectFree(const MonoPtr& m, std::set<Name>& bound, std::set<Name>& out);
void collectFree(const CompPtr& m, std::set<Name>& bound, std::set<Name>& out);
void collectFree(const CompOptPtr& o, std::set<Name>& bound, std::set<Name>& out);
void collectFree(const CompResponse& r, std::set<Name>& bound, std::set<Name>& out);

template <class F>
void withBound(std::set<Name>& bound, const Name& n, F body) {
  auto [it, inserted] = bound.insert(n);
  body();
  if (inserted) bound.erase(it);
}

void collectFree(const MonoPtr& m, std::set<Name>& bound, std::set<Name>& out) {
  if (const auto* v = std::get_if<MVar>(&m->node)) {
    if (!bound.count(v->x)) out.insert(v->x);
  } else if (const auto* a = std::get_if<MApp>(&m->node)) {
    collectFree(a->fun, bound, out);
    collectFree(a->arg, bound, out);
  } else if (const auto* i = std::get_if<MIdx>(&m->node)) {
    collectFree(i->obj, bound, out);
  } else if (const auto* d = std::get_if<MDot>(&m->node)) {
    collectFree(d->self, bound, out);
  } else if (const auto* o = std::get_if<MObj>(&m->node)) {
    for (const auto& opt : o->options) {
      std::vector<Name> added;
      for (auto l = opt.lhs; l; l = l->tail)
        if (l->head.kind == CopatFrame::Kind::Bind && bound.insert(l->head.name).second)
          added.push_back(l->head.name);
      collectFree(opt.rhs, bound, out);
      for (const auto& n : added) bound.erase(n);
    }
  }
}

void collectFree(const CompPtr& m, std::set<Name>& bound, std::set<Name>& out) {
  if (const auto* v = std::get_if<CVar>(&m->node)) {
    if (!bound.count(v->x)) out.insert(v->x);
  } else if (const auto* a = std::get_if<CApp>(&m->node)) {
    collectFree(a->fun, bound, out);
    collectFree(a->arg, bound, out);
  } else if (const auto* i = std::get_if<CIdx>(&m->node)) {
    collectFree(i->obj, bound, out);
  } else if (const auto* d = std::get_if<CDot>(&m->node)) {
    collectFree(d->self, bound, out);
  } else if (const auto* h = std::get_if<CHandle>(&m->node)) {
    collectFree(h->option, bound, out);
    collectFree(h->fallback, bound, out);
  } else if (const auto* c = std::get_if<CCapture>(&m->node)) {
    withBound(bound, c->q, [&] { collectFree(c->body, bound, out); });
  }
}

void collectFree(const CompOptPtr& o, std::set<Name>& bound, std::set<Name>& out) {
  if (const auto* p = std::get_if<OPop>(&o->node)) {
    withBound(bound, p->x, [&] { collectFree(p->rest, bound, out); });
  } else if (const auto* g = std::get_if<OGet>(&o->node)) {
    collectFree(g->rest, bound, out);
  } else {
    const auto& d = std::get<ODone>(o->node);
    withBound(bound, d.failVar, [&] { collectFree(d.rhs, bound, out); });
  }
}

void collectFree(const CompResponse& r, std::set<Name>& bound, std::set<Name>& out) {
  for (const auto& m : r.chain) collectFree(m, bound, out);
  if (const auto* s = std::get_if<RSplat>(&r.tail))
    if (!bound.count(s->q)) out.insert(s->q);
}

// --------------------------------------------------------------------------
// Substitution
// --------------------------------------------------------------------------

struct FreshCtx {
  unsigned long counter = 0;

  Name pick(const Name& base, const std::set<Name>& avoid) {
    Name cand;
    do {
      cand = base + "#" + std::to_string(++counter);
    } while (avoid.count(cand));
    return cand;
  }
};

MonoPtr substM(const MonoPtr& m, const MonoSubst& env, const std::set<Name>& rangeFree, FreshCtx& fresh);

MonoOption substMOption(const MonoOption& opt, const MonoSubst& env, const std::set<Name>& rangeFree,
                        FreshCtx& fresh) {
  std::set<Name> binders;
  for (auto l = opt.lhs; l; l = l->tail)
    if (l->head.kind == CopatFrame::Kind::Bind) binders.insert(l->head.name);
  MonoSubst inner;
  for (const auto& e : env)
    if (!binders.count(e.first)) inner.push_back(e);
  if (inner.empty()) return opt;

  // Rename binders that would capture free names of the range.
  std::map<Name, Name> renames;
  for (const auto& b : binders) {
    if (rangeFree.count(b)) {
      std::set<Name> avoid = rangeFree;
      std::set<Name> bound;
      collectFree(opt.rhs, bound, avoid);
      renames[b] = fresh.pick(b, avoid);
    }
  }
  Copattern lhs = opt.lhs;
  std::set<Name> innerRangeFree = rangeFree;
  if (!renames.empty()) {
    std::vector<CopatFrame> frames;
    for (auto l = opt.lhs; l; l = l->tail) {
      CopatFrame f = l->head;
      if (f.kind == CopatFrame::Kind::Bind) {
        auto it = renames.find(f.name);
        if (it != renames.end()) f.name = it->second;
      }
      frames.push_back(f);
    }
    lhs = listFromVector(frames);
    for (const auto& [oldName, newName] : renames) {
      inner.emplace_back(oldName, mVar(newName));
      innerRangeFree.insert(newName);
    }
  }
  return MonoOption{lhs, substM(opt.rhs, inner, innerRangeFree, fresh)};
}

MonoPtr substM(const MonoPtr& m, const MonoSubst& env, const std::set<Name>& rangeFree, FreshCtx& fresh) {
  if (env.empty()) return m;
  if (const auto* v = std::get_if<MVar>(&m->node)) {
    for (const auto& e : env)
      if (e.first == v->x) return e.second;
    return m;
  }
  if (const auto* a = std::get_if<MApp>(&m->node))
    return mApp(substM(a->fun, env, rangeFree, fresh), substM(a->arg, env, rangeFree, fresh));
  if (const auto* i = std::get_if<MIdx>(&m->node))
    return mIdx(substM(i->obj, env, rangeFree, fresh), i->index);
  if (const auto* d = std::get_if<MDot>(&m->node)) return mDot(substM(d->self, env, rangeFree, fresh));
  if (const auto* o = std::get_if<MObj>(&m->node)) {
    std::vector<MonoOption> options;
    options.reserve(o->options.size());
    for (const auto& opt : o->options) options.push_back(substMOption(opt, env, rangeFree, fresh));
    return mObj(std::move(options));
  }
  return m;  // MSem
}

CompPtr substC(const CompPtr& m, const CompSubst& env, const std::set<Name>& rangeFree, FreshCtx& fresh);
CompOptPtr substCOption(const CompOptPtr& o, const CompSubst& env, const std::set<Name>& rangeFree,
                        FreshCtx& fresh);
CompResponse substCResponse(const CompResponse& r, const CompSubst& env, const std::set<Name>& rangeFree,
                            FreshCtx& fresh);

// Drops the entry shadowed by a binder and renames the binder if it would
// capture; returns the (possibly renamed) binder name and the environment to
// use under it.
Name enterBinder(const Name& binder, const CompSubst& env, CompSubst& inner, std::set<Name>& innerRangeFree,
                 const std::set<Name>& rangeFree, FreshCtx& fresh, const std::set<Name>& bodyFree) {
  inner.clear();
  for (const auto& e : env)
    if (e.first != binder) inner.push_back(e);
  innerRangeFree = rangeFree;
  if (inner.empty()) return binder;
  if (rangeFree.count(binder)) {
    std::set<Name> avoid = rangeFree;
    avoid.insert(bodyFree.begin(), bodyFree.end());
    Name renamed = fresh.pick(binder, avoid);
    inner.emplace_back(binder, TermSub{cVar(renamed)});
    innerRangeFree.insert(renamed);
    return renamed;
  }
  return binder;
}

std::set<Name> freeOf(const CompPtr& m) {
  std::set<Name> bound, out;
  collectFree(m, bound, out);
  return out;
}
std::set<Name> freeOf(const CompOptPtr& o) {
  std::set<Name> bound, out;
  collectFree(o, bound, out);
  return out;
}
std::set<Name> freeOf(const CompResponse& r) {
  std::set<Name> bound, out;
  collectFree(r, bound, out);
  return out;
}

CompOptPtr substCOption(const CompOptPtr& o, const CompSubst& env, const std::set<Name>& rangeFree,
                        FreshCtx& fresh) {
  if (env.empty()) return o;
  if (const auto* p = std::get_if<OPop>(&o->node)) {
    CompSubst inner;
    std::set<Name> innerRangeFree;
    Name x = enterBinder(p->x, env, inner, innerRangeFree, rangeFree, fresh, freeOf(p->rest));
    return oPop(x, substCOption(p->rest, inner, innerRangeFree, fresh));
  }
  if (const auto* g = std::get_if<OGet>(&o->node))
    return oGet(g->index, substCOption(g->rest, env, rangeFree, fresh));
  const auto& d = std::get<ODone>(o->node);
  CompSubst inner;
  std::set<Name> innerRangeFree;
  Name x = enterBinder(d.failVar, env, inner, innerRangeFree, rangeFree, fresh, freeOf(d.rhs));
  return oDone(x, substC(d.rhs, inner, innerRangeFree, fresh));
}

CompPtr substC(const CompPtr& m, const CompSubst& env, const std::set<Name>& rangeFree, FreshCtx& fresh) {
  if (env.empty()) return m;
  if (const auto* v = std::get_if<CVar>(&m->node)) {
    for (const auto& e : env) {
      if (e.first != v->x) continue;
      if (const auto* t = std::get_if<TermSub>(&e.second)) return t->m;
      throw std::logic_error("substComp: response substituted for term variable " + v->x);
    }
    return m;
  }
  if (const auto* a = std::get_if<CApp>(&m->node))
    return cApp(substC(a->fun, env, rangeFree, fresh), substC(a->arg, env, rangeFree, fresh));
  if (const auto* i = std::get_if<CIdx>(&m->node))
    return cIdx(substC(i->obj, env, rangeFree, fresh), i->index);
  if (const auto* d = std::get_if<CDot>(&m->node)) return cDot(substC(d->self, env, rangeFree, fresh));
  if (const auto* h = std::get_if<CHandle>(&m->node))
    return cHandle(substCOption(h->option, env, rangeFree, fresh),
                   substC(h->fallback, env, rangeFree, fresh));
  if (const auto* c = std::get_if<CCapture>(&m->node)) {
    CompSubst inner;
    std::set<Name> innerRangeFree;
    Name q = enterBinder(c->q, env, inner, innerRangeFree, rangeFree, fresh, freeOf(c->body));
    return cCapture(q, substCResponse(c->body, inner, innerRangeFree, fresh));
  }
  return m;  // CRaise, CSem
}

CompResponse substCResponse(const CompResponse& r, const CompSubst& env, const std::set<Name>& rangeFree,
                            FreshCtx& fresh) {
  if (env.empty()) return r;
  CompResponse out;
  out.chain.reserve(r.chain.size());
  for (const auto& m : r.chain) out.chain.push_back(substC(m, env, rangeFree, fresh));
  out.tail = r.tail;
  if (const auto* s = std::get_if<RSplat>(&r.tail)) {
    for (const auto& e : env) {
      if (e.first != s->q) continue;
      if (const auto* rs = std::get_if<ResponseSub>(&e.second)) {
        out.chain.insert(out.chain.end(), rs->r.chain.begin(), rs->r.chain.end());
        out.tail = rs->r.tail;
        return out;
      }
      throw std::logic_error("substComp: term substituted for covariable " + s->q);
    }
  }
  return out;
}

// The binder renaming above only needs the fresh names chosen to be distinct
// from everything a rename could capture; substituting a renamed binder with
// another rename in the same pass is prevented by the shared counter.

std::set<Name> rangeFreeOf(const MonoSubst& env) {
  std::set<Name> bound, out;
  for (const auto& e : env) collectFree(e.second, bound, out);
  return out;
}

std::set<Name> rangeFreeOf(const CompSubst& env) {
  std::set<Name> bound, out;
  for (const auto& e : env) {
    if (const auto* t = std::get_if<TermSub>(&e.second))
      collectFree(t->m, bound, out);
    else
      collectFree(std::get<ResponseSub>(e.second).r, bound, out);
  }
  return out;
}

}  // namespace

MonoPtr substMono(const MonoPtr& m, const MonoSubst& env) {
  FreshCtx fresh;
  return substM(m, env, rangeFreeOf(env), fresh);
}

CompPtr substComp(const CompPtr& m, const CompSubst& env) {
  FreshCtx fresh;
  return substC(m, env, rangeFreeOf(env), fresh);
}

CompOptPtr substCompOption(const CompOptPtr& o, const CompSubst& env) {
  FreshCtx fresh;
  return substCOption(o, env, rangeFreeOf(env), fresh);
}

CompResponse substCompResponse(const CompResponse& r, const CompSubst& env) {
  FreshCtx fresh;
  return substCResponse(r, env, rangeFreeOf(env), fresh);
}

std::set<Name> freeNames(const MonoPtr& m) {
  std::set<Name> bound, out;
  collectFree(m, bound, out);
  return out;
}
std::set<Name> freeNames(const CompPtr& m) { return freeOf(m); }
std::set<Name> freeNames(const CompOptPtr& o) { return freeOf(o); }
std::set<Name> freeNames(const CompResponse& r) { return freeOf(r); }

// --------------------------------------------------------------------------
// Freshening
// --------------------------------------------------------------------------

namespace {

struct Freshener {
  std::set<Name> used;
  std::map<Name, unsigned long> counters;

  Name claim(const Name& base) {
    if (used.insert(base).second) return base;
    auto& c = counters[base];
    Name cand;
    do {
      cand = base + "_" + std::to_string(++c);
    } while (!used.insert(cand).second);
    return cand;
  }
};

using Renames = std::map<Name, Name>;

Name renamed(const Renames& rn, const Name& n) {
  auto it = rn.find(n);
  return it == rn.end() ? n : it->second;
}

MonoPtr freshenM(const MonoPtr& m, Renames rn, Freshener& fr) {
  if (const auto* v = std::get_if<MVar>(&m->node)) return mVar(renamed(rn, v->x));
  if (const auto* a = std::get_if<MApp>(&m->node))
    return mApp(freshenM(a->fun, rn, fr), freshenM(a->arg, rn, fr));
  if (const auto* i = std::get_if<MIdx>(&m->node)) return mIdx(freshenM(i->obj, rn, fr), i->index);
  if (const auto* d = std::get_if<MDot>(&m->node)) return mDot(freshenM(d->self, rn, fr));
  if (const auto* o = std::get_if<MObj>(&m->node)) {
    std::vector<MonoOption> options;
    for (const auto& opt : o->options) {
      Renames local = rn;
      std::vector<CopatFrame> frames;
      for (auto l = opt.lhs; l; l = l->tail) {
        CopatFrame f = l->head;
        if (f.kind == CopatFrame::Kind::Bind) {
          Name fresh = fr.claim(f.name);
          local[f.name] = fresh;
          f.name = fresh;
        }
        frames.push_back(f);
      }
      options.push_back(MonoOption{listFromVector(frames), freshenM(opt.rhs, local, fr)});
    }
    return mObj(std::move(options));
  }
  return m;
}

CompPtr freshenC(const CompPtr& m, Renames rn, Freshener& fr);
CompResponse freshenCR(const CompResponse& r, Renames rn, Freshener& fr);

CompOptPtr freshenCO(const CompOptPtr& o, Renames rn, Freshener& fr) {
  if (const auto* p = std::get_if<OPop>(&o->node)) {
    Name fresh = fr.claim(p->x);
    rn[p->x] = fresh;
    return oPop(fresh, freshenCO(p->rest, rn, fr));
  }
  if (const auto* g = std::get_if<OGet>(&o->node)) return oGet(g->index, freshenCO(g->rest, rn, fr));
  const auto& d = std::get<ODone>(o->node);
  Name fresh = fr.claim(d.failVar);
  rn[d.failVar] = fresh;
  return oDone(fresh, freshenC(d.rhs, rn, fr));
}

CompPtr freshenC(const CompPtr& m, Renames rn, Freshener& fr) {
  if (const auto* v = std::get_if<CVar>(&m->node)) return cVar(renamed(rn, v->x));
  if (const auto* a = std::get_if<CApp>(&m->node))
    return cApp(freshenC(a->fun, rn, fr), freshenC(a->arg, rn, fr));
  if (const auto* i = std::get_if<CIdx>(&m->node)) return cIdx(freshenC(i->obj, rn, fr), i->index);
  if (const auto* d = std::get_if<CDot>(&m->node)) return cDot(freshenC(d->self, rn, fr));
  if (const auto* h = std::get_if<CHandle>(&m->node))
    return cHandle(freshenCO(h->option, rn, fr), freshenC(h->fallback, rn, fr));
  if (const auto* c = std::get_if<CCapture>(&m->node)) {
    Name fresh = fr.claim(c->q);
    rn[c->q] = fresh;
    return cCapture(fresh, freshenCR(c->body, rn, fr));
  }
  return m;
}

CompResponse freshenCR(const CompResponse& r, Renames rn, Freshener& fr) {
  CompResponse out;
  for (const auto& m : r.chain) out.chain.push_back(freshenC(m, rn, fr));
  out.tail = r.tail;
  if (const auto* s = std::get_if<RSplat>(&r.tail)) out.tail = RSplat{renamed(rn, s->q)};
  return out;
}

}  // namespace

MonoPtr freshen(const MonoPtr& m) {
  Freshener fr;
  fr.used = freeNames(m);
  return freshenM(m, {}, fr);
}

CompPtr freshen(const CompPtr& m) {
  Freshener fr;
  fr.used = freeNames(m);
  return freshenC(m, {}, fr);
}

CompResponse freshen(const CompResponse& r) {
  Freshener fr;
  fr.used = freeNames(r);
  return freshenCR(r, {}, fr);
}

// --------------------------------------------------------------------------
// Alpha equivalence
// --------------------------------------------------------------------------

namespace {

struct NameMap {
  std::map<Name, Name> l2r, r2l;

  void bindPair(const Name& a, const Name& b) {
    l2r[a] = b;
    r2l[b] = a;
  }

  bool sameName(const Name& a, const Name& b) const {
    auto i = l2r.find(a);
    auto j = r2l.find(b);
    if (i != l2r.end() || j != r2l.end())
      return i != l2r.end() && j != r2l.end() && i->second == b && j->second == a;
    return a == b;
  }
};

bool aeqM(const MonoPtr& a, const MonoPtr& b, NameMap nm) {
  if (a->node.index() != b->node.index()) return false;
  if (const auto* v = std::get_if<MVar>(&a->node)) return nm.sameName(v->x, std::get<MVar>(b->node).x);
  if (const auto* ap = std::get_if<MApp>(&a->node)) {
    const auto& bp = std::get<MApp>(b->node);
    return aeqM(ap->fun, bp.fun, nm) && aeqM(ap->arg, bp.arg, nm);
  }
  if (const auto* ai = std::get_if<MIdx>(&a->node)) {
    const auto& bi = std::get<MIdx>(b->node);
    return ai->index == bi.index && aeqM(ai->obj, bi.obj, nm);
  }
  if (const auto* ad = std::get_if<MDot>(&a->node)) return aeqM(ad->self, std::get<MDot>(b->node).self, nm);
  if (const auto* ao = std::get_if<MObj>(&a->node)) {
    const auto& bo = std::get<MObj>(b->node);
    if (ao->options.size() != bo.options.size()) return false;
    for (std::size_t i = 0; i < ao->options.size(); ++i) {
      NameMap local = nm;
      auto la = ao->options[i].lhs;
      auto lb = bo.options[i].lhs;
      for (; la && lb; la = la->tail, lb = lb->tail) {
        if (la->head.kind != lb->head.kind) return false;
        if (la->head.kind == CopatFrame::Kind::Bind)
          local.bindPair(la->head.name, lb->head.name);
        else if (la->head.name != lb->head.name)
          return false;
      }
      if (la || lb) return false;
      if (!aeqM(ao->options[i].rhs, bo.options[i].rhs, local)) return false;
    }
    return true;
  }
  return false;  // MSem: semantic leaves never compare equal
}

bool aeqC(const CompPtr& a, const CompPtr& b, NameMap nm);
bool aeqCR(const CompResponse& a, const CompResponse& b, NameMap nm);

bool aeqCO(const CompOptPtr& a, const CompOptPtr& b, NameMap nm) {
  if (a->node.index() != b->node.index()) return false;
  if (const auto* p = std::get_if<OPop>(&a->node)) {
    const auto& q = std::get<OPop>(b->node);
    nm.bindPair(p->x, q.x);
    return aeqCO(p->rest, q.rest, nm);
  }
  if (const auto* g = std::get_if<OGet>(&a->node)) {
    const auto& h = std::get<OGet>(b->node);
    return g->index == h.index && aeqCO(g->rest, h.rest, nm);
  }
  const auto& d = std::get<ODone>(a->node);
  const auto& e = std::get<ODone>(b->node);
  nm.bindPair(d.failVar, e.failVar);
  return aeqC(d.rhs, e.rhs, nm);
}

bool aeqC(const CompPtr& a, const CompPtr& b, NameMap nm) {
  if (a->node.index() != b->node.index()) return false;
  if (const auto* v = std::get_if<CVar>(&a->node)) return nm.sameName(v->x, std::get<CVar>(b->node).x);
  if (const auto* ap = std::get_if<CApp>(&a->node)) {
    const auto& bp = std::get<CApp>(b->node);
    return aeqC(ap->fun, bp.fun, nm) && aeqC(ap->arg, bp.arg, nm);
  }
  if (const auto* ai = std::get_if<CIdx>(&a->node)) {
    const auto& bi = std::get<CIdx>(b->node);
    return ai->index == bi.index && aeqC(ai->obj, bi.obj, nm);
  }
  if (const auto* ad = std::get_if<CDot>(&a->node)) return aeqC(ad->self, std::get<CDot>(b->node).self, nm);
  if (const auto* ah = std::get_if<CHandle>(&a->node)) {
    const auto& bh = std::get<CHandle>(b->node);
    return aeqCO(ah->option, bh.option, nm) && aeqC(ah->fallback, bh.fallback, nm);
  }
  if (const auto* ac = std::get_if<CCapture>(&a->node)) {
    const auto& bc = std::get<CCapture>(b->node);
    nm.bindPair(ac->q, bc.q);
    return aeqCR(ac->body, bc.body, nm);
  }
  return std::holds_alternative<CRaise>(a->node);
}

bool aeqCR(const CompResponse& a, const CompResponse& b, NameMap nm) {
  if (a.chain.size() != b.chain.size()) return false;
  for (std::size_t i = 0; i < a.chain.size(); ++i)
    if (!aeqC(a.chain[i], b.chain[i], nm)) return false;
  if (a.tail.index() != b.tail.index()) return false;
  if (const auto* s = std::get_if<RSplat>(&a.tail)) return nm.sameName(s->q, std::get<RSplat>(b.tail).q);
  return std::holds_alternative<REnd>(a.tail);
}

}  // namespace

bool alphaEq(const MonoPtr& a, const MonoPtr& b) { return aeqM(a, b, {}); }
bool alphaEq(const CompPtr& a, const CompPtr& b) { return aeqC(a, b, {}); }
bool alphaEq(const CompResponse& a, const CompResponse& b) { return aeqCR(a, b, {}); }

}  // namespace copat
