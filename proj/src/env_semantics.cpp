#include "copat/env_semantics.hpp"

#include <any>
#include <memory>
#include <stdexcept>

namespace copat {

std::optional<MonoClosure> envLookup(const MonoClosEnv& env, const Name& x) {
  for (auto n = env; n; n = n->tail)
    if (n->head.first == x) return n->head.second;
  return std::nullopt;
}

std::optional<CompClosEntry> envLookup(const CompClosEnv& env, const Name& x) {
  for (auto n = env; n; n = n->tail)
    if (n->head.first == x) return n->head.second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Small-step reduction with an environment
// ---------------------------------------------------------------------------

namespace {

MonoClosEnv envExtend(MonoClosEnv env, const std::vector<std::pair<Name, MonoClosure>>& prefix) {
  for (const auto& b : prefix) env = cons(b, env);
  return env;
}

}  // namespace

EnvFollowup envReduceMono(const EnvMonoRedex& r, const ClosQuestion& q) {
  if (const auto* in = std::get_if<ERxIntrospect>(&r))
    return EFuNext{ERdReduced{MonoClosure{mApp(in->m, in->m), in->env}}, q};
  if (const auto* fv = std::get_if<ERxFreeVar>(&r)) {
    if (auto c = envLookup(fv->env, fv->x)) return EFuNext{ERdReduced{*c}, q};
    return EFuNext{ERdUnknown{fv->x}, q};
  }
  const auto& rs = std::get<ERxRespond>(r);
  for (std::size_t i = 0; i < rs.options.size(); ++i) {
    const MonoOption& opt = rs.options[i];
    CoMatch<MonoClosure> m = comatch(opt.lhs, q);
    if (const auto* fu = std::get_if<RemFollowup<MonoClosure>>(&m.suffix))
      return EFuNext{ERdReduced{MonoClosure{opt.rhs, envExtend(rs.env, m.prefix)}}, fu->q};
    if (const auto* un = std::get_if<RemUnasked>(&m.suffix)) {
      std::vector<MonoOption> rest(rs.options.begin() + i + 1, rs.options.end());
      return EFuMore{un->lhs, MonoClosure{opt.rhs, envExtend(nullptr, m.prefix)}, std::move(rest),
                     rs.env, q};
    }
    // mismatch: try the next option against the same question
  }
  return EFuNext{ERdUnhandled{}, q};
}

namespace {

struct EnvAsked {
  EnvMonoRedex r;
  ClosQuestion q;
};

EnvAsked envRefocusMono(MonoClosure c, ClosQuestion k) {
  for (;;) {
    const auto& node = c.openTerm->node;
    if (const auto* v = std::get_if<MVar>(&node)) return {ERxFreeVar{v->x, c.staticEnv}, k};
    if (const auto* d = std::get_if<MDot>(&node)) return {ERxIntrospect{d->self, c.staticEnv}, k};
    if (const auto* o = std::get_if<MObj>(&node)) return {ERxRespond{o->options, c.staticEnv}, k};
    if (const auto* a = std::get_if<MApp>(&node)) {
      k = askArg(MonoClosure{a->arg, c.staticEnv}, k);
      c.openTerm = a->fun;
      continue;
    }
    if (const auto* i = std::get_if<MIdx>(&node)) {
      k = askIdx(i->index, k);
      c.openTerm = i->obj;
      continue;
    }
    throw std::logic_error("semantic leaf in environment evaluation");
  }
}

}  // namespace

std::optional<EnvMonoAnswer> evalEnvMonoSmallStep(const MonoPtr& m, long fuel) {
  EnvAsked d = envRefocusMono(MonoClosure{m, nullptr}, nullptr);
  for (;;) {
    if (fuel <= 0) return std::nullopt;
    --fuel;
    EnvFollowup fu = envReduceMono(d.r, d.q);
    if (auto* more = std::get_if<EFuMore>(&fu))
      return EnvMonoAnswer{
          EnvMonoUnder{more->lhs, more->rhs, std::move(more->options), more->env, more->q}};
    auto& next = std::get<EFuNext>(fu);
    if (const auto* rd = std::get_if<ERdReduced>(&next.r)) {
      d = envRefocusMono(rd->c, next.q);
      continue;
    }
    if (const auto* un = std::get_if<ERdUnknown>(&next.r))
      return EnvMonoAnswer{EnvMonoStuck{un->x, next.q}};
    return EnvMonoAnswer{EnvMonoRaise{next.q}};
  }
}

CanonicalMono canonicalize(const EnvMonoAnswer& a) {
  if (const auto* r = std::get_if<EnvMonoRaise>(&a)) return canonRaise(skeletonOf(r->q));
  if (const auto* s = std::get_if<EnvMonoStuck>(&a)) return canonStuck(s->x, skeletonOf(s->q));
  return canonUnder();
}

// ---------------------------------------------------------------------------
// Environment-passing machine for the monolithic calculus
// ---------------------------------------------------------------------------

std::variant<EnvMonoMachineState, EnvMonoAnswer> stepEnvMonoMachine(const EnvMonoMachineState& s) {
  if (const auto* e = std::get_if<EnvMonoEval>(&s)) {
    const auto& node = e->focus->node;
    if (const auto* v = std::get_if<MVar>(&node)) {
      if (auto c = envLookup(e->env, v->x))
        return EnvMonoMachineState{EnvMonoEval{c->openTerm, c->staticEnv, e->k}};
      return EnvMonoAnswer{EnvMonoStuck{v->x, e->k}};
    }
    if (const auto* d = std::get_if<MDot>(&node))
      return EnvMonoMachineState{
          EnvMonoEval{d->self, e->env, askArg(MonoClosure{d->self, e->env}, e->k)}};
    if (const auto* o = std::get_if<MObj>(&node)) {
      if (o->options.empty()) return EnvMonoAnswer{EnvMonoRaise{e->k}};
      std::vector<MonoOption> rest(o->options.begin() + 1, o->options.end());
      return EnvMonoMachineState{EnvMonoComatching{o->options.front().lhs, e->k, nullptr,
                                                   o->options.front().rhs, std::move(rest), e->env,
                                                   e->k}};
    }
    if (const auto* a = std::get_if<MApp>(&node))
      return EnvMonoMachineState{
          EnvMonoEval{a->fun, e->env, askArg(MonoClosure{a->arg, e->env}, e->k)}};
    if (const auto* i = std::get_if<MIdx>(&node))
      return EnvMonoMachineState{EnvMonoEval{i->obj, e->env, askIdx(i->index, e->k)}};
    throw std::logic_error("semantic leaf in environment evaluation");
  }
  const auto& cm = std::get<EnvMonoComatching>(s);
  if (!cm.lhs)
    return EnvMonoMachineState{EnvMonoEval{cm.rhs, listConcat(cm.matched, cm.env), cm.ctx}};
  if (!cm.ctx)
    return EnvMonoAnswer{
        EnvMonoUnder{cm.lhs, MonoClosure{cm.rhs, cm.matched}, cm.options, cm.env, cm.saved}};
  if (cm.lhs->head.kind == CopatFrame::Kind::Bind) {
    if (const auto* a = std::get_if<ArgFrame<MonoClosure>>(&cm.ctx->head))
      return EnvMonoMachineState{EnvMonoComatching{
          cm.lhs->tail, cm.ctx->tail, cons(std::make_pair(cm.lhs->head.name, a->payload), cm.matched),
          cm.rhs, cm.options, cm.env, cm.saved}};
  } else if (const auto* j = std::get_if<IdxFrame>(&cm.ctx->head)) {
    if (j->index == cm.lhs->head.name)
      return EnvMonoMachineState{EnvMonoComatching{cm.lhs->tail, cm.ctx->tail, cm.matched, cm.rhs,
                                                   cm.options, cm.env, cm.saved}};
  }
  return EnvMonoMachineState{EnvMonoEval{mObj(cm.options), cm.env, cm.saved}};
}

std::optional<EnvMonoAnswer> runEnvMonoMachine(const MonoPtr& m, long fuel,
                                               const EnvMonoTraceHook& trace) {
  EnvMonoMachineState s = EnvMonoEval{m, nullptr, nullptr};
  for (;;) {
    if (trace) trace(s);
    if (fuel <= 0) return std::nullopt;
    --fuel;
    auto next = stepEnvMonoMachine(s);
    if (auto* a = std::get_if<EnvMonoAnswer>(&next)) return std::move(*a);
    s = std::move(std::get<EnvMonoMachineState>(next));
  }
}

// ---------------------------------------------------------------------------
// Environment-parameterized CPS, monolithic calculus
// ---------------------------------------------------------------------------

namespace {

struct CpsFuelOut {};

struct FuelCell {
  long left;
  void tick() {
    if (left <= 0) throw CpsFuelOut{};
    --left;
  }
};
using Fuel = std::shared_ptr<FuelCell>;

using MonoCpsEnv = PList<std::pair<Name, MonoCpsTerm>>;
using MonoCpsOption = std::function<MonoCpsAnswer(MonoCpsQuestion)>;

MonoCpsTerm envCpsTerm(const MonoPtr& m, const MonoCpsEnv& env, const Fuel& fuel);
MonoCpsAnswer envCpsOptions(const std::vector<MonoOption>& os, const MonoCpsEnv& env,
                            const MonoCpsQuestion& q, const Fuel& fuel);

MonoCpsAnswer envCpsComatch(const Copattern& lhs, const MonoPtr& rhs, const MonoCpsEnv& env,
                            const MonoCpsQuestion& q, const MonoCpsOption& os,
                            const MonoCpsQuestion& k, const Fuel& fuel) {
  fuel->tick();
  if (!lhs) return envCpsTerm(rhs, env, fuel)(k);
  if (!k) {
    return MonoCpsAnswer{CpsUnder{[lhs, rhs, env, q, os, fuel](MonoCpsQuestion more) {
      return envCpsComatch(lhs, rhs, env, q, os, more, fuel);
    }}};
  }
  if (lhs->head.kind == CopatFrame::Kind::Bind) {
    if (const auto* y = std::get_if<ArgFrame<MonoCpsArg>>(&k->head)) {
      MonoCpsEnv env2 = cons(std::make_pair(lhs->head.name, y->payload.use), env);
      return envCpsComatch(lhs->tail, rhs, env2, q, os, k->tail, fuel);
    }
  } else if (const auto* j = std::get_if<IdxFrame>(&k->head)) {
    if (j->index == lhs->head.name) return envCpsComatch(lhs->tail, rhs, env, q, os, k->tail, fuel);
  }
  return os(q);
}

MonoCpsAnswer envCpsOptions(const std::vector<MonoOption>& os, const MonoCpsEnv& env,
                            const MonoCpsQuestion& q, const Fuel& fuel) {
  if (os.empty()) return MonoCpsAnswer{CpsRaise{q}};
  std::vector<MonoOption> rest(os.begin() + 1, os.end());
  MonoCpsOption fallback = [rest, env, fuel](MonoCpsQuestion saved) {
    return envCpsOptions(rest, env, saved, fuel);
  };
  return envCpsComatch(os.front().lhs, os.front().rhs, env, q, fallback, q, fuel);
}

MonoCpsTerm envCpsTerm(const MonoPtr& m, const MonoCpsEnv& env, const Fuel& fuel) {
  return [m, env, fuel](MonoCpsQuestion k) -> MonoCpsAnswer {
    fuel->tick();
    if (const auto* v = std::get_if<MVar>(&m->node)) {
      for (auto n = env; n; n = n->tail)
        if (n->head.first == v->x) return n->head.second(k);
      return MonoCpsAnswer{CpsStuck{v->x, k}};
    }
    if (const auto* s = std::get_if<MSem>(&m->node))
      return std::any_cast<const MonoCpsTerm&>(s->denot)(k);
    if (const auto* d = std::get_if<MDot>(&m->node))
      return envCpsTerm(d->self, env, fuel)(askArg(MonoCpsArg{envCpsTerm(d->self, env, fuel)}, k));
    if (const auto* o = std::get_if<MObj>(&m->node)) return envCpsOptions(o->options, env, k, fuel);
    if (const auto* a = std::get_if<MApp>(&m->node))
      return envCpsTerm(a->fun, env, fuel)(askArg(MonoCpsArg{envCpsTerm(a->arg, env, fuel)}, k));
    const auto& i = std::get<MIdx>(m->node);
    return envCpsTerm(i.obj, env, fuel)(askIdx(i.index, k));
  };
}

}  // namespace

std::optional<MonoCpsAnswer> evalEnvMonoCps(const MonoPtr& m, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    return envCpsTerm(m, nullptr, cell)(nullptr);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Environment-parameterized CPS, compositional calculus
// ---------------------------------------------------------------------------

namespace {

struct CompCpsSub {
  std::variant<CompCpsTerm, CompCpsQuestion> v;
};
using CompCpsEnv = PList<std::pair<Name, CompCpsSub>>;

CompCpsTerm ecTerm(const CompPtr& m, const CompCpsEnv& env, const Fuel& fuel);
CompCpsAnswer ecResponse(const CompResponse& r, const CompCpsEnv& env, const Fuel& fuel);
CompCpsAnswer ecOption(const CompOptPtr& o, const CompCpsEnv& env, const CompCpsQuestion& q,
                       const CompCpsTerm& f, const CompCpsQuestion& k, const Fuel& fuel);

CompCpsAnswer ecThen(const CompCpsTerm& f, CompCpsAnswer a) {
  if (const auto* fin = std::get_if<CCpsFinal>(&a.v)) return f(fin->q);
  if (auto* st = std::get_if<CCpsStuck>(&a.v)) {
    st->meta.insert(st->meta.begin(), f);
    return a;
  }
  auto& co = std::get<CCpsCoStuck>(a.v);
  co.meta.insert(co.meta.begin(), f);
  return a;
}

CompCpsAnswer ecResponse(const CompResponse& r, const CompCpsEnv& env, const Fuel& fuel) {
  CompCpsAnswer a = [&] {
    if (const auto* s = std::get_if<RSplat>(&r.tail)) {
      for (auto n = env; n; n = n->tail) {
        if (n->head.first != s->q) continue;
        if (const auto* q = std::get_if<CompCpsQuestion>(&n->head.second.v))
          return CompCpsAnswer{CCpsFinal{*q}};
        break;
      }
      return CompCpsAnswer{CCpsCoStuck{{}, s->q}};
    }
    if (const auto* q = std::get_if<RSplatSem>(&r.tail))
      return CompCpsAnswer{CCpsFinal{std::any_cast<const CompCpsQuestion&>(q->denot)}};
    return CompCpsAnswer{CCpsFinal{nullptr}};
  }();
  for (auto it = r.chain.rbegin(); it != r.chain.rend(); ++it)
    a = ecThen(ecTerm(*it, env, fuel), a);
  return a;
}

CompCpsTerm ecTerm(const CompPtr& m, const CompCpsEnv& env, const Fuel& fuel) {
  return [m, env, fuel](CompCpsQuestion k) -> CompCpsAnswer {
    fuel->tick();
    if (const auto* v = std::get_if<CVar>(&m->node)) {
      for (auto n = env; n; n = n->tail) {
        if (n->head.first != v->x) continue;
        if (const auto* t = std::get_if<CompCpsTerm>(&n->head.second.v)) return (*t)(k);
        break;
      }
      return CompCpsAnswer{CCpsStuck{{}, v->x, k}};
    }
    if (const auto* s = std::get_if<CSem>(&m->node))
      return std::any_cast<const CompCpsTerm&>(s->denot)(k);
    if (const auto* d = std::get_if<CDot>(&m->node))
      return ecTerm(d->self, env, fuel)(askArg(CompCpsArg{ecTerm(d->self, env, fuel)}, k));
    if (const auto* a = std::get_if<CApp>(&m->node))
      return ecTerm(a->fun, env, fuel)(askArg(CompCpsArg{ecTerm(a->arg, env, fuel)}, k));
    if (const auto* i = std::get_if<CIdx>(&m->node))
      return ecTerm(i->obj, env, fuel)(askIdx(i->index, k));
    if (std::holds_alternative<CRaise>(m->node)) return CompCpsAnswer{CCpsFinal{k}};
    if (const auto* c = std::get_if<CCapture>(&m->node))
      return ecResponse(c->body, cons(std::make_pair(c->q, CompCpsSub{k}), env), fuel);
    const auto& h = std::get<CHandle>(m->node);
    return ecOption(h.option, env, k, ecTerm(h.fallback, env, fuel), k, fuel);
  };
}

// The option translation here keeps the saved question q so a mismatch can
// restart the failure alternative from it.
CompCpsAnswer ecOption(const CompOptPtr& o, const CompCpsEnv& env, const CompCpsQuestion& q,
                       const CompCpsTerm& f, const CompCpsQuestion& k, const Fuel& fuel) {
  fuel->tick();
  if (const auto* d = std::get_if<ODone>(&o->node)) {
    // The failure alternative replays the consumed frames (the saved question
    // up to the current suffix), matching the substitution-based translation.
    std::vector<QFrame<CompCpsArg>> consumed;
    for (auto n = q; n && n != k; n = n->tail) consumed.push_back(n->head);
    CompCpsTerm fx = [f, consumed](CompCpsQuestion k2) {
      for (auto it = consumed.rbegin(); it != consumed.rend(); ++it) k2 = cons(*it, k2);
      return f(k2);
    };
    return ecTerm(d->rhs, cons(std::make_pair(d->failVar, CompCpsSub{fx}), env), fuel)(k);
  }
  if (const auto* p = std::get_if<OPop>(&o->node)) {
    if (k) {
      if (const auto* y = std::get_if<ArgFrame<CompCpsArg>>(&k->head)) {
        CompCpsEnv env2 = cons(std::make_pair(p->x, CompCpsSub{y->payload.use}), env);
        return ecOption(p->rest, env2, q, f, k->tail, fuel);
      }
    }
    return f(q);
  }
  const auto& g = std::get<OGet>(o->node);
  if (k) {
    if (const auto* j = std::get_if<IdxFrame>(&k->head); j && j->index == g.index)
      return ecOption(g.rest, env, q, f, k->tail, fuel);
  }
  return f(q);
}

}  // namespace

std::optional<CompCpsAnswer> runEnvCompCps(const CompResponse& r, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    return ecResponse(r, nullptr, cell);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

std::optional<CompCpsAnswer> evalEnvCompCps(const CompPtr& m, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    return ecTerm(m, nullptr, cell)(nullptr);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

std::optional<CompCpsAnswer> tryEnvCompCps(const CompOptPtr& o, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    return ecOption(o, nullptr, nullptr, ecTerm(cRaise(), nullptr, cell), nullptr, cell);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Environment-passing machine for the compositional calculus
// ---------------------------------------------------------------------------

CanonicalComp canonicalize(const EnvCompAnswer& a) {
  if (const auto* f = std::get_if<EnvCFinalA>(&a)) return canonFinal(skeletonOf(f->q));
  if (const auto* s = std::get_if<EnvCStuckA>(&a))
    return canonStuck(s->meta.size(), s->x, skeletonOf(s->q));
  const auto& c = std::get<EnvCCoStuckA>(a);
  return canonCoStuck(c.meta.size(), c.k);
}

std::variant<EnvCompMachineState, EnvCompAnswer> stepEnvCompMachine(const EnvCompMachineState& s) {
  if (const auto* d = std::get_if<EnvCDelimSt>(&s)) {
    if (!d->r.chain.empty()) {
      CompResponse rest = d->r;
      CompPtr m = rest.chain.front();
      rest.chain.erase(rest.chain.begin());
      return EnvCompMachineState{
          EnvCDelimSt{std::move(rest), d->env, cons(CompClosure{m, d->env}, d->s)}};
    }
    if (const auto* sp = std::get_if<RSplat>(&d->r.tail)) {
      if (auto e = envLookup(d->env, sp->q)) {
        const auto* q = std::get_if<CompClosQuestion>(&e->v);
        if (!q) throw std::logic_error("covariable bound to a term closure");
        if (d->s)
          return EnvCompMachineState{
              EnvCRefocusSt{d->s->head.openTerm, d->s->head.staticEnv, *q, d->s->tail}};
        return EnvCompAnswer{EnvCFinalA{*q}};
      }
      return EnvCompAnswer{EnvCCoStuckA{listToVector(d->s), sp->q}};
    }
    if (std::holds_alternative<RSplatSem>(d->r.tail))
      throw std::logic_error("semantic leaf in environment evaluation");
    // End
    if (d->s)
      return EnvCompMachineState{
          EnvCRefocusSt{d->s->head.openTerm, d->s->head.staticEnv, nullptr, d->s->tail}};
    return EnvCompAnswer{EnvCFinalA{nullptr}};
  }
  if (const auto* rf = std::get_if<EnvCRefocusSt>(&s)) {
    const CompPtr& m = rf->m;
    if (const auto* v = std::get_if<CVar>(&m->node)) {
      if (auto e = envLookup(rf->env, v->x)) {
        const auto* c = std::get_if<CompClosure>(&e->v);
        if (!c) throw std::logic_error("term variable bound to a question");
        return EnvCompMachineState{EnvCRefocusSt{c->openTerm, c->staticEnv, rf->k, rf->s}};
      }
      return EnvCompAnswer{EnvCStuckA{listToVector(rf->s), v->x, rf->k}};
    }
    if (const auto* dd = std::get_if<CDot>(&m->node))
      return EnvCompMachineState{EnvCRefocusSt{
          dd->self, rf->env, askArg(CompClosure{dd->self, rf->env}, rf->k), rf->s}};
    if (const auto* a = std::get_if<CApp>(&m->node))
      return EnvCompMachineState{
          EnvCRefocusSt{a->fun, rf->env, askArg(CompClosure{a->arg, rf->env}, rf->k), rf->s}};
    if (const auto* i = std::get_if<CIdx>(&m->node))
      return EnvCompMachineState{EnvCRefocusSt{i->obj, rf->env, askIdx(i->index, rf->k), rf->s}};
    if (const auto* c = std::get_if<CCapture>(&m->node))
      return EnvCompMachineState{
          EnvCDelimSt{c->body, cons(std::make_pair(c->q, CompClosEntry{rf->k}), rf->env), rf->s}};
    if (const auto* h = std::get_if<CHandle>(&m->node))
      return EnvCompMachineState{EnvCComatchSt{h->option, rf->env, rf->k,
                                               CompClosure{h->fallback, rf->env}, rf->k, rf->s}};
    if (std::holds_alternative<CRaise>(m->node)) {
      if (rf->s)
        return EnvCompMachineState{
            EnvCRefocusSt{rf->s->head.openTerm, rf->s->head.staticEnv, rf->k, rf->s->tail}};
      return EnvCompAnswer{EnvCFinalA{rf->k}};
    }
    throw std::logic_error("semantic leaf in environment evaluation");
  }
  const auto& cm = std::get<EnvCComatchSt>(s);
  if (const auto* d = std::get_if<ODone>(&cm.o->node)) {
    // The failure closure must carry the consumed frames (saved question up
    // to the current suffix), mirroring the substitution machine's extended
    // failure term. Argument payloads enter via reserved spine names, which
    // cannot clash with source binders.
    CompPtr open = cm.m.openTerm;
    CompClosEnv fenv = cm.m.staticEnv;
    int spine = 0;
    for (auto n = cm.saved; n && n != cm.k; n = n->tail) {
      if (const auto* a = std::get_if<ArgFrame<CompClosure>>(&n->head)) {
        Name h = "#arg" + std::to_string(spine++);
        fenv = cons(std::make_pair(h, CompClosEntry{a->payload}), fenv);
        open = cApp(open, cVar(h));
      } else {
        open = cIdx(open, std::get<IdxFrame>(n->head).index);
      }
    }
    return EnvCompMachineState{EnvCRefocusSt{
        d->rhs, cons(std::make_pair(d->failVar, CompClosEntry{CompClosure{open, fenv}}), cm.env),
        cm.k, cm.s}};
  }
  if (const auto* p = std::get_if<OPop>(&cm.o->node)) {
    if (cm.k) {
      if (const auto* n = std::get_if<ArgFrame<CompClosure>>(&cm.k->head))
        return EnvCompMachineState{
            EnvCComatchSt{p->rest, cons(std::make_pair(p->x, CompClosEntry{n->payload}), cm.env),
                          cm.k->tail, cm.m, cm.saved, cm.s}};
    }
  } else {
    const auto& g = std::get<OGet>(cm.o->node);
    if (cm.k) {
      if (const auto* j = std::get_if<IdxFrame>(&cm.k->head); j && j->index == g.index)
        return EnvCompMachineState{
            EnvCComatchSt{g.rest, cm.env, cm.k->tail, cm.m, cm.saved, cm.s}};
    }
  }
  return EnvCompMachineState{EnvCRefocusSt{cm.m.openTerm, cm.m.staticEnv, cm.saved, cm.s}};
}

namespace {

std::optional<EnvCompAnswer> driveEnvComp(EnvCompMachineState s, long fuel,
                                          const EnvCompTraceHook& trace) {
  for (;;) {
    if (trace) trace(s);
    if (fuel <= 0) return std::nullopt;
    --fuel;
    auto next = stepEnvCompMachine(s);
    if (auto* a = std::get_if<EnvCompAnswer>(&next)) return std::move(*a);
    s = std::move(std::get<EnvCompMachineState>(next));
  }
}

}  // namespace

std::optional<EnvCompAnswer> runEnvCompMachine(const CompResponse& r, long fuel,
                                               const EnvCompTraceHook& trace) {
  return driveEnvComp(EnvCDelimSt{r, nullptr, nullptr}, fuel, trace);
}
std::optional<EnvCompAnswer> evalEnvCompMachine(const CompPtr& m, long fuel,
                                                const EnvCompTraceHook& trace) {
  return driveEnvComp(EnvCRefocusSt{m, nullptr, nullptr, nullptr}, fuel, trace);
}
std::optional<EnvCompAnswer> tryEnvCompMachine(const CompOptPtr& o, long fuel,
                                               const EnvCompTraceHook& trace) {
  return driveEnvComp(
      EnvCComatchSt{o, nullptr, nullptr, CompClosure{cRaise(), nullptr}, nullptr, nullptr}, fuel,
      trace);
}

}  // namespace copat
