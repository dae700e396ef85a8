#include "copat/comp_semantics.hpp"

#include <any>
#include <memory>

namespace copat {

CanonicalComp canonicalize(const CompSynAnswer& a) {
  if (const auto* f = std::get_if<CFinalA>(&a)) return canonFinal(skeletonOf(f->q));
  if (const auto* s = std::get_if<CStuckA>(&a)) return canonStuck(s->meta.size(), s->x, skeletonOf(s->q));
  const auto& c = std::get<CCoStuckA>(a);
  return canonCoStuck(c.meta.size(), c.k);
}

CanonicalComp canonicalize(const CompCpsAnswer& a) {
  if (const auto* f = std::get_if<CCpsFinal>(&a.v)) return canonFinal(skeletonOf(f->q));
  if (const auto* s = std::get_if<CCpsStuck>(&a.v)) return canonStuck(s->meta.size(), s->x, skeletonOf(s->q));
  const auto& c = std::get<CCpsCoStuck>(a.v);
  return canonCoStuck(c.meta.size(), c.k);
}

// ---------------------------------------------------------------------------
// CPS evaluator
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

CompCpsTerm cpsTerm(const CompPtr& m, const Fuel& fuel);
CompCpsAnswer cpsResponse(const CompResponse& r, const Fuel& fuel);
CompCpsTerm cpsOption(const CompOptPtr& o, const CompCpsTerm& f, const Fuel& fuel);

// f <!> a: feed a final question to the handler, or record it as pending.
CompCpsAnswer thenCps(const CompCpsTerm& f, CompCpsAnswer a) {
  if (const auto* fin = std::get_if<CCpsFinal>(&a.v)) return f(fin->q);
  if (auto* st = std::get_if<CCpsStuck>(&a.v)) {
    st->meta.insert(st->meta.begin(), f);
    return a;
  }
  auto& co = std::get<CCpsCoStuck>(a.v);
  co.meta.insert(co.meta.begin(), f);
  return a;
}

CompCpsAnswer cpsResponse(const CompResponse& r, const Fuel& fuel) {
  CompCpsAnswer a = [&] {
    if (const auto* s = std::get_if<RSplat>(&r.tail)) return CompCpsAnswer{CCpsCoStuck{{}, s->q}};
    if (const auto* q = std::get_if<RSplatSem>(&r.tail))
      return CompCpsAnswer{CCpsFinal{std::any_cast<const CompCpsQuestion&>(q->denot)}};
    return CompCpsAnswer{CCpsFinal{nullptr}};
  }();
  for (auto it = r.chain.rbegin(); it != r.chain.rend(); ++it) a = thenCps(cpsTerm(*it, fuel), a);
  return a;
}

CompCpsTerm cpsTerm(const CompPtr& m, const Fuel& fuel) {
  return [m, fuel](CompCpsQuestion k) -> CompCpsAnswer {
    fuel->tick();
    if (const auto* v = std::get_if<CVar>(&m->node)) return CompCpsAnswer{CCpsStuck{{}, v->x, k}};
    if (const auto* s = std::get_if<CSem>(&m->node))
      return std::any_cast<const CompCpsTerm&>(s->denot)(k);
    if (const auto* d = std::get_if<CDot>(&m->node))
      return cpsTerm(d->self, fuel)(askArg(CompCpsArg{cpsTerm(d->self, fuel)}, k));
    if (const auto* a = std::get_if<CApp>(&m->node))
      return cpsTerm(a->fun, fuel)(askArg(CompCpsArg{cpsTerm(a->arg, fuel)}, k));
    if (const auto* i = std::get_if<CIdx>(&m->node)) return cpsTerm(i->obj, fuel)(askIdx(i->index, k));
    if (std::holds_alternative<CRaise>(m->node)) return CompCpsAnswer{CCpsFinal{k}};
    if (const auto* c = std::get_if<CCapture>(&m->node)) {
      CompResponse body = substCompResponse(c->body, {{c->q, ResponseSub{CompResponse{{}, RSplatSem{std::any(k)}}}}});
      return cpsResponse(body, fuel);
    }
    const auto& h = std::get<CHandle>(m->node);
    return cpsOption(h.option, cpsTerm(h.fallback, fuel), fuel)(k);
  };
}

CompCpsTerm cpsOption(const CompOptPtr& o, const CompCpsTerm& f, const Fuel& fuel) {
  if (const auto* d = std::get_if<ODone>(&o->node)) {
    CompPtr body = substComp(d->rhs, {{d->failVar, TermSub{cSem(std::any(f))}}});
    return cpsTerm(body, fuel);
  }
  if (const auto* p = std::get_if<OPop>(&o->node)) {
    CompOptPtr rest = p->rest;
    Name x = p->x;
    return [rest, x, f, fuel](CompCpsQuestion k) -> CompCpsAnswer {
      fuel->tick();
      if (k) {
        if (const auto* y = std::get_if<ArgFrame<CompCpsArg>>(&k->head)) {
          CompOptPtr o2 = substCompOption(rest, {{x, TermSub{cSem(std::any(y->payload.use))}}});
          CompCpsArg yy = y->payload;
          CompCpsTerm f2 = [f, yy](CompCpsQuestion q) { return f(askArg(yy, q)); };
          return cpsOption(o2, f2, fuel)(k->tail);
        }
      }
      return f(k);
    };
  }
  const auto& g = std::get<OGet>(o->node);
  CompOptPtr rest = g.rest;
  Name index = g.index;
  return [rest, index, f, fuel](CompCpsQuestion k) -> CompCpsAnswer {
    fuel->tick();
    if (k) {
      if (const auto* j = std::get_if<IdxFrame>(&k->head); j && j->index == index) {
        CompCpsTerm f2 = [f, index](CompCpsQuestion q) { return f(askIdx(index, q)); };
        return cpsOption(rest, f2, fuel)(k->tail);
      }
    }
    return f(k);
  };
}

CompCpsQuestion semanticQuestion(const CompQuestion& k, const Fuel& fuel) {
  std::vector<QFrame<CompCpsArg>> frames;
  for (auto n = k; n; n = n->tail) {
    if (const auto* a = std::get_if<ArgFrame<CompPtr>>(&n->head))
      frames.push_back(ArgFrame<CompCpsArg>{CompCpsArg{cpsTerm(a->payload, fuel)}});
    else
      frames.push_back(IdxFrame{std::get<IdxFrame>(n->head).index});
  }
  return listFromVector(frames);
}

}  // namespace

std::optional<CompCpsAnswer> runCompCps(const CompResponse& r, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    return cpsResponse(r, cell);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

std::optional<CompCpsAnswer> evalCompCps(const CompPtr& m, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    return cpsTerm(m, cell)(nullptr);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

std::optional<CompCpsAnswer> tryCompCps(const CompOptPtr& o, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    return cpsOption(o, cpsTerm(cRaise(), cell), cell)(nullptr);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

namespace {

// Opt: the double-pass translation; the saved question restores the failure's
// starting point on mismatch.
CompCpsAnswer legacyOption(const CompOptPtr& o, const CompCpsQuestion& savedQ, const CompCpsTerm& f,
                           const CompCpsQuestion& k, const Fuel& fuel) {
  fuel->tick();
  if (const auto* d = std::get_if<ODone>(&o->node)) {
    // The bound failure restarts from the saved question: the frames consumed
    // so far (the saved question up to the current suffix) are replayed.
    std::vector<QFrame<CompCpsArg>> consumed;
    for (auto n = savedQ; n && n != k; n = n->tail) consumed.push_back(n->head);
    CompCpsTerm fx = [f, consumed](CompCpsQuestion q) {
      for (auto it = consumed.rbegin(); it != consumed.rend(); ++it) q = cons(*it, q);
      return f(q);
    };
    CompPtr body = substComp(d->rhs, {{d->failVar, TermSub{cSem(std::any(fx))}}});
    return cpsTerm(body, fuel)(k);
  }
  if (const auto* p = std::get_if<OPop>(&o->node)) {
    if (k) {
      if (const auto* y = std::get_if<ArgFrame<CompCpsArg>>(&k->head)) {
        CompOptPtr o2 = substCompOption(p->rest, {{p->x, TermSub{cSem(std::any(y->payload.use))}}});
        return legacyOption(o2, savedQ, f, k->tail, fuel);
      }
    }
    return f(savedQ);
  }
  const auto& g = std::get<OGet>(o->node);
  if (k) {
    if (const auto* j = std::get_if<IdxFrame>(&k->head); j && j->index == g.index)
      return legacyOption(g.rest, savedQ, f, k->tail, fuel);
  }
  return f(savedQ);
}

}  // namespace

std::optional<CompCpsAnswer> legacyOptCps(const CompOptPtr& o, const CompQuestion& k, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    CompCpsQuestion sk = semanticQuestion(k, cell);
    return legacyOption(o, sk, cpsTerm(cRaise(), cell), sk, cell);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

std::optional<CompCpsAnswer> primeOptCps(const CompOptPtr& o, const CompQuestion& k, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    CompCpsQuestion sk = semanticQuestion(k, cell);
    return cpsOption(o, cpsTerm(cRaise(), cell), cell)(sk);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Abstract machine
// ---------------------------------------------------------------------------

CompSubstEntry subQSyn(const CompQuestion& k) {
  return ResponseSub{rThen(ask(cRaise(), k), rEnd())};
}

std::variant<CompMachineState, CompSynAnswer> stepCompMachine(const CompMachineState& s) {
  if (const auto* d = std::get_if<CDelimSt>(&s)) {
    if (!d->r.chain.empty()) {
      CompResponse rest = d->r;
      CompPtr m = rest.chain.front();
      rest.chain.erase(rest.chain.begin());
      return CompMachineState{CDelimSt{std::move(rest), cons(m, d->s)}};
    }
    if (const auto* sp = std::get_if<RSplat>(&d->r.tail))
      return CompSynAnswer{CCoStuckA{listToVector(d->s), sp->q}};
    // End
    if (!d->s) return CompSynAnswer{CFinalA{nullptr}};
    return CompMachineState{CRefocusSt{d->s->head, nullptr, d->s->tail}};
  }
  if (const auto* rf = std::get_if<CRefocusSt>(&s)) {
    const CompPtr& m = rf->m;
    if (const auto* v = std::get_if<CVar>(&m->node))
      return CompSynAnswer{CStuckA{listToVector(rf->s), v->x, rf->k}};
    if (const auto* dd = std::get_if<CDot>(&m->node))
      return CompMachineState{CRefocusSt{dd->self, askArg(dd->self, rf->k), rf->s}};
    if (const auto* a = std::get_if<CApp>(&m->node))
      return CompMachineState{CRefocusSt{a->fun, askArg(a->arg, rf->k), rf->s}};
    if (const auto* i = std::get_if<CIdx>(&m->node))
      return CompMachineState{CRefocusSt{i->obj, askIdx(i->index, rf->k), rf->s}};
    if (const auto* c = std::get_if<CCapture>(&m->node))
      return CompMachineState{CDelimSt{substCompResponse(c->body, {{c->q, subQSyn(rf->k)}}), rf->s}};
    if (const auto* h = std::get_if<CHandle>(&m->node))
      return CompMachineState{CComatchSt{h->option, h->fallback, rf->k, rf->s}};
    // Raise
    if (rf->s) return CompMachineState{CRefocusSt{rf->s->head, rf->k, rf->s->tail}};
    return CompSynAnswer{CFinalA{rf->k}};
  }
  const auto& cm = std::get<CComatchSt>(s);
  if (const auto* d = std::get_if<ODone>(&cm.o->node))
    return CompMachineState{
        CRefocusSt{substComp(d->rhs, {{d->failVar, TermSub{cm.m}}}), cm.k, cm.s}};
  if (const auto* p = std::get_if<OPop>(&cm.o->node)) {
    if (cm.k) {
      if (const auto* n = std::get_if<ArgFrame<CompPtr>>(&cm.k->head)) {
        CompOptPtr o2 = substCompOption(p->rest, {{p->x, TermSub{n->payload}}});
        return CompMachineState{CComatchSt{o2, cApp(cm.m, n->payload), cm.k->tail, cm.s}};
      }
    }
  } else {
    const auto& g = std::get<OGet>(cm.o->node);
    if (cm.k) {
      if (const auto* j = std::get_if<IdxFrame>(&cm.k->head); j && j->index == g.index)
        return CompMachineState{CComatchSt{g.rest, cIdx(cm.m, g.index), cm.k->tail, cm.s}};
    }
  }
  return CompMachineState{CRefocusSt{cm.m, cm.k, cm.s}};
}

namespace {

std::optional<CompSynAnswer> driveMachine(CompMachineState s, long fuel, const CompTraceHook& trace) {
  for (;;) {
    if (trace) trace(s);
    if (fuel <= 0) return std::nullopt;
    --fuel;
    auto next = stepCompMachine(s);
    if (auto* a = std::get_if<CompSynAnswer>(&next)) return std::move(*a);
    s = std::move(std::get<CompMachineState>(next));
  }
}

}  // namespace

std::optional<CompSynAnswer> runCompMachine(const CompResponse& r, long fuel, const CompTraceHook& trace) {
  return driveMachine(CDelimSt{r, nullptr}, fuel, trace);
}
std::optional<CompSynAnswer> evalCompMachine(const CompPtr& m, long fuel, const CompTraceHook& trace) {
  return driveMachine(CRefocusSt{m, nullptr, nullptr}, fuel, trace);
}
std::optional<CompSynAnswer> tryCompMachine(const CompOptPtr& o, long fuel, const CompTraceHook& trace) {
  return driveMachine(CComatchSt{o, cRaise(), nullptr, nullptr}, fuel, trace);
}

// ---------------------------------------------------------------------------
// Small-step interpreter
// ---------------------------------------------------------------------------

CompRdTerm reduceComp(const CompRxTerm& rx) {
  if (const auto* in = std::get_if<CRxIntrospect>(&rx)) return CRdT{cApp(in->m, in->m)};
  if (const auto* tr = std::get_if<CRxTry>(&rx))
    return CRdT{substComp(tr->n, {{tr->x, TermSub{tr->m}}})};
  if (const auto* pop = std::get_if<CRxPop>(&rx)) {
    if (const auto* arg = std::get_if<CoFrameArg>(&pop->co.coframe)) {
      CompOptPtr o2 = substCompOption(pop->co.success, {{arg->x, TermSub{pop->n}}});
      return CRdT{cHandle(o2, cApp(pop->co.failure, pop->n))};
    }
    return CRdT{cApp(pop->co.failure, pop->n)};
  }
  if (const auto* get = std::get_if<CRxGet>(&rx)) {
    if (const auto* at = std::get_if<CoFrameAt>(&get->co.coframe); at && at->index == get->j)
      return CRdT{cHandle(get->co.success, cIdx(get->co.failure, at->index))};
    return CRdT{cIdx(get->co.failure, get->j)};
  }
  return CRdUnknownA{std::get<CRxFreeVar>(rx).x};
}

CompRdResponse handleComp(const CompRxResponse& rx) {
  if (const auto* fc = std::get_if<CRxFreeCoVar>(&rx)) return CRdUnknownQ{fc->k};
  if (const auto* rs = std::get_if<CRxReset>(&rx)) return CRdR{rThen(ask(rs->m, rs->q), rEnd())};
  if (const auto* sh = std::get_if<CRxShift>(&rx))
    return CRdR{substCompResponse(sh->r, {{sh->k, subQSyn(sh->q)}})};
  const auto& u = std::get<CRxUnderCo>(rx);
  return CRdR{rThen(u.co.failure, rEnd())};
}

namespace {

struct ConsiderInward {
  Name x;
  CompPtr n;
  CompPtr m;
};
using Consider = std::variant<ConsiderInward, CoObject>;

Consider considerOpt(const CompOptPtr& o, const CompPtr& m) {
  if (const auto* d = std::get_if<ODone>(&o->node)) return ConsiderInward{d->failVar, d->rhs, m};
  if (const auto* p = std::get_if<OPop>(&o->node)) return CoObject{CoFrameArg{p->x}, p->rest, m};
  const auto& g = std::get<OGet>(o->node);
  return CoObject{CoFrameAt{g.index}, g.rest, m};
}

CompDecomp comatchCo(const CoObject& co, const CompQuestion& q) {
  if (!q) return DecompExternal{CRxUnderCo{co}};
  if (const auto* n = std::get_if<ArgFrame<CompPtr>>(&q->head))
    return DecompInternal{CRxPop{co, n->payload}, q->tail};
  return DecompInternal{CRxGet{co, std::get<IdxFrame>(q->head).index}, q->tail};
}

CompDecomp refocusComp(const CompPtr& m, CompQuestion k) {
  if (const auto* a = std::get_if<CApp>(&m->node)) return refocusComp(a->fun, askArg(a->arg, std::move(k)));
  if (const auto* i = std::get_if<CIdx>(&m->node))
    return refocusComp(i->obj, askIdx(i->index, std::move(k)));
  if (const auto* h = std::get_if<CHandle>(&m->node)) {
    Consider c = considerOpt(h->option, h->fallback);
    if (const auto* in = std::get_if<ConsiderInward>(&c))
      return DecompInternal{CRxTry{in->x, in->n, in->m}, std::move(k)};
    return comatchCo(std::get<CoObject>(c), k);
  }
  if (const auto* d = std::get_if<CDot>(&m->node))
    return DecompInternal{CRxIntrospect{d->self}, std::move(k)};
  if (const auto* c = std::get_if<CCapture>(&m->node))
    return DecompExternal{CRxShift{c->q, c->body, std::move(k)}};
  if (std::holds_alternative<CRaise>(m->node)) return DecompRaised{std::move(k)};
  return DecompInternal{CRxFreeVar{std::get<CVar>(m->node).x}, std::move(k)};
}

CompDelimit catchComp(CompDecomp d, std::vector<CompPtr> s) {
  if (auto* in = std::get_if<DecompInternal>(&d))
    return DelimAround{std::move(in->rx), std::move(in->q), std::move(s)};
  if (auto* ex = std::get_if<DecompExternal>(&d)) return DelimCaught{std::move(ex->rx), std::move(s)};
  auto& raised = std::get<DecompRaised>(d);
  if (!s.empty()) {
    CompPtr m = s.front();
    s.erase(s.begin());
    return DelimCaught{CRxReset{m, std::move(raised.q)}, std::move(s)};
  }
  return DelimUncaught{std::move(raised.q)};
}

}  // namespace

CompDecomp decompComp(const CompPtr& m) { return refocusComp(m, nullptr); }

namespace {

// delimitComp(unwindComp(outer, r)) without rebuilding the response
CompDelimit delimitOnto(const CompResponse& r, const std::vector<CompPtr>& outer) {
  std::vector<CompPtr> s;
  for (const auto& m : r.chain) s.insert(s.begin(), m);
  s.insert(s.end(), outer.begin(), outer.end());
  if (const auto* sp = std::get_if<RSplat>(&r.tail)) return DelimCaught{CRxFreeCoVar{sp->q}, std::move(s)};
  // End tail
  if (!s.empty()) {
    CompPtr m = s.front();
    s.erase(s.begin());
    return catchComp(decompComp(m), std::move(s));
  }
  return DelimUncaught{nullptr};
}

}  // namespace

CompDelimit delimitComp(const CompResponse& r) { return delimitOnto(r, {}); }

CompResponse unwindComp(const std::vector<CompPtr>& s, CompResponse r) {
  for (const auto& m : s) r = rThen(m, std::move(r));
  return r;
}

std::optional<CompSynAnswer> runCompSmallStep(CompResponse r, long fuel) {
  CompDelimit d = delimitComp(r);
  for (;;) {
    if (auto* un = std::get_if<DelimUncaught>(&d)) return CompSynAnswer{CFinalA{un->q}};
    if (fuel <= 0) return std::nullopt;
    --fuel;
    if (auto* ar = std::get_if<DelimAround>(&d)) {
      CompRdTerm rd = reduceComp(ar->rx);
      if (const auto* unk = std::get_if<CRdUnknownA>(&rd))
        return CompSynAnswer{CStuckA{std::move(ar->s), unk->x, std::move(ar->q)}};
      // delimitComp(unwindComp(s, (m ask q) ! end)) by the decompose after
      // recompose identity, skipping the rebuild of the whole response
      d = catchComp(refocusComp(std::get<CRdT>(rd).m, ar->q), std::move(ar->s));
      continue;
    }
    auto& ca = std::get<DelimCaught>(d);
    CompRdResponse rd = handleComp(ca.rx);
    if (const auto* unk = std::get_if<CRdUnknownQ>(&rd))
      return CompSynAnswer{CCoStuckA{std::move(ca.s), unk->k}};
    d = delimitOnto(std::get<CRdR>(rd).r, ca.s);
  }
}

std::optional<CompSynAnswer> evalCompSmallStep(const CompPtr& m, long fuel) {
  return runCompSmallStep(rThen(m, rEnd()), fuel);
}

std::optional<CompSynAnswer> tryCompSmallStep(const CompOptPtr& o, long fuel) {
  return evalCompSmallStep(cHandle(o, cRaise()), fuel);
}

}  // namespace copat
