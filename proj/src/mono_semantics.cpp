#include "copat/mono_semantics.hpp"

#include <any>
#include <memory>

namespace copat {

Followup reduceMono(const MonoRedex& r, const MonoQuestion& q) {
  if (const auto* in = std::get_if<RxIntrospect>(&r)) return FuNext{RdReduced{mApp(in->m, in->m)}, q};
  if (const auto* fv = std::get_if<RxFreeVar>(&r)) return FuNext{RdUnknown{fv->x}, q};
  const auto& options = std::get<RxRespond>(r).options;
  if (options.empty()) return FuNext{RdUnhandled{}, q};
  const MonoOption& first = options.front();
  CoMatch<MonoPtr> match = comatch(first.lhs, q);
  MonoSubst env(match.prefix.begin(), match.prefix.end());
  if (const auto* fu = std::get_if<RemFollowup<MonoPtr>>(&match.suffix))
    return FuNext{RdReduced{substMono(first.rhs, env)}, fu->q};
  if (const auto* un = std::get_if<RemUnasked>(&match.suffix))
    return FuMore{un->lhs, substMono(first.rhs, env),
                  std::vector<MonoOption>(options.begin() + 1, options.end()), q};
  return reduceMono(RxRespond{std::vector<MonoOption>(options.begin() + 1, options.end())}, q);
}

MonoDecomp searchMono(const MonoPtr& m) {
  if (const auto* v = std::get_if<MVar>(&m->node)) return {RxFreeVar{v->x}, nullptr};
  if (const auto* d = std::get_if<MDot>(&m->node)) return {RxIntrospect{d->self}, nullptr};
  if (const auto* o = std::get_if<MObj>(&m->node)) return {RxRespond{o->options}, nullptr};
  if (const auto* a = std::get_if<MApp>(&m->node)) {
    MonoDecomp found = searchMono(a->fun);
    found.q = copatCompose(found.q, askArg(a->arg, MonoQuestion{}));
    return found;
  }
  const auto& i = std::get<MIdx>(m->node);
  MonoDecomp found = searchMono(i.obj);
  found.q = copatCompose(found.q, askIdx<MonoPtr>(i.index, nullptr));
  return found;
}

MonoDecomp refocusMono(const MonoPtr& m, MonoQuestion k) {
  if (const auto* v = std::get_if<MVar>(&m->node)) return {RxFreeVar{v->x}, std::move(k)};
  if (const auto* d = std::get_if<MDot>(&m->node)) return {RxIntrospect{d->self}, std::move(k)};
  if (const auto* o = std::get_if<MObj>(&m->node)) return {RxRespond{o->options}, std::move(k)};
  if (const auto* a = std::get_if<MApp>(&m->node)) return refocusMono(a->fun, askArg(a->arg, std::move(k)));
  const auto& i = std::get<MIdx>(m->node);
  return refocusMono(i.obj, askIdx(i.index, std::move(k)));
}

MonoDecomp decompMono(const MonoPtr& m) { return refocusMono(m, nullptr); }

std::optional<MonoAnswer> evalMonoSmallStep(MonoPtr m, long fuel) {
  MonoDecomp d = decompMono(m);
  for (;;) {
    if (fuel <= 0) return std::nullopt;
    --fuel;
    Followup f = reduceMono(d.redex, d.q);
    if (const auto* more = std::get_if<FuMore>(&f))
      return MonoUnder{more->lhs, more->rhs, more->options, more->q};
    const auto& next = std::get<FuNext>(f);
    if (const auto* red = std::get_if<RdReduced>(&next.r)) {
      // decompMono(ask(red->m, next.q)) by the refocusing lemma, without
      // rebuilding and rewalking the whole program each step
      d = refocusMono(red->m, next.q);
      continue;
    }
    if (const auto* unk = std::get_if<RdUnknown>(&next.r)) return MonoStuck{unk->x, next.q};
    return MonoRaise{next.q};
  }
}

std::variant<MonoMachineState, MonoAnswer> stepMonoMachine(const MonoMachineState& s) {
  if (const auto* ev = std::get_if<MonoEval>(&s)) {
    const MonoPtr& m = ev->focus;
    if (const auto* v = std::get_if<MVar>(&m->node)) return MonoAnswer{MonoStuck{v->x, ev->k}};
    if (const auto* d = std::get_if<MDot>(&m->node))
      return MonoMachineState{MonoEval{d->self, askArg(d->self, ev->k)}};
    if (const auto* o = std::get_if<MObj>(&m->node)) {
      if (o->options.empty()) return MonoAnswer{MonoRaise{ev->k}};
      const MonoOption& first = o->options.front();
      return MonoMachineState{MonoComatching{
          first.lhs, ev->k, first.rhs,
          std::vector<MonoOption>(o->options.begin() + 1, o->options.end()), ev->k}};
    }
    if (const auto* a = std::get_if<MApp>(&m->node))
      return MonoMachineState{MonoEval{a->fun, askArg(a->arg, ev->k)}};
    const auto& i = std::get<MIdx>(m->node);
    return MonoMachineState{MonoEval{i.obj, askIdx(i.index, ev->k)}};
  }
  const auto& cm = std::get<MonoComatching>(s);
  if (!cm.lhs) return MonoMachineState{MonoEval{cm.rhs, cm.ctx}};
  if (!cm.ctx) return MonoAnswer{MonoUnder{cm.lhs, cm.rhs, cm.options, cm.saved}};
  if (cm.lhs->head.kind == CopatFrame::Kind::Bind) {
    if (const auto* a = std::get_if<ArgFrame<MonoPtr>>(&cm.ctx->head))
      return MonoMachineState{MonoComatching{cm.lhs->tail, cm.ctx->tail,
                                             substMono(cm.rhs, {{cm.lhs->head.name, a->payload}}),
                                             cm.options, cm.saved}};
  } else if (const auto* i = std::get_if<IdxFrame>(&cm.ctx->head)) {
    if (i->index == cm.lhs->head.name)
      return MonoMachineState{MonoComatching{cm.lhs->tail, cm.ctx->tail, cm.rhs, cm.options, cm.saved}};
  }
  return MonoMachineState{MonoEval{mObj(cm.options), cm.saved}};
}

std::optional<MonoAnswer> runMonoMachine(MonoPtr m, long fuel, const MonoTraceHook& trace) {
  MonoMachineState s = MonoEval{std::move(m), nullptr};
  for (;;) {
    if (trace) trace(s);
    if (fuel <= 0) return std::nullopt;
    --fuel;
    auto next = stepMonoMachine(s);
    if (auto* a = std::get_if<MonoAnswer>(&next)) return std::move(*a);
    s = std::move(std::get<MonoMachineState>(next));
  }
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

using MonoCpsOption = std::function<MonoCpsAnswer(MonoCpsQuestion)>;

MonoCpsTerm cpsTerm(const MonoPtr& m, const Fuel& fuel);

MonoCpsAnswer cpsOptions(const std::vector<MonoOption>& os, const MonoCpsQuestion& q, const Fuel& fuel);

// comatch lhs rhs q os k, with os the saved fallback over the saved question.
MonoCpsAnswer cpsComatch(const Copattern& lhs, const MonoPtr& rhs, const MonoCpsQuestion& q,
                         const MonoCpsOption& os, const MonoCpsQuestion& k, const Fuel& fuel) {
  fuel->tick();
  if (!lhs) return cpsTerm(rhs, fuel)(k);
  if (!k) {
    // Out of question: an opaque resumption awaiting more context.
    return MonoCpsAnswer{CpsUnder{[lhs, rhs, q, os, fuel](MonoCpsQuestion more) {
      return cpsComatch(lhs, rhs, q, os, more, fuel);
    }}};
  }
  if (lhs->head.kind == CopatFrame::Kind::Bind) {
    if (const auto* y = std::get_if<ArgFrame<MonoCpsArg>>(&k->head)) {
      MonoPtr n = mSem(std::any(y->payload.use));
      return cpsComatch(lhs->tail, substMono(rhs, {{lhs->head.name, n}}), q, os, k->tail, fuel);
    }
  } else if (const auto* j = std::get_if<IdxFrame>(&k->head)) {
    if (j->index == lhs->head.name) return cpsComatch(lhs->tail, rhs, q, os, k->tail, fuel);
  }
  return os(q);
}

MonoCpsAnswer cpsOptions(const std::vector<MonoOption>& os, const MonoCpsQuestion& q, const Fuel& fuel) {
  if (os.empty()) return MonoCpsAnswer{CpsRaise{q}};
  std::vector<MonoOption> rest(os.begin() + 1, os.end());
  MonoCpsOption fallback = [rest, fuel](MonoCpsQuestion saved) { return cpsOptions(rest, saved, fuel); };
  return cpsComatch(os.front().lhs, os.front().rhs, q, fallback, q, fuel);
}

MonoCpsTerm cpsTerm(const MonoPtr& m, const Fuel& fuel) {
  return [m, fuel](MonoCpsQuestion k) -> MonoCpsAnswer {
    fuel->tick();
    if (const auto* v = std::get_if<MVar>(&m->node)) return MonoCpsAnswer{CpsStuck{v->x, k}};
    if (const auto* s = std::get_if<MSem>(&m->node))
      return std::any_cast<const MonoCpsTerm&>(s->denot)(k);
    if (const auto* d = std::get_if<MDot>(&m->node))
      return cpsTerm(d->self, fuel)(askArg(MonoCpsArg{cpsTerm(d->self, fuel)}, k));
    if (const auto* o = std::get_if<MObj>(&m->node)) return cpsOptions(o->options, k, fuel);
    if (const auto* a = std::get_if<MApp>(&m->node))
      return cpsTerm(a->fun, fuel)(askArg(MonoCpsArg{cpsTerm(a->arg, fuel)}, k));
    const auto& i = std::get<MIdx>(m->node);
    return cpsTerm(i.obj, fuel)(askIdx(i.index, k));
  };
}

}  // namespace

std::optional<MonoCpsAnswer> evalMonoCps(const MonoPtr& m, long fuel) {
  auto cell = std::make_shared<FuelCell>(FuelCell{fuel});
  try {
    return cpsTerm(m, cell)(nullptr);
  } catch (const CpsFuelOut&) {
    return std::nullopt;
  }
}

CanonicalMono canonicalize(const MonoAnswer& a) {
  if (const auto* r = std::get_if<MonoRaise>(&a)) return canonRaise(skeletonOf(r->q));
  if (const auto* s = std::get_if<MonoStuck>(&a)) return canonStuck(s->x, skeletonOf(s->q));
  return canonUnder();
}

CanonicalMono canonicalize(const MonoCpsAnswer& a) {
  if (const auto* r = std::get_if<CpsRaise>(&a.v)) return canonRaise(skeletonOf(r->q));
  if (const auto* s = std::get_if<CpsStuck>(&a.v)) return canonStuck(s->x, skeletonOf(s->q));
  return canonUnder();
}

}  // namespace copat
