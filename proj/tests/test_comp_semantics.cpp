#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "copat/comp_semantics.hpp"
#include "copat/harness.hpp"

using namespace copat;

namespace {

GenConfig cfgAt(std::uint64_t seed, std::size_t size = 20) {
  GenConfig c;
  c.seed = seed;
  c.size = size;
  c.calculus = Calculus::Comp;
  return c;
}

// Rebuild the focused term of an Internal decomposition.
CompPtr focusOf(const CompRxTerm& rx, CompQuestion& extra) {
  extra = nullptr;
  if (const auto* fv = std::get_if<CRxFreeVar>(&rx)) return cVar(fv->x);
  if (const auto* in = std::get_if<CRxIntrospect>(&rx)) return cDot(in->m);
  if (const auto* tr = std::get_if<CRxTry>(&rx)) return cHandle(oDone(tr->x, tr->n), tr->m);
  auto co = [](const CoObject& c) {
    if (const auto* a = std::get_if<CoFrameArg>(&c.coframe))
      return cHandle(oPop(a->x, c.success), c.failure);
    return cHandle(oGet(std::get<CoFrameAt>(c.coframe).index, c.success), c.failure);
  };
  if (const auto* pop = std::get_if<CRxPop>(&rx)) {
    extra = askArg<CompPtr>(pop->n, nullptr);
    return co(pop->co);
  }
  const auto& get = std::get<CRxGet>(rx);
  extra = askIdx<CompPtr>(get.j, nullptr);
  return co(get.co);
}

}  // namespace

TEST_CASE("CPS pinned answers") {
  auto a1 = runCompCps(rThen(cRaise(), rEnd()), 100);
  REQUIRE(a1.has_value());
  CHECK(render(canonicalize(*a1)) == "final []");

  auto a2 = tryCompCps(oDone("x", cVar("x")), 100);
  REQUIRE(a2.has_value());
  CHECK(render(canonicalize(*a2)) == "final []");

  auto a3 = evalCompCps(cCapture("q", rSplat("q")), 100);
  REQUIRE(a3.has_value());
  CHECK(render(canonicalize(*a3)) == "final []");

  auto a4 = evalCompCps(cRaise(), 100);
  REQUIRE(a4.has_value());
  CHECK(render(canonicalize(*a4)) == "final []");

  auto a5 = evalCompCps(cCapture("q", rThen(cVar("f"), rSplat("q"))), 100);
  REQUIRE(a5.has_value());
  CHECK(render(canonicalize(*a5)) == "stuck depth=0 f []");

  // A free covariable at the top is co-stuck under the handlers before it.
  auto a6 = runCompCps(rThen(cVar("h"), rSplat("k")), 100);
  REQUIRE(a6.has_value());
  CHECK(render(canonicalize(*a6)) == "costuck depth=1 k");
}

TEST_CASE("machine pinned transitions and answers") {
  CompQuestion k = askIdx<CompPtr>("Head", nullptr);

  // <Raise | K | eps> is final with K
  auto s1 = stepCompMachine(CRefocusSt{cRaise(), k, nullptr});
  CHECK(questionEq(std::get<CFinalA>(std::get<CompSynAnswer>(s1)).q, k));

  // <M ! R | S> -> <R | M ; S>
  CompResponse r = rThen(cVar("m"), rEnd());
  auto s2 = stepCompMachine(CDelimSt{r, nullptr});
  const auto& d2 = std::get<CDelimSt>(std::get<CompMachineState>(s2));
  CHECK(d2.r.chain.empty());
  REQUIRE(listLength(d2.s) == 1);
  CHECK(termEq(d2.s->head, cVar("m")));

  // <?x -> N | M | K | S> -> <N[x := M] | K | S>
  auto s3 = stepCompMachine(CComatchSt{oDone("x", cVar("x")), cVar("fb"), k, nullptr});
  const auto& rf3 = std::get<CRefocusSt>(std::get<CompMachineState>(s3));
  CHECK(termEq(rf3.m, cVar("fb")));
  CHECK(questionEq(rf3.k, k));

  // <x -> O | M | N K | S> -> <O[x := N] | M N | K | S>
  CompQuestion nk = askArg(cVar("n"), k);
  auto s4 = stepCompMachine(CComatchSt{oPop("x", oDone("f", cVar("x"))), cVar("fb"), nk, nullptr});
  const auto& cm4 = std::get<CComatchSt>(std::get<CompMachineState>(s4));
  CHECK(optionEq(cm4.o, oDone("f", cVar("n"))));
  CHECK(termEq(cm4.m, cApp(cVar("fb"), cVar("n"))));
  CHECK(questionEq(cm4.k, k));

  // mismatch abandons to the failure term
  auto s5 = stepCompMachine(CComatchSt{oGet("Tail", oDone("f", cVar("x"))), cVar("fb"), nk, nullptr});
  const auto& rf5 = std::get<CRefocusSt>(std::get<CompMachineState>(s5));
  CHECK(termEq(rf5.m, cVar("fb")));
  CHECK(questionEq(rf5.k, nk));

  auto fin = runCompMachine(rEnd(), 10);
  REQUIRE(fin.has_value());
  CHECK(render(canonicalize(*fin)) == "final []");

  // capture reifies the continuation as K[Raise] ! end
  auto s6 = stepCompMachine(CRefocusSt{cCapture("q", rSplat("q")), k, nullptr});
  const auto& d6 = std::get<CDelimSt>(std::get<CompMachineState>(s6));
  REQUIRE(d6.r.chain.size() == 1);
  CHECK(termEq(d6.r.chain[0], cIdx(cRaise(), "Head")));
  CHECK(std::holds_alternative<REnd>(d6.r.tail));
}

TEST_CASE("reduce and handle pinned cases") {
  CompPtr m = cVar("m");

  auto r1 = reduceComp(CRxIntrospect{m});
  CHECK(termEq(std::get<CRdT>(r1).m, cApp(m, m)));

  CoObject headCo{CoFrameAt{"Head"}, oDone("f", cVar("x")), m};
  auto r2 = reduceComp(CRxGet{headCo, "Tail"});
  CHECK(termEq(std::get<CRdT>(r2).m, cIdx(m, "Tail")));

  auto r3 = reduceComp(CRxGet{headCo, "Head"});
  CHECK(termEq(std::get<CRdT>(r3).m, cHandle(oDone("f", cVar("x")), cIdx(m, "Head"))));

  // Pop on an argument substitutes it and extends the failure with the frame.
  CoObject argCo{CoFrameArg{"x"}, oDone("f", cVar("x")), m};
  auto r4 = reduceComp(CRxPop{argCo, cVar("n")});
  CHECK(termEq(std::get<CRdT>(r4).m, cHandle(oDone("f", cVar("n")), cApp(m, cVar("n")))));

  auto r5 = reduceComp(CRxTry{"x", cVar("x"), cVar("fb")});
  CHECK(termEq(std::get<CRdT>(r5).m, cVar("fb")));

  CompQuestion q = askIdx<CompPtr>("Head", nullptr);
  auto h1 = handleComp(CRxReset{m, q});
  CHECK(responseEq(std::get<CRdR>(h1).r, rThen(cIdx(m, "Head"), rEnd())));

  auto h2 = handleComp(CRxShift{"k", rSplat("k"), q});
  CHECK(responseEq(std::get<CRdR>(h2).r, rThen(cIdx(cRaise(), "Head"), rEnd())));

  auto h3 = handleComp(CRxFreeCoVar{"k"});
  CHECK(std::get<CRdUnknownQ>(h3).k == "k");

  auto h4 = handleComp(CRxUnderCo{headCo});
  CHECK(responseEq(std::get<CRdR>(h4).r, rThen(m, rEnd())));
}

TEST_CASE("delimit and decomp pinned cases") {
  auto d1 = delimitComp(rEnd());
  CHECK(std::get<DelimUncaught>(d1).q == nullptr);

  auto d2 = decompComp(cApp(cRaise(), cVar("n")));
  CHECK(questionEq(std::get<DecompRaised>(d2).q, askArg(cVar("n"), CompQuestion{})));

  auto d3 = delimitComp(rThen(cVar("m"), rThen(cRaise(), rEnd())));
  const auto& caught = std::get<DelimCaught>(d3);
  const auto& reset = std::get<CRxReset>(caught.rx);
  CHECK(termEq(reset.m, cVar("m")));
  CHECK(reset.q == nullptr);
  CHECK(caught.s.empty());
}

TEST_CASE("small-step pinned cases") {
  auto a1 = runCompSmallStep(rEnd(), 10);
  REQUIRE(a1.has_value());
  CHECK(render(canonicalize(*a1)) == "final []");

  // ((X -> O) ? M) X  ->  O ? (M X)
  CompPtr handle = cHandle(oGet("Head", oDone("f", cVar("m"))), cVar("fb"));
  auto d = decompComp(cIdx(handle, "Head"));
  auto rd = reduceComp(std::get<DecompInternal>(d).rx);
  CHECK(termEq(std::get<CRdT>(rd).m, cHandle(oDone("f", cVar("m")), cIdx(cVar("fb"), "Head"))));

  // E[capture k -> k] ! end with E = [] n raises the captured question
  CompPtr captured = cApp(cCapture("k", rSplat("k")), cVar("n"));
  auto a2 = runCompSmallStep(rThen(captured, rEnd()), 100);
  REQUIRE(a2.has_value());
  CHECK(render(canonicalize(*a2)) == "final [_]");
}

TEST_CASE("decomposition recomposes to the original term") {
  int internal = 0;
  for (int i = 0; i < 1000; ++i) {
    CompResponse r = genCompResponse(cfgAt(caseSeed(8001, i)));
    if (r.chain.empty()) continue;
    CompPtr m = r.chain.front();
    CompDecomp d = decompComp(m);
    if (const auto* in = std::get_if<DecompInternal>(&d)) {
      CompQuestion extra;
      CompPtr focus = focusOf(in->rx, extra);
      CHECK(termEq(ask(focus, copatCompose(extra, in->q)), m));
      ++internal;
    }
  }
  CHECK(internal > 100);
}

TEST_CASE("legacy Opt agrees with the single-pass option translation") {
  for (int i = 0; i < 1000; ++i) {
    GenConfig c = cfgAt(caseSeed(8002, i), 12);
    CompResponse r = genCompResponse(c);
    CompOptPtr o = [&] {
      // reuse generated material: wrap the first term as a Done body under a
      // couple of frames drawn from another seed
      GenConfig oc = cfgAt(caseSeed(8003, i), 12);
      CompResponse ro = genCompResponse(oc);
      CompPtr body = ro.chain.empty() ? cRaise() : ro.chain.front();
      // every fifth case invokes the bound failure alternative itself
      if (i % 5 == 4) body = cApp(cVar("fail"), body);
      CompOptPtr done = oDone("fail", body);
      switch (i % 4) {
        case 0: return done;
        case 1: return oPop("a", done);
        case 2: return oGet("Head", oPop("a", done));
        default: return oPop("a", oGet("Tail", done));
      }
    }();
    CompQuestion k = genCompQuestion(cfgAt(caseSeed(8004, i), 10));
    auto lhs = legacyOptCps(o, k, 2000);
    auto rhs = primeOptCps(o, k, 2000);
    if (!lhs || !rhs) {
      CHECK(!lhs);
      CHECK(!rhs);
      continue;
    }
    CHECK(canonicalize(*lhs) == canonicalize(*rhs));
  }
}

TEST_CASE("capture and reset round-trip") {
  // M ! (E[Raise] ! end)  evaluates like  E[M] ! end
  for (int i = 0; i < 500; ++i) {
    CompQuestion e = genCompQuestion(cfgAt(caseSeed(8010, i), 10));
    CompResponse rm = genCompResponse(cfgAt(caseSeed(8011, i), 12));
    CompPtr m = rm.chain.empty() ? cRaise() : rm.chain.front();
    CompResponse lhs = rThen(m, rThen(ask(cRaise(), e), rEnd()));
    CompResponse rhs = rThen(ask(m, e), rEnd());
    auto la = runCompSmallStep(lhs, 2000);
    auto ra = runCompSmallStep(rhs, 2000);
    if (!la || !ra) continue;
    CHECK(canonicalize(*la) == canonicalize(*ra));
  }
}

TEST_CASE("three evaluators agree canonically on generated responses") {
  const long fuel = 2000;
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    CompResponse r = genCompResponse(cfgAt(caseSeed(8020, i), 25));
    auto cps = runCompCps(r, fuel);
    auto mach = runCompMachine(r, fuel);
    auto small = runCompSmallStep(r, fuel);
    if (!cps || !mach || !small) continue;
    CHECK(canonicalize(*cps) == canonicalize(*mach));
    CHECK(canonicalize(*cps) == canonicalize(*small));
    ++compared;
  }
  CHECK(compared > 500);
}

TEST_CASE("machine and small-step are deterministic") {
  for (int i = 0; i < 100; ++i) {
    CompResponse r = genCompResponse(cfgAt(caseSeed(8030, i), 20));
    auto a = runCompMachine(r, 500), b = runCompMachine(r, 500);
    CHECK(a.has_value() == b.has_value());
    if (a && b) CHECK(canonicalize(*a) == canonicalize(*b));
    auto c = runCompSmallStep(r, 500), d = runCompSmallStep(r, 500);
    CHECK(c.has_value() == d.has_value());
    if (c && d) CHECK(canonicalize(*c) == canonicalize(*d));
    auto e = runCompCps(r, 500), f = runCompCps(r, 500);
    CHECK(e.has_value() == f.has_value());
    if (e && f) CHECK(canonicalize(*e) == canonicalize(*f));
  }
}
