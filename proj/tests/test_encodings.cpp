#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <string>
#include <vector>

#include "copat/comp_semantics.hpp"
#include "copat/encodings.hpp"
#include "copat/harness.hpp"
#include "copat/mono_semantics.hpp"
#include "copat/subst.hpp"

using namespace copat;

namespace {

Copattern copatOf(std::vector<CopatFrame> frames) {
  Copattern c = nullptr;
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) c = cons(*it, c);
  return c;
}

CopatFrame bindF(Name x) { return {CopatFrame::Kind::Bind, std::move(x)}; }
CopatFrame matchF(Name i) { return {CopatFrame::Kind::Match, std::move(i)}; }

std::string evalComp(const CompPtr& m, long fuel = 10000) {
  auto a = evalCompSmallStep(m, fuel);
  REQUIRE(a.has_value());
  return render(canonicalize(*a));
}

}  // namespace

TEST_CASE("desugaring pinned shapes") {
  // empty object chain
  CHECK(termEq(desugarMonoToComp(mObj({})), cRaise()));

  // nullary copattern: fresh unused failure binder
  auto d1 = desugarMonoToComp(mObj({{nullptr, mVar("y")}}));
  CHECK(alphaEq(d1, cHandle(oDone("_", cVar("y")), cRaise())));

  // one frame at a time: (x Head) -> x
  auto d2 = desugarMonoToComp(
      mObj({{copatOf({bindF("x"), matchF("Head")}), mVar("x")}}));
  CHECK(alphaEq(
      d2, cHandle(oPop("x", oGet("Head", oDone("_", cVar("x")))), cRaise())));

  // homomorphic cases
  auto d3 = desugarMonoToComp(
      mApp(mIdx(mDot(mVar("f")), "Tail"), mVar("g")));
  CHECK(termEq(d3, cApp(cIdx(cDot(cVar("f")), "Tail"), cVar("g"))));

  // two options nest right, ending in Raise
  auto d4 = desugarMonoToComp(mObj({{copatOf({matchF("Fst")}), mVar("a")},
                                    {copatOf({matchF("Snd")}), mVar("b")}}));
  CHECK(alphaEq(
      d4, cHandle(oGet("Fst", oDone("_", cVar("a"))),
                  cHandle(oGet("Snd", oDone("_", cVar("b"))), cRaise()))));

  // deterministic
  CHECK(termEq(d4, desugarMonoToComp(mObj({{copatOf({matchF("Fst")}), mVar("a")},
                                           {copatOf({matchF("Snd")}), mVar("b")}}))));
}

TEST_CASE("desugaring avoids capturing the failure binder") {
  // body uses "_" already, so the introduced binder must be renamed
  auto d = desugarMonoToComp(mObj({{nullptr, mVar("_")}}));
  const auto& h = std::get<CHandle>(d->node);
  const auto& done = std::get<ODone>(h.option->node);
  CHECK(done.failVar != "_");
  CHECK(termEq(done.rhs, cVar("_")));
}

TEST_CASE("desugar report") {
  auto r1 = desugarReport(mObj({{nullptr, mVar("y")}}));
  CHECK(r1.optionCount == 1);
  CHECK_FALSE(r1.underApplyRisk);
  CHECK(termEq(r1.input, mObj({{nullptr, mVar("y")}})));

  auto r2 = desugarReport(mApp(
      mObj({{copatOf({bindF("x")}), mVar("x")}, {nullptr, mVar("y")}}),
      mObj({{copatOf({matchF("Head")}), mVar("z")}})));
  CHECK(r2.optionCount == 3);
  CHECK(r2.underApplyRisk);
  CHECK(termEq(r2.output, desugarMonoToComp(r2.input)));
}

TEST_CASE("objectEnc probes") {
  auto enc = objectEnc(oGet("Fst", oDone("fz", cVar("a"))));

  // matched index runs the option body
  CHECK(evalComp(cIdx(enc, "Fst")) == "stuck depth=0 a []");

  // Open then an argument yields the extension: own option first, then the
  // argument handler on a miss
  CHECK(evalComp(cIdx(openApp(enc, cVar("w")), "Fst")) == "stuck depth=0 a []");
  CHECK(evalComp(cIdx(openApp(enc, cVar("w")), "Snd")) ==
        "stuck depth=0 w [Snd]");

  // unmatched index without Open falls through to Raise of the question
  CHECK(evalComp(cIdx(enc, "Snd")) == "final [Snd]");
  CHECK(evalComp(cApp(enc, cVar("n"))) == "final [_]");
}

TEST_CASE("composeEnc pinned") {
  auto encA = objectEnc(oGet("Fst", oDone("fz", cVar("a"))));
  auto encB = objectEnc(oGet("Snd", oDone("fz", cVar("b"))));
  auto comp = composeEnc(encA, encB);

  CHECK(evalComp(cIdx(comp, "Fst")) == "stuck depth=0 a []");
  CHECK(evalComp(cIdx(comp, "Snd")) == "stuck depth=0 b []");
  CHECK(evalComp(cIdx(comp, "Head")) == "final [Head]");

  // first-match priority
  auto encB2 = objectEnc(oGet("Fst", oDone("fz", cVar("b"))));
  CHECK(evalComp(cIdx(composeEnc(encA, encB2), "Fst")) ==
        "stuck depth=0 a []");
}

TEST_CASE("compose law: compose(object O, object O') vs object(O | O')") {
  std::vector<std::pair<CompOptPtr, CompOptPtr>> pairs = {
      {oGet("Fst", oDone("fz", cVar("a"))),
       oGet("Snd", oDone("fz", cVar("b")))},
      {oGet("Fst", oDone("fz", cVar("a"))),
       oGet("Fst", oDone("fz", cVar("b")))},
      {oPop("p", oGet("Head", oDone("fz", cApp(cVar("a"), cVar("p"))))),
       oGet("Head", oDone("fz", cVar("b")))},
      // failure variable invoked in a body; the option still defers on the
      // Open probe (a top-level ?x option would intercept it and the law
      // would not apply)
      {oGet("Fst", oDone("fz", cApp(cVar("a"), cVar("fz")))),
       oGet("Tail", oDone("fz", cVar("b")))},
  };

  std::size_t compared = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& [oA, oB] = pairs[i % pairs.size()];
    GenConfig cfg;
    cfg.seed = caseSeed(4242, i);
    cfg.size = 8;
    cfg.calculus = Calculus::Comp;
    CompQuestion q = genCompQuestion(cfg);

    auto lhs = ask(composeEnc(objectEnc(oA), objectEnc(oB)), q);
    auto rhs = ask(objectEnc(std::vector<CompOptPtr>{oA, oB}), q);
    auto al = evalCompSmallStep(lhs, 20000);
    auto ar = evalCompSmallStep(rhs, 20000);
    if (!al || !ar) continue;
    ++compared;
    CHECK(render(canonicalize(*al)) == render(canonicalize(*ar)));
  }
  CHECK(compared > 150);
}

TEST_CASE("desugaring preserves raise and stuck observations") {
  std::size_t compared = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    GenConfig cfg;
    cfg.seed = caseSeed(99, i);
    cfg.size = 14;
    MonoPtr m = genMonoTerm(cfg);

    auto ma = evalMonoSmallStep(m, 2000);
    if (!ma) continue;
    CanonicalMono cm = canonicalize(*ma);
    if (cm.tag == CanonicalMono::Tag::Under) continue;

    auto ca = evalCompSmallStep(desugarMonoToComp(m), 50000);
    if (!ca) continue;
    CanonicalComp cc = canonicalize(*ca);
    ++compared;

    if (cm.tag == CanonicalMono::Tag::Raise) {
      CHECK(cc.tag == CanonicalComp::Tag::Final);
      CHECK(cc.skel == cm.skel);
    } else {
      CHECK(cc.tag == CanonicalComp::Tag::Stuck);
      CHECK(cc.depth == 0);
      CHECK(cc.name == cm.name);
      CHECK(cc.skel == cm.skel);
    }
  }
  CHECK(compared > 400);
}
