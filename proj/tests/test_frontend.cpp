#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include "copat/frontend.hpp"
#include "copat/harness.hpp"
#include "copat/subst.hpp"

using namespace copat;

namespace {

MonoPtr parseMonoOk(const std::string& s) {
  auto r = parseMonoTerm(s);
  if (const auto* e = std::get_if<ParseError>(&r)) FAIL(e->render());
  return std::get<MonoPtr>(r);
}

CompResponse parseCompOk(const std::string& s) {
  auto r = parseCompResponse(s);
  if (const auto* e = std::get_if<ParseError>(&r)) FAIL(e->render());
  return std::get<CompResponse>(r);
}

ParseError parseMonoErr(const std::string& s) {
  auto r = parseMonoTerm(s);
  REQUIRE(std::holds_alternative<ParseError>(r));
  return std::get<ParseError>(r);
}

Copattern copatOf(std::vector<CopatFrame> frames) {
  Copattern c = nullptr;
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) c = cons(*it, c);
  return c;
}

}  // namespace

TEST_CASE("monolithic parsing pinned") {
  auto m1 = parseMonoOk("fun { x Head -> x }");
  CHECK(alphaEq(m1, mObj({{copatOf({{CopatFrame::Kind::Bind, "x"},
                                    {CopatFrame::Kind::Match, "Head"}}),
                           mVar("x")}})));

  auto m2 = parseMonoOk("count. From x Tail Tail Head");
  auto expect2 = mIdx(
      mIdx(mIdx(mApp(mIdx(mDot(mVar("count")), "From"), mVar("x")), "Tail"),
           "Tail"),
      "Head");
  CHECK(alphaEq(m2, expect2));

  // application is left-associative and tightest; parens override
  CHECK(alphaEq(parseMonoOk("f g h"), mApp(mApp(mVar("f"), mVar("g")), mVar("h"))));
  CHECK(alphaEq(parseMonoOk("f (g h)"), mApp(mVar("f"), mApp(mVar("g"), mVar("h")))));

  CHECK(alphaEq(parseMonoOk("fun { }"), mObj({})));
  CHECK(alphaEq(parseMonoOk("fun { -> f }"), mObj({{nullptr, mVar("f")}})));

  // comments and whitespace
  CHECK(alphaEq(parseMonoOk("f -- tail comment\n  g"), mApp(mVar("f"), mVar("g"))));

  // free variables preserved verbatim
  CHECK(termEq(parseMonoOk("f x"), mApp(mVar("f"), mVar("x"))));
}

TEST_CASE("compositional parsing pinned") {
  auto r1 = parseCompOk("{ ? x -> x } ? raise ! end");
  CompResponse e1 = rThen(cHandle(oDone("x", cVar("x")), cRaise()), rEnd());
  CHECK(alphaEq(r1, e1));

  CHECK(alphaEq(parseCompOk("end"), rEnd()));
  CHECK(alphaEq(parseCompOk("k"), rSplat("k")));
  CHECK(alphaEq(parseCompOk("raise ! end"), rThen(cRaise(), rEnd())));

  // options curry one frame at a time
  auto r2 = parseCompOk("{ x -> Head -> ? y -> x } ? raise ! end");
  CompResponse e2 = rThen(
      cHandle(oPop("x", oGet("Head", oDone("y", cVar("x")))), cRaise()),
      rEnd());
  CHECK(alphaEq(r2, e2));

  // handle chains are right-associative
  auto r3 = parseCompOk("{ ? x -> x } ? { ? y -> y } ? raise ! end");
  CompResponse e3 = rThen(
      cHandle(oDone("x", cVar("x")),
              cHandle(oDone("y", cVar("y")), cRaise())),
      rEnd());
  CHECK(alphaEq(r3, e3));

  // capture binds a response body
  auto r4 = parseCompOk("(capture q -> q) ! end");
  CompResponse e4 = rThen(cCapture("q", CompResponse{{}, RSplat{"q"}}), rEnd());
  CHECK(alphaEq(r4, e4));

  auto r5 = parseCompOk("f. Tail g ! k");
  CompResponse e5{{cApp(cIdx(cDot(cVar("f")), "Tail"), cVar("g"))}, RSplat{"k"}};
  CHECK(alphaEq(r5, e5));
}

TEST_CASE("pretty pinned") {
  CHECK(pretty(cRaise()) == "raise");
  CHECK(pretty(mObj({})) == "fun { }");
  CHECK(pretty(mIdx(mIdx(mIdx(mApp(mIdx(mDot(mVar("count")), "From"),
                                   mVar("x")),
                              "Tail"),
                         "Tail"),
                    "Head")) == "count. From x Tail Tail Head");
  CHECK(pretty(rThen(cHandle(oDone("x", cVar("x")), cRaise()), rEnd())) ==
        "{ ? x -> x } ? raise ! end");
  CHECK(pretty(mObj({{copatOf({{CopatFrame::Kind::Bind, "x"},
                               {CopatFrame::Kind::Match, "Head"}}),
                      mVar("x")}})) == "fun { x Head -> x }");
  CHECK(pretty(askArg(mApp(mVar("g"), mVar("x")),
                      askIdx<MonoPtr>("Head", nullptr))) == "[(g x) Head]");
}

TEST_CASE("parse errors carry in-bounds positions") {
  auto e1 = parseMonoErr("fun { x Open -> x }");
  CHECK(e1.line == 1);
  CHECK(e1.column == 9);
  CHECK(e1.expected.find("reserved") != std::string::npos);
  CHECK(e1.found == "Open");

  auto e2 = parseMonoErr("fun {\n  x -> (f\n}");
  CHECK(e2.line >= 1);
  CHECK(e2.line <= 3);

  auto e3 = parseMonoErr("f $ g");
  CHECK(e3.line == 1);
  CHECK(e3.column == 3);

  auto r4 = parseCompResponse("raise");
  REQUIRE(std::holds_alternative<ParseError>(r4));
  CHECK(std::get<ParseError>(r4).expected == "'!'");

  auto e5 = parseMonoErr("");
  CHECK(e5.found == "end of input");
}

TEST_CASE("resolveNames") {
  // duplicate binders across clauses renamed apart
  auto m = parseMonoOk("fun { x -> x | x -> x }");
  const auto& obj = std::get<MObj>(m->node);
  REQUIRE(obj.options.size() == 2);
  CHECK(obj.options[0].lhs->head.name != obj.options[1].lhs->head.name);
  CHECK(termEq(obj.options[0].rhs, mVar(obj.options[0].lhs->head.name)));

  CHECK_THROWS_AS(resolveNames(mIdx(mVar("f"), "Open")), std::invalid_argument);
  CHECK_THROWS_AS(
      resolveNames(rThen(cHandle(oGet("Open", oDone("x", cVar("x"))), cRaise()),
                         rEnd())),
      std::invalid_argument);
  CHECK(alphaEq(resolveNames(mVar("f")), mVar("f")));
}

TEST_CASE("round trip: parse after pretty is identity up to alpha") {
  for (std::size_t i = 0; i < 1000; ++i) {
    GenConfig cfg;
    cfg.seed = caseSeed(7, i);
    cfg.size = 20;
    MonoPtr m = genMonoTerm(cfg);
    auto back = parseMonoTerm(pretty(m));
    if (const auto* e = std::get_if<ParseError>(&back))
      FAIL(e->render(), " on: ", pretty(m));
    CHECK(alphaEq(std::get<MonoPtr>(back), m));
  }

  for (std::size_t i = 0; i < 1000; ++i) {
    GenConfig cfg;
    cfg.seed = caseSeed(8, i);
    cfg.size = 20;
    cfg.calculus = Calculus::Comp;
    CompResponse r = genCompResponse(cfg);
    auto back = parseCompResponse(pretty(r));
    if (const auto* e = std::get_if<ParseError>(&back))
      FAIL(e->render(), " on: ", pretty(r));
    CHECK(alphaEq(std::get<CompResponse>(back), r));
  }
}

TEST_CASE("corrupted inputs error inside bounds") {
  std::mt19937_64 rng(515);
  for (std::size_t i = 0; i < 300; ++i) {
    GenConfig cfg;
    cfg.seed = caseSeed(515, i);
    cfg.size = 12;
    std::string s = pretty(genMonoTerm(cfg));
    if (s.empty()) continue;
    std::size_t at = rng() % s.size();
    switch (rng() % 3) {
      case 0: s = s.substr(0, at); break;
      case 1: s.insert(at, "$"); break;
      case 2: s.insert(at, ")"); break;
    }
    auto r = parseMonoTerm(s);
    if (const auto* e = std::get_if<ParseError>(&r)) {
      int lines = 1;
      for (char c : s)
        if (c == '\n') ++lines;
      CHECK(e->line >= 1);
      CHECK(e->line <= lines);
      CHECK(e->column >= 1);
      CHECK(e->column <= static_cast<int>(s.size()) + 2);
    }
  }
}
