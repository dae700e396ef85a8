#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "copat/subst.hpp"
#include "copat/syntax.hpp"

using namespace copat;

namespace {

// Small generators local to this suite. Deterministic by seed.

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::size_t upto(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng); }
  bool flip() { return upto(1) == 1; }

  Name var() {
    static const char* pool[] = {"x", "y", "z", "f", "g", "w"};
    return pool[upto(5)];
  }
  Name idx() {
    static const char* pool[] = {"Head", "Tail", "Fst", "Snd"};
    return pool[upto(3)];
  }

  Copattern copat(std::size_t depth) {
    if (depth == 0 || upto(3) == 0) return nullptr;
    if (flip()) return copatBind(var(), copat(depth - 1));
    return copatMatch(idx(), copat(depth - 1));
  }

  MonoPtr term(std::size_t depth) {
    if (depth == 0) return mVar(var());
    switch (upto(5)) {
      case 0: return mVar(var());
      case 1: return mApp(term(depth - 1), term(depth - 1));
      case 2: return mIdx(term(depth - 1), idx());
      case 3: return mDot(term(depth - 1));
      default: {
        std::vector<MonoOption> opts;
        std::size_t n = upto(2);
        for (std::size_t i = 0; i < n; ++i) opts.push_back({copat(2), term(depth - 1)});
        return mObj(std::move(opts));
      }
    }
  }

  MonoQuestion question(std::size_t depth) {
    if (depth == 0 || upto(3) == 0) return nullptr;
    if (flip()) return askArg(term(1), question(depth - 1));
    return askIdx(idx(), question(depth - 1));
  }

  CompOptPtr option(std::size_t depth) {
    if (depth == 0 || upto(2) == 0) return oDone(var(), cterm(depth == 0 ? 0 : depth - 1));
    if (flip()) return oPop(var(), option(depth - 1));
    return oGet(idx(), option(depth - 1));
  }

  CompPtr cterm(std::size_t depth) {
    if (depth == 0) return flip() ? cVar(var()) : cRaise();
    switch (upto(6)) {
      case 0: return cVar(var());
      case 1: return cApp(cterm(depth - 1), cterm(depth - 1));
      case 2: return cIdx(cterm(depth - 1), idx());
      case 3: return cDot(cterm(depth - 1));
      case 4: return cHandle(option(depth - 1), cterm(depth - 1));
      default: return cCapture(var(), response(depth - 1));
    }
  }

  CompResponse response(std::size_t depth) {
    CompResponse r = flip() ? rEnd() : rSplat(var());
    std::size_t n = depth == 0 ? 0 : upto(2);
    for (std::size_t i = 0; i < n; ++i) r = rThen(cterm(depth - 1), std::move(r));
    return r;
  }
};

// Naive substitution with an explicit bound-name set, valid only when no
// binder in the target occurs free in the range. Used as oracle on inputs
// arranged to satisfy that side condition.
MonoPtr naiveSubst(const MonoPtr& m, const MonoSubst& env, std::set<Name> bound) {
  if (const auto* v = std::get_if<MVar>(&m->node)) {
    if (!bound.count(v->x))
      for (const auto& e : env)
        if (e.first == v->x) return e.second;
    return m;
  }
  if (const auto* a = std::get_if<MApp>(&m->node))
    return mApp(naiveSubst(a->fun, env, bound), naiveSubst(a->arg, env, bound));
  if (const auto* i = std::get_if<MIdx>(&m->node)) return mIdx(naiveSubst(i->obj, env, bound), i->index);
  if (const auto* d = std::get_if<MDot>(&m->node)) return mDot(naiveSubst(d->self, env, bound));
  if (const auto* o = std::get_if<MObj>(&m->node)) {
    std::vector<MonoOption> opts;
    for (const auto& opt : o->options) {
      auto b = bound;
      for (auto l = opt.lhs; l; l = l->tail)
        if (l->head.kind == CopatFrame::Kind::Bind) b.insert(l->head.name);
      opts.push_back({opt.lhs, naiveSubst(opt.rhs, env, b)});
    }
    return mObj(std::move(opts));
  }
  return m;
}

// de Bruijn style rendering used as an independent alpha-equivalence oracle.
std::string deBruijn(const MonoPtr& m, std::vector<Name> scope) {
  auto lookup = [&](const Name& x) {
    for (std::size_t i = scope.size(); i-- > 0;)
      if (scope[i] == x) return "b" + std::to_string(scope.size() - 1 - i);
    return "f:" + x;
  };
  if (const auto* v = std::get_if<MVar>(&m->node)) return lookup(v->x);
  if (const auto* a = std::get_if<MApp>(&m->node))
    return "(" + deBruijn(a->fun, scope) + " " + deBruijn(a->arg, scope) + ")";
  if (const auto* i = std::get_if<MIdx>(&m->node)) return "(" + deBruijn(i->obj, scope) + "@" + i->index + ")";
  if (const auto* d = std::get_if<MDot>(&m->node)) return "(" + deBruijn(d->self, scope) + ".)";
  if (const auto* o = std::get_if<MObj>(&m->node)) {
    std::string out = "{";
    for (const auto& opt : o->options) {
      auto s = scope;
      for (auto l = opt.lhs; l; l = l->tail) {
        if (l->head.kind == CopatFrame::Kind::Bind) {
          out += "\\";
          s.push_back(l->head.name);
        } else {
          out += "@" + l->head.name;
        }
      }
      out += "->" + deBruijn(opt.rhs, s) + "|";
    }
    return out + "}";
  }
  return "sem";
}

MonoOption opt(Copattern lhs, MonoPtr rhs) { return MonoOption{std::move(lhs), std::move(rhs)}; }

}  // namespace

TEST_CASE("copattern composition identity and examples") {
  Gen g(101);
  for (int i = 0; i < 1000; ++i) {
    Copattern q = g.copat(4);
    CHECK(copatEq(copatCompose(nullptr, q), q));
    CHECK(copatEq(copatCompose(q, nullptr), q));
  }
  Copattern l = copatBind("x", nullptr);
  Copattern r = copatMatch("Head", nullptr);
  CHECK(copatEq(copatCompose(l, r), copatBind("x", copatMatch("Head", nullptr))));
}

TEST_CASE("copattern and question composition associativity") {
  Gen g(102);
  for (int i = 0; i < 1000; ++i) {
    Copattern a = g.copat(3), b = g.copat(3), c = g.copat(3);
    CHECK(copatEq(copatCompose(copatCompose(a, b), c), copatCompose(a, copatCompose(b, c))));
    MonoQuestion qa = g.question(3), qb = g.question(3), qc = g.question(3);
    CHECK(questionEq(copatCompose(copatCompose(qa, qb), qc), copatCompose(qa, copatCompose(qb, qc))));
    CHECK(questionEq(copatCompose<MonoPtr>(nullptr, qa), qa));
    CHECK(questionEq(copatCompose<MonoPtr>(qa, nullptr), qa));
  }
}

TEST_CASE("ask plugs a term into a question") {
  MonoPtr f = mVar("f");
  CHECK(termEq(ask(f, nullptr), f));
  MonoQuestion q = askArg(mVar("x"), askIdx<MonoPtr>("Head", nullptr));
  CHECK(termEq(ask(f, q), mIdx(mApp(f, mVar("x")), "Head")));
}

TEST_CASE("ask is a homomorphism from question composition") {
  Gen g(103);
  for (int i = 0; i < 1000; ++i) {
    MonoPtr m = g.term(2);
    MonoQuestion q = g.question(3), q2 = g.question(3);
    CHECK(termEq(ask(ask(m, q), q2), ask(m, copatCompose(q, q2))));
  }
}

TEST_CASE("substitution base cases") {
  MonoPtr m = mApp(mVar("a"), mVar("b"));
  CHECK(termEq(substMono(mVar("x"), {{"x", m}}), m));
  CHECK(termEq(substMono(mVar("y"), {{"x", m}}), mVar("y")));
}

TEST_CASE("binders shadow the environment") {
  MonoPtr id = mObj({opt(copatBind("x", nullptr), mVar("x"))});
  MonoPtr out = substMono(id, {{"x", mVar("n")}});
  CHECK(termEq(out, id));
}

TEST_CASE("substitution avoids capture by renaming the binder") {
  // Obj[(x) -> x y] with y := x must not let the substituted x be captured.
  MonoPtr t = mObj({opt(copatBind("x", nullptr), mApp(mVar("x"), mVar("y")))});
  MonoPtr out = substMono(t, {{"y", mVar("x")}});
  const auto& o = std::get<MObj>(out->node);
  REQUIRE(o.options.size() == 1);
  Name binder = o.options[0].lhs->head.name;
  CHECK(binder != "x");
  CHECK(termEq(o.options[0].rhs, mApp(mVar(binder), mVar("x"))));
  CHECK(alphaEq(out, mObj({opt(copatBind("z", nullptr), mApp(mVar("z"), mVar("x")))})));
}

TEST_CASE("substitution is simultaneous, not iterated") {
  // {x := y, y := x} swaps the two variables.
  MonoPtr t = mApp(mVar("x"), mVar("y"));
  MonoPtr out = substMono(t, {{"x", mVar("y")}, {"y", mVar("x")}});
  CHECK(termEq(out, mApp(mVar("y"), mVar("x"))));
}

TEST_CASE("substitution agrees with the naive bound-set oracle on capture-free inputs") {
  Gen g(104);
  for (int i = 0; i < 1000; ++i) {
    // Freshened terms have globally unique binders, and the range names below
    // never appear in the generator's pools, so the oracle's no-capture side
    // condition holds and no renaming can trigger.
    MonoPtr t = freshen(g.term(3));
    MonoSubst env = {{"x", mVar("rx")}, {"f", mApp(mVar("rf"), mVar("rg"))}};
    CHECK(termEq(substMono(t, env), naiveSubst(t, env, {})));
  }
}

TEST_CASE("substitution reassociation on distinct names") {
  Gen g(105);
  int ran = 0;
  for (int i = 0; i < 1000; ++i) {
    MonoPtr m = freshen(g.term(3));
    MonoSubst e = {{"x", mVar("u1")}, {"y", mVar("u2")}};
    MonoSubst e2 = {{"z", mVar("u3")}, {"f", mVar("u4")}};
    MonoSubst both = e;
    both.insert(both.end(), e2.begin(), e2.end());
    MonoPtr lhs = substMono(m, both);
    MonoPtr rhs = substMono(substMono(m, e), e2);
    CHECK(alphaEq(lhs, rhs));
    ++ran;
  }
  CHECK(ran == 1000);
}

TEST_CASE("response substitution splices a response for the covariable") {
  CompResponse r = rThen(cVar("m"), rSplat("q"));
  CompResponse tail = rThen(cRaise(), rEnd());
  CompResponse out = substCompResponse(r, {{"q", ResponseSub{tail}}});
  CHECK(responseEq(out, rThen(cVar("m"), rThen(cRaise(), rEnd()))));
}

TEST_CASE("kind-mismatched substitution is an internal error") {
  CHECK_THROWS_AS((void)substComp(cVar("x"), {{"x", ResponseSub{rEnd()}}}), std::logic_error);
  CHECK_THROWS_AS((void)substCompResponse(rSplat("q"), {{"q", TermSub{cVar("m")}}}), std::logic_error);
}

TEST_CASE("comp substitution respects capture binders") {
  // capture q -> m ! q with m := capture-free term, q shadowed.
  CompPtr t = cCapture("q", rThen(cVar("m"), rSplat("q")));
  CompPtr out = substComp(t, {{"q", ResponseSub{rEnd()}}, {"m", TermSub{cVar("n")}}});
  CHECK(termEq(out, cCapture("q", rThen(cVar("n"), rSplat("q")))));
}

TEST_CASE("freshen renames duplicate binders apart") {
  MonoPtr t = mObj({opt(copatBind("x", nullptr), mVar("x")), opt(copatBind("x", nullptr), mVar("x"))});
  MonoPtr out = freshen(t);
  const auto& o = std::get<MObj>(out->node);
  Name b0 = o.options[0].lhs->head.name;
  Name b1 = o.options[1].lhs->head.name;
  CHECK(b0 != b1);
  CHECK(termEq(o.options[0].rhs, mVar(b0)));
  CHECK(termEq(o.options[1].rhs, mVar(b1)));
  CHECK(alphaEq(out, t));
}

TEST_CASE("freshen keeps already-distinct closed binders") {
  MonoPtr t = mObj({opt(copatBind("x", copatBind("y", nullptr)), mApp(mVar("x"), mVar("y")))});
  CHECK(termEq(freshen(t), t));
}

TEST_CASE("freshen output is alpha-equivalent, unique-bindered, idempotent up to renaming") {
  Gen g(106);
  for (int i = 0; i < 1000; ++i) {
    MonoPtr t = g.term(3);
    MonoPtr f = freshen(t);
    CHECK(alphaEq(f, t));
    CHECK(alphaEq(freshen(f), f));
    CompPtr c = g.cterm(3);
    CHECK(alphaEq(freshen(c), c));
    CompResponse r = g.response(2);
    CHECK(alphaEq(freshen(r), r));
  }
}

TEST_CASE("alphaEq basics") {
  CHECK(alphaEq(mVar("x"), mVar("x")));
  CHECK_FALSE(alphaEq(mVar("x"), mVar("y")));
  MonoPtr a = mObj({opt(copatBind("x", nullptr), mVar("x"))});
  MonoPtr b = mObj({opt(copatBind("y", nullptr), mVar("y"))});
  MonoPtr c = mObj({opt(copatBind("y", nullptr), mVar("x"))});
  CHECK(alphaEq(a, b));
  CHECK_FALSE(alphaEq(a, c));
  // A bound variable never matches a free one of the same name.
  MonoPtr d = mObj({opt(copatBind("x", nullptr), mVar("y"))});
  CHECK_FALSE(alphaEq(a, d));
}

TEST_CASE("alphaEq matches the de Bruijn rendering oracle") {
  Gen g(107);
  for (int i = 0; i < 1000; ++i) {
    MonoPtr t = g.term(3);
    MonoPtr u = g.term(3);
    bool oracle = deBruijn(t, {}) == deBruijn(u, {});
    // The oracle is exact on Sem-free trees, which the generator produces.
    CHECK(alphaEq(t, u) == oracle);
    CHECK(alphaEq(t, freshen(t)));
  }
}

TEST_CASE("alphaEq is an equivalence relation") {
  Gen g(108);
  std::vector<MonoPtr> ts;
  for (int i = 0; i < 60; ++i) ts.push_back(g.term(2));
  for (const auto& t : ts) CHECK(alphaEq(t, t));
  for (const auto& t : ts)
    for (const auto& u : ts) CHECK(alphaEq(t, u) == alphaEq(u, t));
  for (const auto& t : ts)
    for (const auto& u : ts)
      for (const auto& v : ts)
        if (alphaEq(t, u) && alphaEq(u, v)) CHECK(alphaEq(t, v));
}
