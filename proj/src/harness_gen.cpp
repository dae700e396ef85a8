#include <random>

#include "copat/harness.hpp"

namespace copat {

std::uint64_t caseSeed(std::uint64_t runSeed, std::size_t i) {
  return runSeed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(i) + 1));
}

namespace {

struct Gen {
  std::mt19937_64 rng;
  const GenConfig& cfg;
  long budget;
  unsigned long fresh = 0;

  Gen(const GenConfig& c) : rng(c.seed), cfg(c), budget(static_cast<long>(c.size)) {}

  std::size_t upto(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng); }
  bool percent(unsigned p) { return upto(99) < p; }

  Name freshVar() { return "b" + std::to_string(fresh++); }
  Name freeVar() { return cfg.freeVarPool[upto(cfg.freeVarPool.size() - 1)]; }
  Name index() { return cfg.indexPool[upto(cfg.indexPool.size() - 1)]; }

  Name anyVar(const std::vector<Name>& scope) {
    if (!scope.empty() && percent(60)) return scope[upto(scope.size() - 1)];
    return freeVar();
  }

  // ---- monolithic ----

  Copattern monoCopat(std::vector<Name>& scope) {
    std::size_t depth = upto(4);
    std::vector<CopatFrame> frames;
    for (std::size_t i = 0; i < depth; ++i) {
      if (percent(50)) {
        Name b = freshVar();
        scope.push_back(b);
        frames.push_back({CopatFrame::Kind::Bind, b});
      } else {
        frames.push_back({CopatFrame::Kind::Match, index()});
      }
    }
    return listFromVector(frames);
  }

  MonoPtr mono(const std::vector<Name>& scope) {
    if (budget <= 1) {
      --budget;
      return mVar(anyVar(scope));
    }
    --budget;
    if (percent(30)) {
      // copattern-bearing constructs keep the matching paths hot
      if (percent(35)) return mDot(mono(scope));
      std::size_t n = upto(3);
      std::vector<MonoOption> opts;
      for (std::size_t i = 0; i < n && budget > 0; ++i) {
        std::vector<Name> inner = scope;
        Copattern lhs = monoCopat(inner);
        opts.push_back({lhs, mono(inner)});
      }
      return mObj(std::move(opts));
    }
    switch (upto(3)) {
      case 0: return mVar(anyVar(scope));
      case 1: return mApp(mono(scope), mono(scope));
      default: return mIdx(mono(scope), index());
    }
  }

  MonoQuestion monoQuestion(const std::vector<Name>& scope) {
    std::size_t depth = upto(4);
    MonoQuestion q;
    std::vector<QFrame<MonoPtr>> frames;
    for (std::size_t i = 0; i < depth; ++i) {
      if (percent(50))
        frames.push_back(ArgFrame<MonoPtr>{mono(scope)});
      else
        frames.push_back(IdxFrame{index()});
    }
    return listFromVector(frames);
  }

  // ---- compositional ----

  CompOptPtr compOption(std::vector<Name>& scope, const std::vector<Name>& coscope) {
    std::size_t depth = upto(4);
    std::vector<std::pair<bool, Name>> frames;  // (isPop, name)
    for (std::size_t i = 0; i < depth; ++i) {
      if (percent(50)) {
        Name b = freshVar();
        scope.push_back(b);
        frames.push_back({true, b});
      } else {
        frames.push_back({false, index()});
      }
    }
    Name failVar = freshVar();
    scope.push_back(failVar);
    CompOptPtr o = oDone(failVar, comp(scope, coscope));
    for (auto it = frames.rbegin(); it != frames.rend(); ++it)
      o = it->first ? oPop(it->second, o) : oGet(it->second, o);
    return o;
  }

  CompPtr comp(const std::vector<Name>& scope, const std::vector<Name>& coscope) {
    if (budget <= 1) {
      --budget;
      return percent(25) ? cRaise() : cVar(anyVar(scope));
    }
    --budget;
    if (percent(30)) {
      if (percent(40)) {
        std::vector<Name> inner = scope;
        return cHandle(compOption(inner, coscope), comp(scope, coscope));
      }
      Name q = freshVar();
      std::vector<Name> co = coscope;
      co.push_back(q);
      return cCapture(q, response(scope, co));
    }
    switch (upto(4)) {
      case 0: return cVar(anyVar(scope));
      case 1: return cRaise();
      case 2: return cApp(comp(scope, coscope), comp(scope, coscope));
      case 3: return cIdx(comp(scope, coscope), index());
      default: return cDot(comp(scope, coscope));
    }
  }

  CompResponse response(const std::vector<Name>& scope, const std::vector<Name>& coscope) {
    CompResponse r = rEnd();
    if (!coscope.empty() && percent(40)) r = rSplat(coscope[upto(coscope.size() - 1)]);
    std::size_t n = upto(2);
    for (std::size_t i = 0; i < n && budget > 0; ++i) r = rThen(comp(scope, coscope), std::move(r));
    return r;
  }

  CompQuestion compQuestion(const std::vector<Name>& scope) {
    std::size_t depth = upto(4);
    std::vector<QFrame<CompPtr>> frames;
    for (std::size_t i = 0; i < depth; ++i) {
      if (percent(50))
        frames.push_back(ArgFrame<CompPtr>{comp(scope, {})});
      else
        frames.push_back(IdxFrame{index()});
    }
    return listFromVector(frames);
  }
};

}  // namespace

MonoPtr genMonoTerm(const GenConfig& cfg) {
  Gen g(cfg);
  return g.mono({});
}

CompResponse genCompResponse(const GenConfig& cfg) {
  Gen g(cfg);
  CompResponse r = g.response({}, {});
  if (r.chain.empty() && g.budget > 0) r = rThen(g.comp({}, {}), std::move(r));
  return r;
}

MonoQuestion genMonoQuestion(const GenConfig& cfg) {
  Gen g(cfg);
  return g.monoQuestion({});
}

CompQuestion genCompQuestion(const GenConfig& cfg) {
  Gen g(cfg);
  return g.compQuestion({});
}

}  // namespace copat
