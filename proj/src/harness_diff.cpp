#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "copat/comp_semantics.hpp"
#include "copat/env_semantics.hpp"
#include "copat/frontend.hpp"
#include "copat/harness.hpp"
#include "copat/mono_semantics.hpp"

namespace copat {

std::string DiffReport::text() const {
  std::string s = "cases=" + std::to_string(cases) +
                  " agreed=" + std::to_string(agreed) +
                  " skipped=" + std::to_string(skippedFuel) +
                  " failures=" + std::to_string(failures.size()) + "\n";
  for (const auto& f : failures) {
    s += "failure seed=" + std::to_string(f.seed) + "\n  input: " + f.input +
         "\n";
    for (const auto& [name, ans] : f.answers)
      s += "  " + name + ": " + ans + "\n";
  }
  return s;
}

std::string DiffReport::records() const {
  std::string s;
  for (const auto& f : failures) {
    s += std::to_string(f.seed) + "\t" + f.input + "\t";
    bool first = true;
    for (const auto& [name, ans] : f.answers) {
      if (!first) s += ";";
      first = false;
      s += name + "=" + ans;
    }
    s += "\n";
  }
  return s;
}

namespace {

template <class Input, class Canon, class GenFn, class ShowFn>
DiffReport diffCheckImpl(const GenConfig& cfg, std::size_t cases, long fuel,
                         const std::vector<Artifact<Input, Canon>>& artifacts,
                         GenFn gen, ShowFn show) {
  DiffReport rep;
  rep.cases = cases;
  for (std::size_t i = 0; i < cases; ++i) {
    GenConfig c = cfg;
    c.seed = caseSeed(cfg.seed, i);
    Input in = gen(c);

    std::vector<std::optional<Canon>> res;
    res.reserve(artifacts.size());
    for (const auto& a : artifacts) res.push_back(a.run(in, fuel));

    bool anyDone = false, allDone = true;
    for (const auto& r : res) {
      if (r) anyDone = true;
      else allDone = false;
    }
    if (!anyDone) {
      ++rep.skippedFuel;
      continue;
    }
    if (!allDone) {
      // mixed termination: give the exhausted ones a long leash first
      allDone = true;
      for (std::size_t j = 0; j < res.size(); ++j) {
        if (!res[j]) res[j] = artifacts[j].run(in, fuel * 100);
        if (!res[j]) allDone = false;
      }
    }

    bool agree = allDone;
    if (allDone)
      for (const auto& r : res) agree = agree && *r == *res[0];
    if (agree) {
      ++rep.agreed;
      continue;
    }
    DiffFailure f;
    f.seed = c.seed;
    f.input = show(in);
    for (std::size_t j = 0; j < res.size(); ++j)
      f.answers.emplace_back(artifacts[j].name,
                             res[j] ? render(*res[j]) : "fuel-exhausted");
    rep.failures.push_back(std::move(f));
  }
  std::sort(rep.failures.begin(), rep.failures.end(),
            [](const DiffFailure& a, const DiffFailure& b) { return a.seed < b.seed; });
  return rep;
}

template <class Ans>
auto canonWrap(std::optional<Ans> a)
    -> std::optional<decltype(canonicalize(*a))> {
  if (!a) return std::nullopt;
  return canonicalize(*a);
}

}  // namespace

DiffReport diffCheckMono(const GenConfig& cfg, std::size_t cases, long fuel,
                         const std::vector<MonoArtifact>& artifacts) {
  return diffCheckImpl(cfg, cases, fuel, artifacts,
                       [](const GenConfig& c) { return genMonoTerm(c); },
                       [](const MonoPtr& m) { return pretty(m); });
}

DiffReport diffCheckComp(const GenConfig& cfg, std::size_t cases, long fuel,
                         const std::vector<CompArtifact>& artifacts) {
  return diffCheckImpl(cfg, cases, fuel, artifacts,
                       [](const GenConfig& c) { return genCompResponse(c); },
                       [](const CompResponse& r) { return pretty(r); });
}

std::vector<MonoArtifact> monoArtifacts() {
  return {
      {"smallstep",
       [](const MonoPtr& m, long fuel) {
         return canonWrap(evalMonoSmallStep(m, fuel));
       }},
      {"machine",
       [](const MonoPtr& m, long fuel) {
         return canonWrap(runMonoMachine(m, fuel));
       }},
      {"cps",
       [](const MonoPtr& m, long fuel) {
         return canonWrap(evalMonoCps(m, fuel));
       }},
      {"env-smallstep",
       [](const MonoPtr& m, long fuel) {
         return canonWrap(evalEnvMonoSmallStep(m, fuel));
       }},
      {"env-machine",
       [](const MonoPtr& m, long fuel) {
         return canonWrap(runEnvMonoMachine(m, fuel));
       }},
      {"env-cps",
       [](const MonoPtr& m, long fuel) {
         return canonWrap(evalEnvMonoCps(m, fuel));
       }},
  };
}

std::vector<CompArtifact> compArtifacts() {
  return {
      {"cps",
       [](const CompResponse& r, long fuel) {
         return canonWrap(runCompCps(r, fuel));
       }},
      {"machine",
       [](const CompResponse& r, long fuel) {
         return canonWrap(runCompMachine(r, fuel));
       }},
      {"smallstep",
       [](const CompResponse& r, long fuel) {
         return canonWrap(runCompSmallStep(r, fuel));
       }},
      {"env-cps",
       [](const CompResponse& r, long fuel) {
         return canonWrap(runEnvCompCps(r, fuel));
       }},
      {"env-machine",
       [](const CompResponse& r, long fuel) {
         return canonWrap(runEnvCompMachine(r, fuel));
       }},
  };
}

}  // namespace copat
