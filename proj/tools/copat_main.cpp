#include <CLI11.hpp>
#include <pthread.h>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "copat/comp_semantics.hpp"
#include "copat/encodings.hpp"
#include "copat/env_semantics.hpp"
#include "copat/frontend.hpp"
#include "copat/harness.hpp"
#include "copat/mono_semantics.hpp"

using namespace copat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitFuel = 2;
constexpr int kExitDiff = 3;
constexpr int kExitUsage = 64;

std::optional<std::string> readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<Calculus> calculusOf(const std::string& path) {
  if (path.size() >= 7 && path.ends_with(".ccopat")) return Calculus::Comp;
  if (path.ends_with(".copat")) return Calculus::Mono;
  return std::nullopt;
}

// Returns nullopt and sets exit code on failure.
int pickCalculus(const std::string& file, const std::string& flag,
                 Calculus& out) {
  auto fromExt = calculusOf(file);
  if (!flag.empty()) {
    Calculus c = flag == "comp" ? Calculus::Comp : Calculus::Mono;
    if (fromExt && *fromExt != c) {
      std::cerr << "calculus flag disagrees with file extension\n";
      return kExitUsage;
    }
    out = c;
    return kExitOk;
  }
  if (!fromExt) {
    std::cerr << "cannot infer calculus from " << file
              << " (use .copat/.ccopat or --calculus)\n";
    return kExitUsage;
  }
  out = *fromExt;
  return kExitOk;
}

struct Tracer {
  std::ofstream out;
  long n = 0;

  template <class St>
  void operator()(const St& s) {
    out << "#" << n++ << ": " << pretty(s) << "\n";
  }
};

int cmdEval(const std::string& file, const std::string& calcFlag,
            const std::string& semantics, long fuel,
            const std::string& tracePath) {
  Calculus calc;
  if (int rc = pickCalculus(file, calcFlag, calc)) return rc;

  if (!tracePath.empty() && semantics != "machine") {
    std::cerr << "--trace is only available with --semantics machine\n";
    return kExitUsage;
  }

  auto src = readFile(file);
  if (!src) {
    std::cerr << "cannot read " << file << "\n";
    return kExitUsage;
  }

  Tracer tracer;
  if (!tracePath.empty()) {
    tracer.out.open(tracePath);
    if (!tracer.out) {
      std::cerr << "cannot write " << tracePath << "\n";
      return kExitUsage;
    }
  }

  std::string line;
  if (calc == Calculus::Mono) {
    auto parsed = parseMonoTerm(*src);
    if (const auto* e = std::get_if<ParseError>(&parsed)) {
      std::cerr << file << ":" << e->render() << "\n";
      return kExitParse;
    }
    const MonoPtr& m = std::get<MonoPtr>(parsed);
    std::optional<MonoAnswer> syn;
    std::optional<MonoCpsAnswer> cps;
    std::optional<EnvMonoAnswer> env;
    if (semantics == "smallstep") syn = evalMonoSmallStep(m, fuel);
    else if (semantics == "machine")
      syn = runMonoMachine(m, fuel,
                           tracePath.empty() ? MonoTraceHook{}
                                             : std::ref(tracer));
    else if (semantics == "cps") cps = evalMonoCps(m, fuel);
    else if (semantics == "env-smallstep") env = evalEnvMonoSmallStep(m, fuel);
    else if (semantics == "env-machine") env = runEnvMonoMachine(m, fuel);
    else if (semantics == "env-cps") cps = evalEnvMonoCps(m, fuel);
    else {
      std::cerr << "unknown semantics " << semantics << " for mono\n";
      return kExitUsage;
    }
    if (syn) line = render(canonicalize(*syn));
    else if (cps) line = render(canonicalize(*cps));
    else if (env) line = render(canonicalize(*env));
  } else {
    auto parsed = parseCompResponse(*src);
    if (const auto* e = std::get_if<ParseError>(&parsed)) {
      std::cerr << file << ":" << e->render() << "\n";
      return kExitParse;
    }
    const CompResponse& r = std::get<CompResponse>(parsed);
    std::optional<CompSynAnswer> syn;
    std::optional<CompCpsAnswer> cps;
    std::optional<EnvCompAnswer> env;
    if (semantics == "smallstep") syn = runCompSmallStep(r, fuel);
    else if (semantics == "machine")
      syn = runCompMachine(r, fuel,
                           tracePath.empty() ? CompTraceHook{}
                                             : std::ref(tracer));
    else if (semantics == "cps") cps = runCompCps(r, fuel);
    else if (semantics == "env-machine") env = runEnvCompMachine(r, fuel);
    else if (semantics == "env-cps") cps = runEnvCompCps(r, fuel);
    else {
      std::cerr << "unknown semantics " << semantics << " for comp\n";
      return kExitUsage;
    }
    if (syn) line = render(canonicalize(*syn));
    else if (cps) line = render(canonicalize(*cps));
    else if (env) line = render(canonicalize(*env));
  }

  if (line.empty()) {
    std::cout << "fuel-exhausted\n";
    return kExitFuel;
  }
  std::cout << line << "\n";
  return kExitOk;
}

int cmdCheck(const std::string& calcFlag, std::uint64_t seed,
             std::size_t cases, std::size_t size, long fuel) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.size = size;
  DiffReport rep;
  if (calcFlag == "comp") {
    cfg.calculus = Calculus::Comp;
    rep = diffCheckComp(cfg, cases, fuel, compArtifacts());
  } else {
    rep = diffCheckMono(cfg, cases, fuel, monoArtifacts());
  }
  std::cout << rep.text();
  if (!rep.failures.empty()) {
    std::cerr << rep.records();
    return kExitDiff;
  }
  return kExitOk;
}

int cmdDesugar(const std::string& file) {
  auto src = readFile(file);
  if (!src) {
    std::cerr << "cannot read " << file << "\n";
    return kExitUsage;
  }
  auto parsed = parseMonoTerm(*src);
  if (const auto* e = std::get_if<ParseError>(&parsed)) {
    std::cerr << file << ":" << e->render() << "\n";
    return kExitParse;
  }
  std::cout << pretty(desugarMonoToComp(std::get<MonoPtr>(parsed))) << "\n";
  return kExitOk;
}

int cmdFmt(const std::string& file, bool inPlace) {
  Calculus calc;
  if (int rc = pickCalculus(file, "", calc)) return rc;
  auto src = readFile(file);
  if (!src) {
    std::cerr << "cannot read " << file << "\n";
    return kExitUsage;
  }
  std::string out;
  if (calc == Calculus::Mono) {
    auto parsed = parseMonoTerm(*src);
    if (const auto* e = std::get_if<ParseError>(&parsed)) {
      std::cerr << file << ":" << e->render() << "\n";
      return kExitParse;
    }
    out = pretty(std::get<MonoPtr>(parsed));
  } else {
    auto parsed = parseCompResponse(*src);
    if (const auto* e = std::get_if<ParseError>(&parsed)) {
      std::cerr << file << ":" << e->render() << "\n";
      return kExitParse;
    }
    out = pretty(std::get<CompResponse>(parsed));
  }
  if (inPlace) {
    std::ofstream o(file);
    o << out << "\n";
  } else {
    std::cout << out << "\n";
  }
  return kExitOk;
}

}  // namespace

int realMain(int argc, char** argv) {
  CLI::App app{"workbench for monolithic and compositional copattern calculi"};
  app.require_subcommand(1);

  long defaultFuel = 100000;
  if (const char* e = std::getenv("COPAT_FUEL")) {
    long v = std::atol(e);
    if (v > 0) defaultFuel = v;
  }

  std::string file, calcFlag, semantics = "smallstep", tracePath;
  long fuel = defaultFuel;
  std::uint64_t seed = 42;
  std::size_t cases = 1000, size = 30;
  bool inPlace = false;

  auto* eval = app.add_subcommand("eval", "evaluate a program");
  eval->add_option("file", file)->required();
  eval->add_option("--calculus", calcFlag)
      ->check(CLI::IsMember({"mono", "comp"}));
  eval->add_option("--semantics", semantics)
      ->check(CLI::IsMember({"smallstep", "machine", "cps", "env-machine",
                             "env-cps", "env-smallstep"}));
  eval->add_option("--fuel", fuel)->check(CLI::PositiveNumber);
  eval->add_option("--trace", tracePath);

  auto* check = app.add_subcommand("check", "differential evaluator check");
  check->add_option("--calculus", calcFlag)
      ->check(CLI::IsMember({"mono", "comp"}));
  check->add_option("--seed", seed);
  check->add_option("--cases", cases);
  check->add_option("--size", size)->check(CLI::PositiveNumber);
  check->add_option("--fuel", fuel)->check(CLI::PositiveNumber);

  auto* desugar = app.add_subcommand("desugar", "translate mono to comp");
  desugar->add_option("file", file)->required();

  auto* fmt = app.add_subcommand("fmt", "pretty-print a program");
  fmt->add_option("file", file)->required();
  fmt->add_flag("--in-place", inPlace);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (eval->parsed()) return cmdEval(file, calcFlag, semantics, fuel, tracePath);
  if (check->parsed()) return cmdCheck(calcFlag, seed, cases, size, fuel);
  if (desugar->parsed()) return cmdDesugar(file);
  return cmdFmt(file, inPlace);
}

namespace {

struct MainArgs {
  int argc;
  char** argv;
  int rc;
};

void* mainThread(void* p) {
  auto* a = static_cast<MainArgs*>(p);
  a->rc = realMain(a->argc, a->argv);
  return nullptr;
}

}  // namespace

// The CPS evaluators recurse to the fuel bound, so run everything on a stack
// sized for the default budget.
int main(int argc, char** argv) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, 1024L * 1024 * 1024);
  pthread_t tid;
  MainArgs args{argc, argv, 1};
  if (pthread_create(&tid, &attr, mainThread, &args) != 0)
    return realMain(argc, argv);
  pthread_join(tid, nullptr);
  return args.rc;
}
