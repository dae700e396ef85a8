#ifndef COPAT_HARNESS_HPP
#define COPAT_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "copat/canonical.hpp"
#include "copat/syntax.hpp"

namespace copat {

enum class Calculus { Mono, Comp };

struct GenConfig {
  std::uint64_t seed = 42;
  std::size_t size = 30;  // max node count
  std::vector<Name> freeVarPool = {"f", "g", "h"};
  std::vector<Name> indexPool = {"Head", "Tail", "Fst", "Snd"};
  Calculus calculus = Calculus::Mono;
};

// Seed for the i-th case of a run, mixed so neighboring cases decorrelate.
std::uint64_t caseSeed(std::uint64_t runSeed, std::size_t i);

// Deterministic in cfg.seed; well-scoped (binders fresh, leaves draw from
// scope or the free pool); size-bounded by cfg.size nodes.
MonoPtr genMonoTerm(const GenConfig& cfg);
CompResponse genCompResponse(const GenConfig& cfg);

// Questions over generated argument terms, for probing options/objects.
MonoQuestion genMonoQuestion(const GenConfig& cfg);
CompQuestion genCompQuestion(const GenConfig& cfg);

// ---------------------------------------------------------------------------
// Differential runner
// ---------------------------------------------------------------------------

// One evaluator under test: returns its canonical answer, or nullopt when the
// fuel budget ran out.
template <class Input, class Canon>
struct Artifact {
  std::string name;
  std::function<std::optional<Canon>(const Input&, long fuel)> run;
};

using MonoArtifact = Artifact<MonoPtr, CanonicalMono>;
using CompArtifact = Artifact<CompResponse, CanonicalComp>;

struct DiffFailure {
  std::uint64_t seed;
  std::string input;
  std::vector<std::pair<std::string, std::string>> answers;  // artifact -> answer or "fuel-exhausted"
};

struct DiffReport {
  std::size_t cases = 0;
  std::size_t agreed = 0;
  std::size_t skippedFuel = 0;
  std::vector<DiffFailure> failures;

  std::string text() const;
  std::string records() const;  // one line per failure: seed TAB input TAB answers
};

// Per case: run all artifacts at `fuel`. All complete -> compare. All exhaust
// -> skippedFuel. Mixed -> re-run the exhausted ones at 100x fuel; if still
// mixed, record a failure.
DiffReport diffCheckMono(const GenConfig& cfg, std::size_t cases, long fuel,
                         const std::vector<MonoArtifact>& artifacts);
DiffReport diffCheckComp(const GenConfig& cfg, std::size_t cases, long fuel,
                         const std::vector<CompArtifact>& artifacts);

// The standard artifact sets (filled in as evaluators exist).
std::vector<MonoArtifact> monoArtifacts();
std::vector<CompArtifact> compArtifacts();

}  // namespace copat

#endif
