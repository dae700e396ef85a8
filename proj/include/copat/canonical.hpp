#ifndef COPAT_CANONICAL_HPP
#define COPAT_CANONICAL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "copat/syntax.hpp"

namespace copat {

// Payload-erased image of a question: argument slots and index names only.
// This is the largest observable shared by all evaluator representations.
struct Skeleton {
  struct Frame {
    bool isSlot;  // true: argument slot "_"; false: index with `index` set
    Name index;

    friend bool operator==(const Frame&, const Frame&) = default;
  };
  std::vector<Frame> frames;

  friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

template <class P>
Skeleton skeletonOf(const Question<P>& q) {
  Skeleton s;
  for (auto n = q; n; n = n->tail) {
    if (std::holds_alternative<IdxFrame>(n->head))
      s.frames.push_back({false, std::get<IdxFrame>(n->head).index});
    else
      s.frames.push_back({true, {}});
  }
  return s;
}

std::string render(const Skeleton& s);  // "[_ Head _]"

struct CanonicalMono {
  enum class Tag { Raise, Stuck, Under };
  Tag tag;
  Name name;      // Stuck only
  Skeleton skel;  // Raise, Stuck

  friend bool operator==(const CanonicalMono&, const CanonicalMono&) = default;
};

struct CanonicalComp {
  enum class Tag { Final, Stuck, CoStuck };
  Tag tag;
  std::size_t depth = 0;  // Stuck, CoStuck
  Name name;              // Stuck, CoStuck
  Skeleton skel;          // Final, Stuck

  friend bool operator==(const CanonicalComp&, const CanonicalComp&) = default;
};

// Answer lines, e.g. "raise [_ Head]", "stuck depth=1 f []".
std::string render(const CanonicalMono& a);
std::string render(const CanonicalComp& a);

CanonicalMono canonRaise(Skeleton skel);
CanonicalMono canonStuck(Name x, Skeleton skel);
CanonicalMono canonUnder();

CanonicalComp canonFinal(Skeleton skel);
CanonicalComp canonStuck(std::size_t depth, Name x, Skeleton skel);
CanonicalComp canonCoStuck(std::size_t depth, Name k);

}  // namespace copat

#endif
