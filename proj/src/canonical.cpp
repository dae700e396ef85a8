#include "copat/canonical.hpp"

namespace copat {

std::string render(const Skeleton& s) {
  std::string out = "[";
  bool first = true;
  for (const auto& f : s.frames) {
    if (!first) out += " ";
    first = false;
    out += f.isSlot ? "_" : f.index;
  }
  return out + "]";
}

std::string render(const CanonicalMono& a) {
  switch (a.tag) {
    case CanonicalMono::Tag::Raise: return "raise " + render(a.skel);
    case CanonicalMono::Tag::Stuck: return "stuck " + a.name + " " + render(a.skel);
    default: return "under";
  }
}

std::string render(const CanonicalComp& a) {
  switch (a.tag) {
    case CanonicalComp::Tag::Final: return "final " + render(a.skel);
    case CanonicalComp::Tag::Stuck:
      return "stuck depth=" + std::to_string(a.depth) + " " + a.name + " " + render(a.skel);
    default: return "costuck depth=" + std::to_string(a.depth) + " " + a.name;
  }
}

CanonicalMono canonRaise(Skeleton skel) { return {CanonicalMono::Tag::Raise, {}, std::move(skel)}; }
CanonicalMono canonStuck(Name x, Skeleton skel) {
  return {CanonicalMono::Tag::Stuck, std::move(x), std::move(skel)};
}
CanonicalMono canonUnder() { return {CanonicalMono::Tag::Under, {}, {}}; }

CanonicalComp canonFinal(Skeleton skel) { return {CanonicalComp::Tag::Final, 0, {}, std::move(skel)}; }
CanonicalComp canonStuck(std::size_t depth, Name x, Skeleton skel) {
  return {CanonicalComp::Tag::Stuck, depth, std::move(x), std::move(skel)};
}
CanonicalComp canonCoStuck(std::size_t depth, Name k) {
  return {CanonicalComp::Tag::CoStuck, depth, std::move(k), {}};
}

}  // namespace copat
