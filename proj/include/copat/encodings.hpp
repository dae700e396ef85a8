#ifndef COPAT_ENCODINGS_HPP
#define COPAT_ENCODINGS_HPP

#include <cstddef>
#include <vector>

#include "copat/syntax.hpp"

namespace copat {

// Index name reserved for the vertical-composition encoding; user programs
// must not use it (the frontend rejects it).
inline const Name kOpenIndex = "Open";

// Translation of monolithic programs into the compositional calculus:
// objects become right-nested option chains ending in Raise, copatterns are
// curried one frame at a time, and each right-hand side gets a fresh unused
// failure binder.
CompPtr desugarMonoToComp(const MonoPtr& m);

struct DesugarReport {
  MonoPtr input;
  CompPtr output;
  std::size_t optionCount = 0;  // options flattened across all objects
  // true when some copattern consumes frames, so the source could block on an
  // under-applied question where the translation falls through instead
  bool underApplyRisk = false;
};

DesugarReport desugarReport(const MonoPtr& m);

// object O = fun{ O | self Open -> fun{ x -> O ? x } }, generalized to a
// chain of options tried in order.
CompPtr objectEnc(const std::vector<CompOptPtr>& options);
CompPtr objectEnc(const CompOptPtr& option);

// m.Open n: ask an encoded object to extend itself with the handler n.
CompPtr openApp(const CompPtr& m, const CompPtr& n);

// compose o o' = object{ ?x -> o.Open (o'.Open x) } applied to two encoded
// objects; observationally the object of the chained options.
CompPtr composeEnc(const CompPtr& m1, const CompPtr& m2);

}  // namespace copat

#endif
