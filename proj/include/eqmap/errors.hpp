#pragma once

#include <stdexcept>
#include <string>

namespace eqmap {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define EQMAP_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                           \
    explicit Name(const std::string& what)                        \
        : Error(std::string(#Name) + ": " + what) {}              \
  }

EQMAP_DEFINE_ERROR(CapExceeded);
EQMAP_DEFINE_ERROR(AmbiguousMatch);
EQMAP_DEFINE_ERROR(HypothesisViolated);
EQMAP_DEFINE_ERROR(ShapeMismatch);
EQMAP_DEFINE_ERROR(NotAGroup);
EQMAP_DEFINE_ERROR(DecompositionUnstable);
EQMAP_DEFINE_ERROR(MatchingAmbiguous);
EQMAP_DEFINE_ERROR(InternalInconsistency);
EQMAP_DEFINE_ERROR(NonFreeOrbit);
EQMAP_DEFINE_ERROR(SearchTooLarge);
EQMAP_DEFINE_ERROR(SectionUndefined);
EQMAP_DEFINE_ERROR(EmptyCloud);
EQMAP_DEFINE_ERROR(BlowUp);
EQMAP_DEFINE_ERROR(AnsatzNotSubsetOfR);
EQMAP_DEFINE_ERROR(ParseError);

#undef EQMAP_DEFINE_ERROR

}  // namespace eqmap
