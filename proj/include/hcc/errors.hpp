#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hcc {

// Base class for all library errors. `kind()` is a stable, machine-readable
// tag (also the prefix of what()); the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

#define HCC_ERROR_KIND(NAME)                                                   \
    class NAME : public Error {                                               \
      public:                                                                  \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {}           \
    }

HCC_ERROR_KIND(EmptyRowOrColumn);
HCC_ERROR_KIND(NonPositiveWeight);
HCC_ERROR_KIND(Disconnected);
HCC_ERROR_KIND(ZeroRowSum);
HCC_ERROR_KIND(AlphaOutOfRange);
HCC_ERROR_KIND(NoConvergence);
HCC_ERROR_KIND(KTooLarge);
HCC_ERROR_KIND(EmptyCluster);
HCC_ERROR_KIND(LengthMismatch);
HCC_ERROR_KIND(EmptyCorpus);
HCC_ERROR_KIND(VocabularyEmpty);
HCC_ERROR_KIND(ZeroWeightHyperedge);
HCC_ERROR_KIND(WordUnseen);
HCC_ERROR_KIND(IOFailure);
HCC_ERROR_KIND(InvalidArgument);

#undef HCC_ERROR_KIND

// Non-fatal diagnostics (dropped documents, degenerate k-means data, ...)
// go to stderr; callers that need the details get them in result structs.
void warn(const std::string& msg);

} // namespace hcc
