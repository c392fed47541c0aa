#pragma once

#include <stdexcept>
#include <string>

namespace llp {

// Library-wide error conditions. Every throwing operation documents which of
// these it can raise; the C API maps them onto llp_status codes.
enum class Errc {
  NegativeMass,
  MassNotOne,
  EtaOutOfRange,
  EmptySupport,
  BagSizeExceedsData,
  BatchSmallerThanBag,
  EmptySample,
  SingleBagBatch,
  InvalidSplit,
  MissingMarginal,
  ThetaOutOfRange,
  HypothesisUndefinedOnSupport,
  EmptyHypothesisClass,
  DimensionMismatch,
  NonPositiveBound,
  EnumerationTooLarge,
  InsufficientData,
  PreconditionViolated,
  InvalidArgument,
  Io,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) raise(code, what);
}

}  // namespace llp
