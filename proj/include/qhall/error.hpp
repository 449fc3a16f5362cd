#pragma once

#include <stdexcept>
#include <string>

namespace qhall {

/// Base class for every failure raised by the toolkit.
///
/// `domain_error` subclasses describe physics outcomes the caller asked for
/// but that do not exist (a closed gap, an ambiguous label, ...). The CLI maps
/// them to exit code 1; everything else is a usage or numerical failure.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class domain_error : public error {
public:
  using error::error;
};

class invalid_argument : public error {
public:
  using error::error;
};

#define QHALL_DEFINE_ERROR(name, base)                                         \
  class name : public base {                                                   \
  public:                                                                      \
    explicit name(const std::string& what) : base(#name ": " + what) {}        \
  }

QHALL_DEFINE_ERROR(ZeroDenominator, invalid_argument);
QHALL_DEFINE_ERROR(InvalidGapIndex, invalid_argument);
QHALL_DEFINE_ERROR(InvalidFlux, invalid_argument);
QHALL_DEFINE_ERROR(EigensolveFailure, error);
QHALL_DEFINE_ERROR(SingularLink, error);
QHALL_DEFINE_ERROR(RoundingFailure, error);
QHALL_DEFINE_ERROR(IntegratorFailure, error);
QHALL_DEFINE_ERROR(GaugeUndefined, domain_error);
QHALL_DEFINE_ERROR(GapClosure, domain_error);
QHALL_DEFINE_ERROR(AmbiguousLabel, domain_error);
QHALL_DEFINE_ERROR(NotInGap, domain_error);
QHALL_DEFINE_ERROR(FermiOnSpectrum, domain_error);

#undef QHALL_DEFINE_ERROR

}  // namespace qhall
