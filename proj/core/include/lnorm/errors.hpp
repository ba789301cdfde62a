#pragma once

#include <stdexcept>
#include <string>

namespace lnorm {

/// A numerically evaluated quantity violated an inequality that holds in exact
/// arithmetic. This signals a bug (or an unexpectedly ill-conditioned input),
/// never a normal outcome.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// No admissible epsilon exists for the Gamma-ratio witness at the requested s.
class NoValidEpsilon : public std::domain_error {
 public:
  explicit NoValidEpsilon(const std::string& what) : std::domain_error(what) {}
};

}  // namespace lnorm
