#pragma once

#include <stdexcept>
#include <string>

namespace cohmms {

/// Malformed input: dimension mismatches, unparseable fields, bad schemas.
/// Distinct from invariant violations, which are reported as data.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// A well-formed request that the domain rejects: mismatched kernel spaces,
/// entrywise functions applied outside their domain, exhausted retry budgets,
/// size guards, unsupported numeric-mode combinations.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cohmms
