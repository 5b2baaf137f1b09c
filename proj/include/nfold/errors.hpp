#pragma once

#include <stdexcept>
#include <string>

namespace nfold {

/// Malformed input: bad grid extents, unparsable JSON, mismatched seams, ...
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested computation exceeds a configured size cap.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A rewrite/composition was attempted where its pattern does not match.
struct ApplicationError : std::runtime_error {
  explicit ApplicationError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant failed; indicates a bug, not bad input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace nfold
