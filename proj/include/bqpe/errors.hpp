#pragma once

#include <stdexcept>
#include <string>

namespace bqpe {

/// Thrown when a posterior quantity leaves its valid numeric domain:
/// non-normalizable series (c0 <= 0), undefined circular moments, nonpositive
/// likelihood mass, nonpositive or non-finite marginal, log of a nonpositive
/// mixture probability. The estimation engine treats any of these as a
/// divergence signal for the current trial; they are expected behavior for a
/// truncated-Fourier posterior pushed past its critical concentration.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bqpe
