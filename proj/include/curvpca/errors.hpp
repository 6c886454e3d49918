#ifndef CURVPCA_ERRORS_HPP
#define CURVPCA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curvpca {

/// Invalid arguments (bad dimension, non-positive radius, malformed input).
/// The CLI maps this to exit code 2.
using validation_error = std::invalid_argument;

/// A query left the region where a model's local graph chart is valid.
class chart_error : public std::domain_error {
public:
  explicit chart_error(const std::string& what) : std::domain_error(what) {}
};

/// Non-convergence, degenerate spectra and descriptor singularities.
/// The CLI maps this to exit code 3 under --strict.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace curvpca

#endif // CURVPCA_ERRORS_HPP
