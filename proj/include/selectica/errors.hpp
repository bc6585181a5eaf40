#pragma once

#include <stdexcept>
#include <string>

namespace selectica {

// Quantile argument too extreme to represent as a finite double.
struct InfiniteQuantile : std::runtime_error {
    explicit InfiniteQuantile(const std::string& msg) : std::runtime_error(msg) {}
};

// Truncation support carries less than the configured floor of Gaussian mass.
struct DegenerateTruncation : std::runtime_error {
    explicit DegenerateTruncation(const std::string& msg) : std::runtime_error(msg) {}
};

// Mean-parameter root not bracketed within the representable search range.
struct RootNotBracketed : std::runtime_error {
    explicit RootNotBracketed(const std::string& msg) : std::runtime_error(msg) {}
};

// Lasso selected no features; the replicate records no inference.
struct EmptySelection : std::runtime_error {
    explicit EmptySelection(const std::string& msg) : std::runtime_error(msg) {}
};

// Selected design submatrix is rank deficient.
struct SingularDesign : std::runtime_error {
    explicit SingularDesign(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace selectica
