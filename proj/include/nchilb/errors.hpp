#pragma once

#include <stdexcept>
#include <string>

namespace nchilb {

// Base class for every error raised by the library. Subclasses exist where
// callers need to distinguish the failure mode.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Two operands live over different scalar fields.
class FieldMismatchError : public Error {
public:
  explicit FieldMismatchError(const std::string& what) : Error(what) {}
};

// Matrix/vector dimensions are inconsistent with the operation.
class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& what) : Error(what) {}
};

// Semantically invalid input: non-prime modulus, denominator divisible by p,
// malformed ideal data, point failing a validity precondition, and so on.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// A chart-local operation was asked for at a point with vanishing chart
// determinant.
class NotInChartError : public DomainError {
public:
  explicit NotInChartError(const std::string& what) : DomainError(what) {}
};

// An enumeration job exceeds the configured tuple budget.
class BudgetError : public Error {
public:
  explicit BudgetError(const std::string& what) : Error(what) {}
};

// An internal invariant failed (e.g. a group-order division that must be
// exact came out fractional). Never caused by user input.
class InternalError : public Error {
public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace nchilb
