// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gsac {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed configuration, out-of-range parameter, etc.
/// The CLI maps these to exit code 1; everything else maps to 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Which architecture rule a configuration broke.
enum class ConfigRule {
    Empty,             // no sub-arrays
    LengthMismatch,    // per-sub-array lists of different lengths
    RfSum,             // sum of N_RF,i != N_RF
    AntennaSum,        // sum of N_t,i != N_t
    RfPerSubArray,     // 1 <= N_RF,i <= N_t,i violated
    PhaseShifterCount, // N_PS,i != N_t,i
    Ordering,          // N_sub <= N_RF <= N_t <= N_PS violated
};

const char* to_string(ConfigRule rule) noexcept;

class ConstraintViolation : public ValidationError {
public:
    ConstraintViolation(ConfigRule rule, const std::string& detail)
        : ValidationError(std::string("constraint violation [") + to_string(rule) + "]: " + detail),
          rule_(rule) {}

    ConfigRule rule() const noexcept { return rule_; }

private:
    ConfigRule rule_;
};

class IndivisibleAllocation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OutOfRange : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DictionaryTooSmall : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MismatchedSearchSpace : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ZeroPower : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Numerical failures during precoder design or rate evaluation.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DecompositionFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularUpdate : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RankDeficientAnalog : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace gsac
