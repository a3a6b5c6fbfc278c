#pragma once

#include <stdexcept>
#include <string>

namespace ncmimo
{

// Every library error derives from Error so callers can catch one type.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

class DomainError : public Error
{
public:
    using Error::Error;
};

// The coherence length cannot be written as t^2/(r+t)^2 * SNR^(-2 nu) with nu > 0.
class RegimeError : public Error
{
public:
    using Error::Error;
};

// Training needs l > t symbols per block.
class TrainingInfeasibleError : public Error
{
public:
    using Error::Error;
};

class UsageError : public Error
{
public:
    using Error::Error;
};

class ConsistencyError : public Error
{
public:
    using Error::Error;
};

// Raised when an iterative method exhausts its budget; carries the best estimate.
class NumericError : public Error
{
public:
    NumericError(const std::string& what, double estimate, double error_estimate)
        : Error(what), estimate_(estimate), error_estimate_(error_estimate)
    {
    }

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace ncmimo
