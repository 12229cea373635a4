#pragma once

#include <stdexcept>
#include <string>

namespace fluctuon {

// Every library failure derives from Error so callers (the CLI in
// particular) can separate numeric/contract failures from bugs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error { public: using Error::Error; };
class ParameterError : public Error { public: using Error::Error; };
class CapacityError : public Error { public: using Error::Error; };
class ContractError : public Error { public: using Error::Error; };
class DegeneracyError : public Error { public: using Error::Error; };
class StateError : public Error { public: using Error::Error; };
class PreconditionError : public Error { public: using Error::Error; };
class NoWitnessError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class ShapeError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

/// Quadrature or fit that could not reach its target.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double achieved)
        : Error(what + " (achieved " + std::to_string(achieved) + ")"), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

} // namespace fluctuon
