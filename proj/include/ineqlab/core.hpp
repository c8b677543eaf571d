#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ineqlab {

// Error taxonomy. Every precondition violation throws one of these; callers
// that want a single catch point can use Error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidParameter : Error { using Error::Error; };  // bad argument value
struct BuildFailure     : Error { using Error::Error; };  // constructor could not produce the object
struct NumericError     : Error { using Error::Error; };  // iteration failed to converge / lost precision
struct SingularWeight   : Error { using Error::Error; };  // division by a vanishing weight derivative
struct UnsupportedSet   : Error { using Error::Error; };  // set type outside the exact-cost catalogue
struct CoverageError    : Error { using Error::Error; };  // grid/box misses too much mass
struct AlignmentError   : Error { using Error::Error; };  // discrete supports do not match
struct SizeError        : Error { using Error::Error; };  // dimension/extent mismatch or cap exceeded
struct ConfigError      : Error { using Error::Error; };  // config file parse/validation problem
struct IoError          : Error { using Error::Error; };  // file read/write problem
struct CriterionError   : Error { using Error::Error; };  // criterion integrand ill-posed
struct InvalidMeasure   : Error { using Error::Error; };  // weights not a probability
struct InvalidCost      : Error { using Error::Error; };  // cost violates required shape

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

inline double sq(double x) { return x * x; }

}  // namespace ineqlab
