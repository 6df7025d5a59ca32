#ifndef MIDHYP_COMMON_HPP
#define MIDHYP_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace midhyp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr const char* version = "0.1.0";

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

// Raised when a configuration is not in general position (tied midpoint,
// ideal point on a midpoint, ...).
class DegenerateInput : public Error {
public:
  using Error::Error;
};

// Internal invariant broken; indicates a bug or an inadmissible prime.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

class Refused : public Error {
public:
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok)
    throw InvalidParameter(what);
}

constexpr std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n)
    return 0;
  if (k > n - k)
    k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i)
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

inline BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i)
    r *= i;
  return r;
}

constexpr bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

} // namespace midhyp

#endif // MIDHYP_COMMON_HPP
