#pragma once

/// Shared vocabulary: small fixed-size geometry, exact rationals, errors
/// and the seeded random streams used by every randomized operation.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace vv {

/// Points in d = 2 are stored with a zero third coordinate, so one type
/// serves both dimensions.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses "p/q", an integer, or a finite decimal ("-0.125", "3e-4") into an
/// exact rational. Throws Error on malformed input.
Rational parseRational(const std::string& s);
std::string formatRational(const Rational& r);
double toDouble(const Rational& r);

/// Exact rational value of a double (every finite double is dyadic).
Rational rationalFromDouble(double x);

/// %.17g formatting, the one float format used by every emitted file.
std::string fmt17(double x);

using Rng = std::mt19937_64;

/// Independent stream number `index` under `seed`. Streams depend only on
/// the pair, never on scheduling.
Rng makeStream(std::uint64_t seed, std::uint64_t index);

/// Uniform in [0,1) from the top 53 bits.
inline double uniform01(Rng& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

constexpr double kPi = 3.14159265358979323846;

inline double deg(double degrees) { return degrees * kPi / 180.0; }

}  // namespace vv

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vv {

/// Runs fn(i) for i in [0,count) on up to `threads` workers. Work is handed
/// out by index, so any result written to slot i is scheduling-independent.
template <class Fn>
void parallelFor(std::size_t count, int threads, Fn&& fn) {
  std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failMutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failMutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace vv
