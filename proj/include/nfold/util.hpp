#pragma once

#include <cstdint>
#include <functional>
#include <future>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "nfold/errors.hpp"

namespace nfold {

/// Exact rational with normalized sign and gcd-reduced terms.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) { reduce(); }
  explicit Rational(long long n) : num(n), den(1) {}

  void reduce() {
    if (den == 0) throw InternalError("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num * b.num, a.den * b.den);
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

/// Deterministic splitmix-style generator. Fully specified here so seeded
/// runs reproduce across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InternalError("rng bound 0");
    return next() % bound;
  }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a 64-bit digest, hex-encoded. Used to stamp inputs into reports.
std::string fnv1a_hex(const std::string& bytes);

/// Map f over [0, n) on several threads, collecting results in index order.
/// Output is independent of the thread count.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& f,
                            unsigned threads = 0) {
  std::vector<T> out(n);
  if (n == 0) return out;
  unsigned hw = threads ? threads : std::thread::hardware_concurrency();
  if (hw <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::size_t workers = std::min<std::size_t>(hw, n);
  std::vector<std::future<void>> futs;
  futs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
    }));
  }
  for (auto& fu : futs) fu.get();
  return out;
}

}  // namespace nfold
