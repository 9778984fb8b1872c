#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace ncsq {

using cplx = std::complex<double>;

// Central tolerance record. The defaults below are the contract used by the
// verification suites; callers that need different slack pass their own copy.
struct Tolerances {
  double eig_reconstruct = 1e-10;  // relative eigendecomposition residual
  double eig_zero = 1e-12;         // relative kernel classification cutoff
  double jacobi_threshold = 1e-13; // off-diagonal sweep threshold factor
  int jacobi_max_sweeps = 100;
  double proj_idem = 1e-10;        // P*P == P
  double proj_eigval = 1e-8;       // projection spectrum in {0,1}
  double join_cutoff = 1e-10;      // rank cutoff in projection joins
  double algebraic = 1e-10;        // relative, exact algebraic identities
  double psd_order = 1e-8;         // operator-order checks
  double vanishing = 1e-9;         // identities that vanish exactly
  double bracket_slack = 1e-6;     // rc-norm bracket: lower <= upper + slack
};

inline const Tolerances& tol() {
  static const Tolerances t;
  return t;
}

// splitmix64, used to derive independent stream seeds from a base seed.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic RNG. mt19937_64 has a standard-mandated output sequence and
// all value transforms below are explicit, so streams are reproducible
// across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Box-Muller; caches the spare deviate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  cplx cnormal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    // multiply-shift; bias is negligible for the n used here (<= 2^32)
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  int sign() { return (eng_() & 1) ? 1 : -1; }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ncsq
