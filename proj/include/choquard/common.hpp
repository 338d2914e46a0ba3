#ifndef CHOQUARD_COMMON_HPP
#define CHOQUARD_COMMON_HPP

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

namespace choquard {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Error hierarchy. The CLI maps ConfigError/ParameterError to exit code 1
// and the numerical failures to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct RegimeError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct DegenerateInputError : Error {
  using Error::Error;
};
struct InstabilityError : Error {
  double t;
  InstabilityError(const std::string& msg, double t_) : Error(msg), t(t_) {}
};
struct IterationLimitError : Error {
  using Error::Error;
};
struct ResolutionError : Error {
  using Error::Error;
};
struct SingularityError : Error {
  using Error::Error;
};
struct ConstructionError : Error {
  using Error::Error;
};

// Allocator backed by fftw_malloc so every buffer shares the alignment the
// cached FFTW plans were created with (new-array execute requirement).
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  bool operator==(const FftwAllocator&) const { return true; }
  bool operator!=(const FftwAllocator&) const { return false; }
};

using CplxVec = std::vector<cplx, FftwAllocator<cplx>>;
using RealVec = std::vector<double, FftwAllocator<double>>;

// Deterministic normal deviates (Box-Muller on top of mt19937_64); used so
// that seeded runs are bit-identical across standard library versions.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double operator()();

 private:
  double next_uniform();
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::string format_double(double x);  // shortest round-trip, for CSV/JSON

}  // namespace choquard

#endif
