#pragma once
#include <complex>
#include <cstddef>
#include <functional>

namespace wdexp {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

// Thread count from WDEXP_THREADS, else 1.
int default_threads();

// Calls fn(i) for every i in [0, n). Each call must only write state owned by
// slot i; results are then independent of the worker count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod on [a, b]; throws ToleranceError when the estimate
// exceeds max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 1e-14, unsigned max_depth = 30);

// Composite 20-point Gauss-Legendre with `panels` equal panels.
cplx gauss_legendre(const std::function<cplx(double)>& f, double a, double b, int panels);

// Japanese bracket sqrt(1 + x^2).
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

}  // namespace wdexp
