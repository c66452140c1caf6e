#include "wdexp/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include "wdexp/errors.hpp"

namespace wdexp {

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

int default_threads() {
  if (const char* s = std::getenv("WDEXP_THREADS")) {
    int n = std::atoi(s);
    if (n > 0) return n;
  }
  return 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::size_t first_index = n;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// Error is |K21 - G10| with a separately evaluated Gauss rule; the embedded
// estimate from the Kronrod routine stalls near 1e-10 on sharp peaks.
Segment gk_segment(const std::function<double(double)>& f, double a, double b) {
  double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0);
  double g = boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
  double err = std::max(std::abs(v - g), 2.0 * std::numeric_limits<double>::epsilon() * std::abs(v));
  return {a, b, v, err};
}

void resum(const std::priority_queue<Segment>& heap, double& total, double& err, double& abs_total) {
  std::vector<Segment> all;
  all.reserve(heap.size());
  auto copy = heap;
  while (!copy.empty()) {
    all.push_back(copy.top());
    copy.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  CompensatedSum tv, te, ta;
  for (const auto& seg : all) {
    tv.add(seg.value);
    te.add(seg.error);
    ta.add(std::abs(seg.value));
  }
  total = tv.value();
  err = te.value();
  abs_total = ta.value();
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     double abs_tol, unsigned max_depth) {
  if (a == b) return {0.0, 0.0};
  std::priority_queue<Segment> heap;
  heap.push(gk_segment(f, a, b));
  double total = heap.top().value;
  double err = heap.top().error;
  double abs_total = std::abs(total);
  const std::size_t max_segments = std::size_t{1} << std::min(max_depth, 20u);
  std::size_t segments = 1, next_resum = 64;
  // Error estimates below the rounding floor of the summed segments cannot improve.
  auto target = [&] {
    return std::max({abs_tol, rel_tol * std::abs(total), 64.0 * std::numeric_limits<double>::epsilon() * abs_total});
  };
  while (err > target()) {
    if (segments >= max_segments)
      throw ToleranceError("adaptive quadrature did not converge, error estimate " +
                               std::to_string(err),
                           err);
    Segment s = heap.top();
    heap.pop();
    double m = 0.5 * (s.a + s.b);
    Segment l = gk_segment(f, s.a, m), r = gk_segment(f, m, s.b);
    heap.push(l);
    heap.push(r);
    ++segments;
    total += (l.value + r.value) - s.value;
    err += (l.error + r.error) - s.error;
    abs_total += (std::abs(l.value) + std::abs(r.value)) - std::abs(s.value);
    if (segments == next_resum) {
      resum(heap, total, err, abs_total);
      next_resum *= 2;
    }
  }
  resum(heap, total, err, abs_total);
  return {total, err};
}

cplx gauss_legendre(const std::function<cplx(double)>& f, double a, double b, int panels) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  double h = (b - a) / panels;
  CompensatedComplexSum acc;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h, half = 0.5 * h;
    cplx s = 0.0;
    std::size_t first = 0;
    if (x[0] == 0.0) {
      s = w[0] * f(mid);
      first = 1;
    }
    for (std::size_t i = first; i < x.size(); ++i)
      s += w[i] * (f(mid + half * x[i]) + f(mid - half * x[i]));
    acc.add(s * half);
  }
  return acc.value();
}

}  // namespace wdexp
