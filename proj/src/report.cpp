#include "wdexp/report.hpp"

#include <algorithm>
#include <cmath>

namespace wdexp {

namespace {
bool passes(double lhs, double rhs) {
  return (rhs - lhs) >= -1e-12 * std::max(1.0, std::abs(rhs));
}
}  // namespace

BoundReport make_report(std::string name, std::vector<std::pair<std::string, double>> parameters,
                        double lhs, double rhs, std::string notes) {
  BoundReport r;
  r.name = std::move(name);
  r.parameters = std::move(parameters);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.pass = passes(lhs, rhs) && std::isfinite(lhs) && std::isfinite(rhs);
  r.notes = std::move(notes);
  return r;
}

BoundReport combine_reports(std::string name, const std::vector<BoundReport>& parts, std::string notes) {
  if (parts.empty()) return make_report(std::move(name), {}, 0.0, 0.0, std::move(notes));
  const BoundReport* worst = &parts.front();
  bool all = true;
  for (const auto& p : parts) {
    all = all && p.pass;
    double rel = p.margin / std::max(1.0, std::abs(p.rhs));
    double wrel = worst->margin / std::max(1.0, std::abs(worst->rhs));
    if (rel < wrel) worst = &p;
  }
  BoundReport r = *worst;
  r.name = std::move(name);
  r.pass = all;
  if (!notes.empty()) r.notes = notes + (r.notes.empty() ? "" : "; " + r.notes);
  return r;
}

}  // namespace wdexp
