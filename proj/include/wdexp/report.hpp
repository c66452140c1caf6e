#pragma once
#include <string>
#include <utility>
#include <vector>

namespace wdexp {

// Record of one numerical inequality check lhs <= rhs.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::string notes;
};

BoundReport make_report(std::string name, std::vector<std::pair<std::string, double>> parameters,
                        double lhs, double rhs, std::string notes = {});

// Combines reports into one: worst margin wins, pass only if all pass.
BoundReport combine_reports(std::string name, const std::vector<BoundReport>& parts,
                            std::string notes = {});

}  // namespace wdexp
