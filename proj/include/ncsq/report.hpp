#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ncsq {

// One verification record: measured left side against its bound.
// pass holds exactly when lhs <= rhs * (1 + tol).
struct CheckReport {
  std::string check_id;
  std::uint64_t seed = 0;
  int d = 0, J = 0, m = 0, R = 0;
  double lambda = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs, 0 when rhs == 0 and lhs == 0
  double budget = 1.0; // multiplicative budget already folded into rhs
  bool pass = false;
  double tolerance = 0.0;
  std::string witness;  // path of the serialized instance on failure

  void finalize(double tol_rel) {
    tolerance = tol_rel;
    ratio = rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : 1.0 / 0.0);
    pass = lhs <= rhs * (1.0 + tol_rel) + 0.0;
  }
  // for checks of quantities that should vanish: rhs is the allowance
  void finalize_abs(double allowance) {
    tolerance = allowance;
    rhs = allowance;
    ratio = allowance != 0.0 ? lhs / allowance : (lhs == 0.0 ? 0.0 : 1.0 / 0.0);
    pass = lhs <= allowance;
  }
};

std::string csv_header();
std::string to_csv_row(const CheckReport& r);

}  // namespace ncsq
