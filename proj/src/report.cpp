#include "ncsq/report.hpp"

#include <cstdio>

namespace ncsq {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "check_id,seed,d,J,m,R,lambda,lhs,rhs,ratio,budget,pass";
}

std::string to_csv_row(const CheckReport& r) {
  std::string row;
  row += r.check_id;
  row += ',';
  row += std::to_string(r.seed);
  row += ',';
  row += std::to_string(r.d);
  row += ',';
  row += std::to_string(r.J);
  row += ',';
  row += std::to_string(r.m);
  row += ',';
  row += std::to_string(r.R);
  row += ',';
  row += fmt_double(r.lambda);
  row += ',';
  row += fmt_double(r.lhs);
  row += ',';
  row += fmt_double(r.rhs);
  row += ',';
  row += fmt_double(r.ratio);
  row += ',';
  row += fmt_double(r.budget);
  row += ',';
  row += r.pass ? "1" : "0";
  return row;
}

}  // namespace ncsq
