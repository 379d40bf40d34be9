#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cst/detection.hpp"

namespace cst {

namespace {

std::string number(double v) { return std::isnan(v) ? std::string() : fmt::format("{}", v); }

}  // namespace

std::string flags_to_string(std::uint32_t f) {
  std::string out;
  auto add = [&](std::uint32_t bit, const char* name) {
    if (!(f & bit)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(flags::short_control, "short_control");
  add(flags::short_test, "short_test");
  add(flags::clamped, "clamped");
  add(flags::failed, "failed");
  return out;
}

std::string summary_cell(const ReportSummary& s) {
  return fmt::format("{} ({:.4g}%)", s.discriminated, s.percent);
}

void write_report(std::ostream& out, const DiscriminationReport& report) {
  out << "complainant_id,p_c,p_t,delta_p,ci_low,ci_high,discriminated,significant,flags\n";
  for (const auto& r : report.rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.index, number(r.p_c), number(r.p_t),
               number(r.delta_p), r.ci ? number(r.ci->lower) : "", r.ci ? number(r.ci->upper) : "",
               r.discriminated ? 1 : 0, r.significant ? 1 : 0, flags_to_string(r.flags));
  }
  const auto& s = report.summary;
  fmt::print(out, "# method={} k={} include_centers={}\n", to_string(s.method), s.k,
             s.include_centers ? 1 : 0);
  fmt::print(out, "# discriminated={} significant={} protected={} percent={:.4g}\n",
             s.discriminated, s.significant, s.protected_count, s.percent);
  for (const auto& w : report.warnings) fmt::print(out, "# warning: {}\n", w);
}

void write_report(const std::string& path, const DiscriminationReport& report) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path));
  write_report(out, report);
  if (!out) throw Error(fmt::format("failed writing '{}'", path));
}

}  // namespace cst
