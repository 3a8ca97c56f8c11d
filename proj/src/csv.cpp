#include "collapselab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace collapselab {

namespace {
constexpr char kHeader[] = "t,mean_risk,stderr,ci_lo,ci_hi,analytic_risk,reps";
}

std::string format_sig12(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string trajectory_to_csv(const RiskTrajectory& traj,
                              const std::optional<ComparisonReport>& comparison,
                              double z_threshold) {
  std::ostringstream out;
  out << kHeader << "\n";
  const bool with_analytic = !traj.analytic.empty();
  if (with_analytic && traj.analytic.size() != traj.mean.size()) {
    throw std::invalid_argument("analytic overlay length mismatch");
  }
  for (std::size_t t = 0; t < traj.mean.size(); ++t) {
    out << t << ',' << format_sig12(traj.mean[t]) << ',' << format_sig12(traj.stderr_of_mean[t])
        << ',' << format_sig12(traj.ci_lo[t]) << ',' << format_sig12(traj.ci_hi[t]) << ',';
    if (with_analytic) out << format_sig12(traj.analytic[t]);
    out << ',' << traj.reps << "\n";
  }
  if (!traj.meta.empty()) out << "# config " << traj.meta << "\n";
  if (comparison.has_value()) {
    out << "# analytic_comparison worst_z=" << format_sig12(comparison->worst_z)
        << " coverage_fraction=" << format_sig12(comparison->coverage_fraction)
        << " z_threshold=" << format_sig12(z_threshold)
        << " pass=" << (comparison->pass ? "true" : "false") << "\n";
  }
  return out.str();
}

std::string analytic_to_csv(const AnalyticTrajectory& traj) {
  std::ostringstream out;
  out << kHeader << "\n";
  for (std::size_t t = 0; t < traj.values.size(); ++t) {
    out << t << ",,,,," << format_sig12(traj.values[t]) << ",0\n";
  }
  out << "# analytic trajectory, converged=" << (traj.converged ? "true" : "false") << "\n";
  return out.str();
}

namespace {

std::optional<double> parse_optional_number(const std::string& field, int line) {
  if (field.empty()) return std::nullopt;
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &consumed);
  } catch (const std::exception&) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  if (consumed != field.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

CsvTable parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CsvTable table;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kHeader) {
        throw std::runtime_error("csv line 1: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, ',')) fields.push_back(field);
    // A trailing empty field is dropped by getline; restore it.
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (fields.size() != 7) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 7 fields");
    }
    CsvRow row;
    row.t = std::stoll(fields[0]);
    row.mean = parse_optional_number(fields[1], line_no);
    row.stderr_of_mean = parse_optional_number(fields[2], line_no);
    row.ci_lo = parse_optional_number(fields[3], line_no);
    row.ci_hi = parse_optional_number(fields[4], line_no);
    row.analytic = parse_optional_number(fields[5], line_no);
    row.reps = std::stoll(fields[6]);
    table.rows.push_back(row);
  }
  if (!header_seen) throw std::runtime_error("csv: missing header");
  return table;
}

CsvTable read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open csv file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_trajectory_csv(buffer.str());
}

RiskTrajectory CsvTable::to_trajectory() const {
  RiskTrajectory traj;
  bool any_analytic = false;
  for (const CsvRow& row : rows) {
    if (!row.mean || !row.stderr_of_mean || !row.ci_lo || !row.ci_hi) {
      throw std::runtime_error("csv row t=" + std::to_string(row.t) +
                               " is missing Monte Carlo columns");
    }
    traj.mean.push_back(*row.mean);
    traj.stderr_of_mean.push_back(*row.stderr_of_mean);
    traj.ci_lo.push_back(*row.ci_lo);
    traj.ci_hi.push_back(*row.ci_hi);
    if (row.analytic) any_analytic = true;
    traj.reps = row.reps;
  }
  if (any_analytic) {
    for (const CsvRow& row : rows) {
      if (!row.analytic) throw std::runtime_error("csv: partial analytic column");
      traj.analytic.push_back(*row.analytic);
    }
  }
  return traj;
}

}  // namespace collapselab
