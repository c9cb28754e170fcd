#include "complab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace complab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json complex_json(cpx z) { return json::array({z.real(), z.imag()}); }

json policy_json(const VerdictPolicy& p) {
  json j;
  j["vanish_below"] = p.vanish_below;
  j["bounded_above"] = p.bounded_above;
  j["window"] = p.window;
  j["trend_slack"] = p.trend_slack;
  j["stabilize_factor"] = p.stabilize_factor;
  j["stderr_cap_rel"] = p.stderr_cap_rel;
  j["stderr_floor_abs"] = p.stderr_floor_abs;
  return j;
}

json path_tail_json(const PathTail& p) {
  json j;
  j["target"] = complex_json(p.target);
  j["aperture"] = p.aperture;
  j["values"] = p.values;
  j["verdict"] = trend_name(p.verdict);
  return j;
}

json criterion_report_json(const CriterionReport& r) {
  json j;
  j["quantity"] = r.quantity_name;
  j["annuli"] = r.annuli;
  j["sups"] = r.sups;
  json paths = json::array();
  for (const auto& p : r.paths) paths.push_back(path_tail_json(p));
  j["paths"] = paths;
  j["verdict"] = trend_name(r.verdict);
  j["params"] = r.parameters;
  j["thresholds"] = policy_json(r.policy);
  return j;
}

json annulus_scan_json(const AnnulusScan& s, const VerdictPolicy& policy) {
  json j;
  j["radii"] = s.radii;
  j["sups"] = s.sups;
  j["stderrs"] = s.stderrs;
  j["verdict"] = trend_name(s.verdict);
  j["thresholds"] = policy_json(policy);
  return j;
}

json certificate_json(const DoublingCertificate& c) {
  json j;
  j["in_upper_doubling"] = c.in_upper;
  j["C_upper"] = c.C_upper;
  j["in_lower_doubling"] = c.in_lower;
  j["C_lower"] = c.C_lower;
  j["K"] = c.K;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["grid_resolution"] = c.grid_resolution;
  j["max_grid_radius"] = c.max_grid_radius;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ",";
    line += fields[i];
  }
  line += "\n";
  return line;
}

void write_matrix_csv(const TruncatedOperator& op, const std::string& base) {
  for (bool real_part : {true, false}) {
    std::string content;
    for (int r = 0; r < op.dim; ++r) {
      std::vector<std::string> row;
      row.reserve(static_cast<std::size_t>(op.dim));
      for (int c = 0; c < op.dim; ++c) {
        cpx v = op.at(r, c);
        row.push_back(format_double(real_part ? v.real() : v.imag()));
      }
      content += csv_line(row);
    }
    write_file(base + (real_part ? "_re.csv" : "_im.csv"), content);
  }
}

}  // namespace complab
