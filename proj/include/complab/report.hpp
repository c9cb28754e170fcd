#pragma once

#include <string>
#include <vector>

#include "complab/carleson.hpp"
#include "complab/criteria.hpp"
#include "complab/operators.hpp"

namespace complab {

/// 17 significant digits; round-trips doubles exactly.
std::string format_double(double x);

json complex_json(cpx z);
json policy_json(const VerdictPolicy& p);
json path_tail_json(const PathTail& p);
json criterion_report_json(const CriterionReport& r);
json annulus_scan_json(const AnnulusScan& s, const VerdictPolicy& policy);
json certificate_json(const DoublingCertificate& c);

void write_file(const std::string& path, const std::string& content);

/// One CSV line, fields joined by commas, newline-terminated.
std::string csv_line(const std::vector<std::string>& fields);

/// Row-major dump of the real and imaginary parts into
/// <base>_re.csv and <base>_im.csv.
void write_matrix_csv(const TruncatedOperator& op, const std::string& base);

}  // namespace complab
