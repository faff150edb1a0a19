#pragma once

#include <string>
#include <vector>

#include "telecert/report.hpp"
#include "telecert/sdp.hpp"

namespace telecert {

struct JsonError : std::runtime_error {
    explicit JsonError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shortest form with at most 9 significant digits.
std::string format_number(double v);

/// Matrix schema: {"rows": R, "cols": C, "data": [[re, im], ...]} row-major.
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);
ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const ComplexMatrix& m);

std::string report_to_json(const CertificationReport& r);
std::string bound_to_json(const Thresholds& t);

/// CSV with the fixed header
/// p_noise,f_expt,f_avg_state,alpha,beta,negativity,steerable_weight,gqt
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// Experiments input: a JSON array (or an object with an "experiments"
/// array) of {"name"?, "kind": "process"|"avg_state", "value": x}.
std::vector<ExperimentEntry> experiments_from_json(const std::string& text);

/// Debug dump of an SDP in the same matrix encoding.
std::string sdp_problem_to_json(const SdpProblem& p);

}  // namespace telecert
