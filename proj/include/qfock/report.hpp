#pragma once

#include "qfock/config.hpp"
#include "qfock/ito.hpp"
#include "qfock/symmetrizer.hpp"

#include <json.hpp>

#include <string>

namespace qfock {

inline constexpr const char* kToolVersion = "qfock 0.1.0";
inline constexpr int kReportSchemaVersion = 1;

nlohmann::json config_to_json(const ConfigTable& cfg);
nlohmann::json constants_to_json(const QConstants& qc);
nlohmann::json ito_report_to_json(const ItoReport& rep);

/// CSV with columns mesh, residual_primary, residual_op, residual_vec_max.
std::string ito_report_to_csv(const ItoReport& rep);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Dense complex matrix layout, row-major over the level-blocked basis.
/// Binary: magic "QFCKMAT1", int32 d, int32 N, double q, int32 exactness,
/// int32 upshift, int64 dim, then dim*dim little-endian complex doubles.
void save_operator_binary(const std::string& path, const TruncationConfig& cfg,
                          const FockOperator& op);
FockOperator load_operator_binary(const std::string& path, TruncationConfig* cfg);

/// CSV: first line "d,N,q,exactness", then one line per row, complex entries
/// in the word grammar's re+imj form.
std::string operator_to_csv(const TruncationConfig& cfg, const FockOperator& op);

}  // namespace qfock
