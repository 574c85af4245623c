#include "qfock/report.hpp"

#include "qfock/grammar.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qfock {

nlohmann::json config_to_json(const ConfigTable& cfg) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, v] : cfg.values()) {
    switch (v.type) {
      case ConfigTable::Value::Type::Number:
        if (v.is_integer)
          out[key] = static_cast<long long>(v.number);
        else
          out[key] = v.number;
        break;
      case ConfigTable::Value::Type::String:
        out[key] = v.str;
        break;
      case ConfigTable::Value::Type::NumberList:
        out[key] = v.numbers;
        break;
      case ConfigTable::Value::Type::TableList: {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : v.tables) arr.push_back(config_to_json(t));
        out[key] = arr;
        break;
      }
    }
  }
  return out;
}

nlohmann::json constants_to_json(const QConstants& qc) {
  return nlohmann::json{{"q", qc.q},
                        {"omega_estimate", qc.omega},
                        {"omega_is_estimate", true},
                        {"c", qc.c},
                        {"d", qc.d}};
}

namespace {

nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

nlohmann::json ito_report_to_json(const ItoReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["spec"] = {{"name", rep.spec_name},
               {"s1", rep.s1},
               {"s2", rep.s2},
               {"topology", rep.topology},
               {"assumptions", rep.assumptions},
               {"tolerance", rep.tolerance}};
  j["meshes"] = rep.meshes;
  nlohmann::json ops = nlohmann::json::array();
  for (double x : rep.residual_opnorm) ops.push_back(finite_or_null(x));
  j["residuals_opnorm"] = ops;
  j["residuals_vec"] = rep.residual_vec;
  nlohmann::json prim = nlohmann::json::array();
  for (double x : rep.residual_primary) prim.push_back(finite_or_null(x));
  j["residuals_primary"] = prim;
  j["identity_defect"] = rep.identity_defect;
  j["slope"] = rep.slope;
  j["verdict"] = rep.verdict ? "pass" : "fail";
  j["runtime_seconds"] = rep.runtime_seconds;
  return j;
}

std::string ito_report_to_csv(const ItoReport& rep) {
  std::ostringstream out;
  out << "mesh,residual_primary,residual_op,residual_vec_max\n";
  for (std::size_t i = 0; i < rep.meshes.size(); ++i) {
    double vmax = 0.0;
    for (double x : rep.residual_vec[i]) vmax = std::max(vmax, x);
    out << rep.meshes[i] << "," << print_double(rep.residual_primary[i]) << ",";
    if (std::isfinite(rep.residual_opnorm[i]))
      out << print_double(rep.residual_opnorm[i]);
    out << "," << print_double(vmax) << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_operator_binary(const std::string& path, const TruncationConfig& cfg,
                          const FockOperator& op) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  const char magic[8] = {'Q', 'F', 'C', 'K', 'M', 'A', 'T', '1'};
  out.write(magic, 8);
  const std::int32_t d = cfg.d, n = cfg.N, ex = op.exactness, up = op.upshift;
  const double q = cfg.q;
  const std::int64_t dim = op.mat.rows();
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&q), 8);
  out.write(reinterpret_cast<const char*>(&ex), 4);
  out.write(reinterpret_cast<const char*>(&up), 4);
  out.write(reinterpret_cast<const char*>(&dim), 8);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) {
      const Complex v = op.mat(r, c);
      const double re = v.real(), im = v.imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

FockOperator load_operator_binary(const std::string& path, TruncationConfig* cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "QFCKMAT1", 8) != 0)
    throw std::runtime_error("bad operator file magic");
  std::int32_t d, n, ex, up;
  double q;
  std::int64_t dim;
  in.read(reinterpret_cast<char*>(&d), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&q), 8);
  in.read(reinterpret_cast<char*>(&ex), 4);
  in.read(reinterpret_cast<char*>(&up), 4);
  in.read(reinterpret_cast<char*>(&dim), 8);
  TruncationConfig c(d, n, q);
  if (dim != c.total_dim()) throw std::runtime_error("operator file dimension mismatch");
  FockOperator op(Matrix::Zero(dim, dim), ex, up);
  for (Index r = 0; r < dim; ++r)
    for (Index col = 0; col < dim; ++col) {
      double re, im;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      op.mat(r, col) = Complex(re, im);
    }
  if (!in) throw std::runtime_error("operator file truncated");
  if (cfg) *cfg = c;
  return op;
}

std::string operator_to_csv(const TruncationConfig& cfg, const FockOperator& op) {
  std::ostringstream out;
  out << cfg.d << "," << cfg.N << "," << print_double(cfg.q) << ","
      << op.exactness << "\n";
  for (Index r = 0; r < op.mat.rows(); ++r) {
    for (Index c = 0; c < op.mat.cols(); ++c) {
      if (c) out << ",";
      out << print_complex(op.mat(r, c));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace qfock
