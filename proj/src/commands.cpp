#include "qfock/commands.hpp"

#include "qfock/fock.hpp"
#include "qfock/grammar.hpp"
#include "qfock/moments.hpp"
#include "qfock/operators.hpp"
#include "qfock/report.hpp"
#include "qfock/rng.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace qfock {

namespace {

std::uint64_t effective_seed(const ConfigTable& cfg,
                             std::optional<std::uint64_t> seed_override) {
  if (seed_override) return *seed_override;
  return static_cast<std::uint64_t>(cfg.get_int("seed"));
}

nlohmann::json report_header(const ConfigTable& cfg, std::uint64_t seed) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["config"] = config_to_json(cfg);
  j["seed"] = seed;
  return j;
}

// residual of X restricted to inputs on levels <= max_level (Frobenius)
double restricted_residual(const TruncationConfig& cfg, const Matrix& x,
                           int max_level) {
  const Index cols = cfg.level_offset(max_level) + cfg.level_dim(max_level);
  return x.leftCols(cols).norm();
}

// one commuting pair built from a single random operator
std::pair<Matrix, Matrix> commuting_pair(Rng& rng, int d) {
  Matrix t1 = rng.complex_matrix(d, d);
  Matrix t2 = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * t1 * t1 +
              Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * t1 +
              Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) *
                  Matrix::Identity(d, d);
  return {std::move(t1), std::move(t2)};
}

}  // namespace

CommandResult run_relations(const ConfigTable& cfg,
                            std::optional<std::uint64_t> seed_override,
                            const std::string& corrupt_relation) {
  CommandResult result;
  const int d = static_cast<int>(cfg.get_int("d"));
  const int levels = static_cast<int>(cfg.get_int("N"));
  const std::vector<double> qs = cfg.get_number_list("q_values");
  const int draws = static_cast<int>(cfg.get_int("draws"));
  const double tol = cfg.get_number("tolerance");
  const std::uint64_t seed = effective_seed(cfg, seed_override);

  const std::vector<std::string> names = {
      "komutacja1", "komutacja2", "komutacja3", "komutacja4",
      "komutacja5", "komutacja6", "komutacja7", "komutacja8"};
  std::map<std::string, double> worst;
  for (const auto& n : names) worst[n] = 0.0;

  std::ostringstream csv;
  csv << "relation,q,max_residual\n";

  for (double q : qs) {
    TruncationConfig tc(d, levels, q);
    std::map<std::string, double> worst_q;
    for (const auto& n : names) worst_q[n] = 0.0;
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>((q + 2.0) * 1e6));
    const FockOperator id = identity_operator(tc);

    for (int it = 0; it < draws; ++it) {
      const Vector phi = rng.complex_vector(d);
      const Vector psi = rng.complex_vector(d);
      const Matrix t = rng.complex_matrix(d, d);
      const Complex mu = rng.complex_in_disk(0.8);
      const Complex nu = rng.complex_in_disk(0.8);
      auto [t1, t2] = commuting_pair(rng, d);

      const FockOperator a_phi = annihilation(tc, phi);
      const FockOperator c_psi = creation(tc, psi);
      const FockOperator c_phi = creation(tc, phi);
      const FockOperator g_mu = gamma_op(tc, mu);
      const FockOperator g_nu = gamma_op(tc, nu);
      const FockOperator l_mu = gauge(tc, mu, t);

      auto corrupted = [&](const std::string& name) {
        return corrupt_relation == name ? q + 0.01 : q;
      };

      // a(phi) a*(psi) = q a*(psi) a(phi) + <phi,psi>
      {
        Matrix lhs = a_phi.mat * c_psi.mat;
        Matrix rhs = corrupted("komutacja1") * (c_psi.mat * a_phi.mat) +
                     phi.dot(psi) * id.mat;
        worst_q["komutacja1"] = std::max(
            worst_q["komutacja1"],
            restricted_residual(tc, lhs - rhs, levels - 2));
      }
      // a(phi) gamma_mu = mu gamma_mu a(phi)
      {
        Matrix delta = a_phi.mat * g_mu.mat - mu * (g_mu.mat * a_phi.mat);
        if (corrupt_relation == "komutacja2")
          delta += 0.01 * g_mu.mat * a_phi.mat;
        worst_q["komutacja2"] = std::max(
            worst_q["komutacja2"], restricted_residual(tc, delta, levels - 2));
      }
      // gamma_mu a*(phi) = mu a*(phi) gamma_mu
      {
        Matrix delta = g_mu.mat * c_phi.mat - mu * (c_phi.mat * g_mu.mat);
        if (corrupt_relation == "komutacja3")
          delta += 0.01 * c_phi.mat * g_mu.mat;
        worst_q["komutacja3"] = std::max(
            worst_q["komutacja3"], restricted_residual(tc, delta, levels - 2));
      }
      // a(phi) lambda_mu(T) = mu lambda_mu(T) a(phi) + mu gamma_mu a(T^H phi)
      {
        Matrix lhs = a_phi.mat * l_mu.mat;
        Matrix rhs = mu * (l_mu.mat * a_phi.mat) +
                     mu * (g_mu.mat * annihilation(tc, t.adjoint() * phi).mat);
        if (corrupt_relation == "komutacja4") rhs *= Complex(1.01, 0);
        worst_q["komutacja4"] = std::max(
            worst_q["komutacja4"],
            restricted_residual(tc, lhs - rhs, levels - 2));
      }
      // lambda_mu(T) a*(phi) = mu a*(phi) lambda_mu(T) + mu a*(T phi) gamma_mu
      {
        Matrix lhs = l_mu.mat * c_phi.mat;
        Matrix rhs = mu * (c_phi.mat * l_mu.mat) +
                     mu * (creation(tc, t * phi).mat * g_mu.mat);
        if (corrupt_relation == "komutacja5") rhs *= Complex(1.01, 0);
        worst_q["komutacja5"] = std::max(
            worst_q["komutacja5"],
            restricted_residual(tc, lhs - rhs, levels - 2));
      }
      // lambda_mu(T) gamma_nu = gamma_mu lambda_nu(T) = lambda_{mu nu}(T)
      {
        const FockOperator l_nu = gauge(tc, nu, t);
        const FockOperator l_munu = gauge(tc, mu * nu, t);
        Matrix d1 = l_mu.mat * g_nu.mat - g_mu.mat * l_nu.mat;
        Matrix d2 = l_mu.mat * g_nu.mat - l_munu.mat;
        if (corrupt_relation == "komutacja6") d2 += 0.01 * l_munu.mat;
        const double r = std::max(restricted_residual(tc, d1, levels - 2),
                                  restricted_residual(tc, d2, levels - 2));
        worst_q["komutacja6"] = std::max(worst_q["komutacja6"], r);
      }
      // gamma_mu gamma_nu = gamma_{mu nu}
      {
        Matrix delta = g_mu.mat * g_nu.mat - gamma_op(tc, mu * nu).mat;
        if (corrupt_relation == "komutacja7")
          delta += 0.01 * gamma_op(tc, mu * nu).mat;
        worst_q["komutacja7"] = std::max(
            worst_q["komutacja7"], restricted_residual(tc, delta, levels - 2));
      }
      // commuting T1, T2: lambda_mu(T1) lambda_nu(T2) = lambda_nu(T2) lambda_mu(T1)
      {
        const FockOperator la = gauge(tc, mu, t1);
        const FockOperator lb = gauge(tc, nu, t2);
        Matrix delta = la.mat * lb.mat - lb.mat * la.mat;
        if (corrupt_relation == "komutacja8") delta += 0.01 * la.mat * lb.mat;
        worst_q["komutacja8"] = std::max(
            worst_q["komutacja8"], restricted_residual(tc, delta, levels - 2));
      }
    }

    for (const auto& n : names) {
      worst[n] = std::max(worst[n], worst_q[n]);
      csv << n << "," << print_double(q) << "," << print_double(worst_q[n])
          << "\n";
    }
  }

  bool pass = true;
  std::vector<std::string> failed;
  for (const auto& [n, r] : worst)
    if (!(r <= tol)) {
      pass = false;
      failed.push_back(n);
    }

  nlohmann::json j = report_header(cfg, seed);
  j["relations"] = worst;
  j["tolerance"] = tol;
  j["pass"] = pass;
  j["failed_relations"] = failed;
  if (!corrupt_relation.empty()) j["corrupted_relation"] = corrupt_relation;

  std::ostringstream human;
  human << "commutation relations on levels <= N-2 (d=" << d << ", N=" << levels
        << ")\n";
  for (const auto& [n, r] : worst)
    human << "  " << n << ": max residual " << print_double(r)
          << (r <= tol ? "  ok" : "  FAIL") << "\n";
  human << (pass ? "all relations hold" : "FAILED relations present") << "\n";

  result.exit_code = pass ? 0 : 2;
  result.human = human.str();
  result.files = {{"relations_report.json", j.dump(2) + "\n"},
                  {"relations.csv", csv.str()}};
  return result;
}

CommandResult run_normal_order(const ConfigTable& cfg, const std::string& expr,
                               std::optional<std::uint64_t> seed_override) {
  CommandResult result;
  const int d = static_cast<int>(cfg.get_int("d"));
  const int levels = static_cast<int>(cfg.get_int("N"));
  const double q = cfg.get_number("q");
  const double tol = cfg.get_number("tolerance");
  const std::uint64_t seed = effective_seed(cfg, seed_override);
  TruncationConfig tc(d, levels, q);

  SymbolTable symtab(d);
  for (const auto& [key, v] : cfg.values()) {
    if (key.rfind("vec.", 0) == 0) {
      std::istringstream in(cfg.get_string(key));
      std::string tok;
      std::vector<Complex> cs;
      while (std::getline(in, tok, ',')) cs.push_back(parse_complex(tok));
      Vector vec(cs.size());
      for (std::size_t i = 0; i < cs.size(); ++i) vec[i] = cs[i];
      symtab.set_vector(key.substr(4), std::move(vec));
    } else if (key.rfind("op.", 0) == 0) {
      std::string body = cfg.get_string(key);
      if (body.rfind("diag:", 0) == 0) {
        std::istringstream in(body.substr(5));
        std::string tok;
        std::vector<Complex> cs;
        while (std::getline(in, tok, ',')) cs.push_back(parse_complex(tok));
        Vector diag(cs.size());
        for (std::size_t i = 0; i < cs.size(); ++i) diag[i] = cs[i];
        symtab.set_operator(key.substr(3), OneParticleOp::from_diag(diag));
      } else {
        std::istringstream rows(body);
        std::string row;
        std::vector<std::vector<Complex>> entries;
        while (std::getline(rows, row, ';')) {
          std::istringstream in(row);
          std::string tok;
          entries.emplace_back();
          while (std::getline(in, tok, ',')) entries.back().push_back(parse_complex(tok));
        }
        Matrix m(entries.size(), entries.empty() ? 0 : entries[0].size());
        for (std::size_t r = 0; r < entries.size(); ++r)
          for (std::size_t c = 0; c < entries[r].size(); ++c)
            m(r, c) = entries[r][c];
        symtab.set_operator(key.substr(3), OneParticleOp::from_dense(m));
      }
    }
  }

  Polynomial input = expr.empty() ? Polynomial::one() : parse_polynomial(expr);
  NormalForm nf = normal_order(input, symtab, q);
  const std::string printed = print_polynomial(nf.poly());

  // round trip through the grammar must be exact
  if (!(parse_polynomial(printed) == nf.poly()))
    throw std::runtime_error("printer round-trip failed");

  // evaluate-equivalence on the exact region
  const FockOperator in_op = evaluate(input, tc, symtab);
  const FockOperator nf_op = evaluate(nf.poly(), tc, symtab);
  const int shift = std::max(max_intermediate_upshift(input),
                             max_intermediate_upshift(nf.poly()));
  const int max_level = std::max(0, levels - shift);
  const double residual =
      restricted_residual(tc, in_op.mat - nf_op.mat, max_level);

  nlohmann::json j = report_header(cfg, seed);
  j["input"] = expr;
  j["normal_form"] = printed;
  j["residual"] = residual;
  j["exact_input_levels"] = max_level;
  j["tolerance"] = tol;
  j["pass"] = residual <= tol;

  result.human = printed + "\nresidual " + print_double(residual) +
                 " on input levels <= " + std::to_string(max_level) + "\n";
  result.exit_code = residual <= tol ? 0 : 2;
  result.files = {{"normal_order_report.json", j.dump(2) + "\n"}};
  return result;
}

CommandResult run_norm_sweep(const ConfigTable& cfg,
                             std::optional<std::uint64_t> seed_override) {
  CommandResult result;
  const int d = static_cast<int>(cfg.get_int("d"));
  const std::vector<int> levels_list = cfg.get_int_list("N_values");
  const std::vector<double> qs = cfg.get_number_list("q_values");
  const int draws = static_cast<int>(cfg.get_int("draws"));
  const std::uint64_t seed = effective_seed(cfg, seed_override);

  std::vector<Complex> mus;
  {
    std::istringstream in(cfg.get_string("mu_values"));
    std::string tok;
    while (std::getline(in, tok, ',')) mus.push_back(parse_complex(tok));
  }

  std::ostringstream csv;
  csv << "param,computed,bound,slack\n";
  double min_slack = std::numeric_limits<double>::infinity();
  nlohmann::json rows = nlohmann::json::array();

  auto emit = [&](const std::string& param, double computed, double bound) {
    const double slack = bound - computed;
    min_slack = std::min(min_slack, slack);
    csv << param << "," << print_double(computed) << "," << print_double(bound)
        << "," << print_double(slack) << "\n";
    rows.push_back({{"param", param},
                    {"computed", computed},
                    {"bound", bound},
                    {"slack", slack}});
  };

  for (double q : qs)
    for (int levels : levels_list) {
      TruncationConfig tc(d, levels, q);
      QMetric metric(tc);
      Rng rng = Rng::derive(
          seed, static_cast<std::uint64_t>((q + 2.0) * 1e6) + 31 * levels);
      for (int it = 0; it < draws; ++it) {
        const Vector phi = rng.complex_vector(d);
        const double computed = q_operator_norm(metric, creation(tc, phi));
        const double bound = phi.norm() / std::sqrt(1.0 - std::abs(q));
        emit("astar;q=" + print_double(q) + ";N=" + std::to_string(levels) +
                 ";draw=" + std::to_string(it),
             computed, bound);
      }
      for (const Complex& mu : mus) {
        for (int it = 0; it < draws; ++it) {
          const Matrix t = rng.complex_matrix(d, d);
          const double computed = q_operator_norm(metric, gauge(tc, mu, t));
          const double bound = spectral_norm(t) * gauge_norm_bound_factor(mu);
          emit("lambda;q=" + print_double(q) + ";N=" + std::to_string(levels) +
                   ";mu=" + print_complex(mu) + ";draw=" + std::to_string(it),
               computed, bound);
        }
        const double gcomputed = q_operator_norm(metric, gamma_op(tc, mu));
        emit("gamma;q=" + print_double(q) + ";N=" + std::to_string(levels) +
                 ";mu=" + print_complex(mu),
             gcomputed, 1.0);
      }
    }

  // integral norms against their seminorms on a small grid
  const int m = static_cast<int>(cfg.get_int("m"));
  const double t_max = cfg.get_number("t_max");
  const int sweep_levels = levels_list.front();
  for (double q : qs) {
    TimeGrid grid(t_max, m);
    TruncationConfig tc = grid.config(q, sweep_levels);
    QMetric metric(tc);
    QConstants constants = estimate_constants(tc, sweep_levels);
    SymbolTable symtab(m);
    Rng rng = Rng::derive(seed, 777 + static_cast<std::uint64_t>((q + 2.0) * 1e6));

    // constant biprocess on (0, t_max]
    SimpleBiprocess r;
    r.pieces.push_back({Bioperator::one(), {0.0, t_max}});
    (void)rng;
    const double ia =
        q_operator_norm(metric, integrate(r, ProcessKind::creation(), grid, tc, symtab));
    emit("int_astar;q=" + print_double(q),
         ia, seminorm_creation(r, grid, tc, symtab, metric, constants));
    const double ib =
        q_operator_norm(metric, integrate(r, ProcessKind::annihilation(), grid, tc, symtab));
    emit("int_a;q=" + print_double(q),
         ib, seminorm_annihilation(r, grid, tc, symtab, metric, constants));
    const double it =
        q_operator_norm(metric, integrate(r, ProcessKind::time(), grid, tc, symtab));
    emit("int_t;q=" + print_double(q), it,
         seminorm_time(r, grid, tc, symtab, metric));
    const Complex mu = mus.front();
    const double il =
        q_operator_norm(metric, integrate(r, ProcessKind::gauge(mu), grid, tc, symtab));
    emit("int_lambda;q=" + print_double(q) + ";mu=" + print_complex(mu), il,
         seminorm_gauge(r, mu, grid, tc, symtab, metric));
  }

  const bool pass = min_slack >= -1e-9;
  nlohmann::json j = report_header(cfg, seed);
  j["rows"] = rows;
  j["min_slack"] = min_slack;
  j["pass"] = pass;
  {
    TruncationConfig tc0(d, levels_list.front(), qs.front());
    j["constants"] = constants_to_json(estimate_constants(tc0, levels_list.front()));
  }

  result.human = "norm sweep: " + std::to_string(rows.size()) +
                 " rows, min slack " + print_double(min_slack) + "\n" +
                 (pass ? "no bound violations\n" : "BOUND VIOLATIONS present\n");
  result.exit_code = pass ? 0 : 2;
  result.files = {{"norm_sweep_report.json", j.dump(2) + "\n"},
                  {"norm_sweep.csv", csv.str()}};
  return result;
}

ItoSpec parse_ito_spec(const ConfigTable& table) {
  ItoSpec spec;
  spec.name = table.get_string("name");
  auto kind_of = [&](const std::string& which, const char* mu_key) {
    const std::string s = table.get_string(which);
    if (s == "A") return ProcessKind::annihilation();
    if (s == "Astar") return ProcessKind::creation();
    if (s == "T") return ProcessKind::time();
    if (s == "Lambda") return ProcessKind::gauge(table.get_complex(mu_key));
    throw std::invalid_argument("ito spec: unknown process kind '" + s + "'");
  };
  spec.s1 = kind_of("s1", "mu");
  spec.s2 = kind_of("s2", "nu");
  spec.q = table.get_number("q");
  spec.levels = static_cast<int>(table.get_int("N"));
  spec.t_max = table.get_number("t_max");
  spec.meshes = table.get_int_list("meshes");
  spec.test_vectors = static_cast<int>(table.get_int("test_vectors"));
  spec.seed = static_cast<std::uint64_t>(table.get_int("seed"));
  spec.tolerance = table.get_number("tolerance");

  if (table.has("symbol"))
    for (const auto& s : table.get_table_list("symbol")) {
      ItoSymbolDecl decl;
      decl.name = s.get_string("name");
      const std::string kind = s.get_string("kind");
      if (kind == "projection")
        decl.projection = true;
      else if (kind != "indicator")
        throw std::invalid_argument("ito spec: symbol kind must be indicator or projection");
      const auto iv = s.get_number_list("interval");
      if (iv.size() != 2) throw std::invalid_argument("ito spec: interval needs two numbers");
      decl.iv = {iv[0], iv[1]};
      spec.symbols.push_back(std::move(decl));
    }

  auto parse_biprocess = [&](const std::string& key) {
    ItoBiprocessDecl decl;
    for (const auto& piece : table.get_table_list(key)) {
      ItoBiprocessDecl::Piece p;
      const auto iv = piece.get_number_list("interval");
      if (iv.size() != 2) throw std::invalid_argument("ito spec: interval needs two numbers");
      p.iv = {iv[0], iv[1]};
      for (const auto& term : piece.get_table_list("terms")) {
        ItoBiprocessDecl::Term t;
        t.left = term.get_string("left");
        t.right = term.get_string("right");
        t.coeff = term.get_complex("coeff");
        p.terms.push_back(std::move(t));
      }
      decl.pieces.push_back(std::move(p));
    }
    return decl;
  };
  spec.r1 = parse_biprocess("r1");
  spec.r2 = parse_biprocess("r2");
  return spec;
}

CommandResult run_ito(const ConfigTable& spec_table,
                      std::optional<std::uint64_t> seed_override) {
  CommandResult result;
  ItoSpec spec = parse_ito_spec(spec_table);
  if (seed_override) spec.seed = *seed_override;

  ItoReport rep;
  try {
    rep = verify_ito(spec);
  } catch (const std::invalid_argument& e) {
    // violated hypothesis: exit 2 with the named assumption
    result.exit_code = 2;
    result.human = std::string("hypothesis check failed: ") + e.what() + "\n";
    nlohmann::json j = report_header(spec_table, spec.seed);
    j["error"] = e.what();
    result.files = {{"ito_" + spec.name + "_report.json", j.dump(2) + "\n"}};
    return result;
  }

  nlohmann::json j = report_header(spec_table, spec.seed);
  j["report"] = ito_report_to_json(rep);

  std::ostringstream human;
  human << "ito study '" << spec.name << "' (" << rep.s1 << ", " << rep.s2
        << "), topology " << rep.topology << "\n";
  for (std::size_t i = 0; i < rep.meshes.size(); ++i)
    human << "  mesh " << rep.meshes[i] << ": primary residual "
          << print_double(rep.residual_primary[i]) << "\n";
  human << "slope " << print_double(rep.slope) << ", verdict "
        << (rep.verdict ? "pass" : "fail") << "\n";

  result.human = human.str();
  result.exit_code = rep.verdict ? 0 : 2;
  result.files = {{"ito_" + spec.name + "_report.json", j.dump(2) + "\n"},
                  {"ito_" + spec.name + ".csv", ito_report_to_csv(rep)}};
  return result;
}

CommandResult run_moments(const ConfigTable& cfg,
                          std::optional<std::uint64_t> seed_override) {
  CommandResult result;
  const int m = static_cast<int>(cfg.get_int("m"));
  const double t_max = cfg.get_number("t_max");
  const double q = cfg.get_number("q");
  const int levels = static_cast<int>(cfg.get_int("N"));
  const double t = cfg.get_number("t");
  const int n_max = static_cast<int>(cfg.get_int("n_max"));
  const double tol = cfg.get_number("tolerance");
  const std::uint64_t seed = effective_seed(cfg, seed_override);

  TimeGrid grid(t_max, m);
  const std::vector<double> matrix_vals = brownian_moments(grid, q, levels, t, n_max);

  std::ostringstream csv, human;
  csv << "two_n,matrix,oracle,delta\n";
  human << "vacuum moments of the combined process at t=" << print_double(t)
        << ", q=" << print_double(q) << "\n";
  bool pass = true;
  nlohmann::json rows = nlohmann::json::array();
  for (int n = 1; n <= n_max; ++n) {
    const double oracle = pair_partition_moment(q, t, n);
    const double delta = matrix_vals[n - 1] - oracle;
    pass = pass && std::abs(delta) <= tol;
    csv << 2 * n << "," << print_double(matrix_vals[n - 1]) << ","
        << print_double(oracle) << "," << print_double(delta) << "\n";
    human << "  2n=" << 2 * n << ": matrix " << print_double(matrix_vals[n - 1])
          << "  oracle " << print_double(oracle) << "  delta "
          << print_double(delta) << "\n";
    rows.push_back({{"two_n", 2 * n},
                    {"matrix", matrix_vals[n - 1]},
                    {"oracle", oracle},
                    {"delta", delta}});
  }
  human << (pass ? "matrix values match the pairing oracle\n"
                 : "MISMATCH against the pairing oracle\n");

  nlohmann::json j = report_header(cfg, seed);
  j["rows"] = rows;
  j["pass"] = pass;

  result.human = human.str();
  result.exit_code = pass ? 0 : 2;
  result.files = {{"moments_report.json", j.dump(2) + "\n"},
                  {"moments.csv", csv.str()}};
  return result;
}

void write_outputs(const CommandResult& result, const std::string& out_dir) {
  for (const auto& [name, content] : result.files)
    write_text_file((std::filesystem::path(out_dir) / name).string(), content);
}

}  // namespace qfock
