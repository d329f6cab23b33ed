#include "spherevar/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "spherevar/capgeom.hpp"
#include "spherevar/partition.hpp"
#include "spherevar/processes.hpp"
#include "spherevar/quadrature.hpp"
#include "spherevar/specfun.hpp"

namespace spherevar {

using nlohmann::json;

std::string subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::sample: return "sample";
    case Subcommand::variance: return "variance";
    case Subcommand::regime: return "regime";
    case Subcommand::partition_dump: return "partition";
    case Subcommand::verify: return "verify";
  }
  return "?";
}

namespace {

Subcommand subcommand_from_name(const std::string& s) {
  if (s == "sample") return Subcommand::sample;
  if (s == "variance") return Subcommand::variance;
  if (s == "regime") return Subcommand::regime;
  if (s == "partition") return Subcommand::partition_dump;
  if (s == "verify") return Subcommand::verify;
  throw std::domain_error("unknown subcommand: " + s);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ProcessSpec ExperimentConfig::process_spec() const {
  ProcessSpec spec;
  spec.family = family_from_name(process);
  spec.d = spec.family == Family::spherical || spec.family == Family::jittered ? 2 : d;
  if (spec.family == Family::harmonic) {
    if (L < 0) throw std::domain_error("harmonic process requires --L");
    spec.L = L;
  } else {
    if (n < 1) throw std::domain_error(process + " process requires --n >= 1");
    spec.n = n;
  }
  if (spec.family != Family::iid && spec.family != Family::harmonic && d != 2)
    throw std::domain_error("--d must be 2 for the " + process + " process");
  return spec;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["subcommand"] = subcommand_name(c.cmd);
  j["process"] = c.process;
  j["d"] = c.d;
  j["n"] = c.n;
  if (c.L >= 0) j["L"] = c.L;
  if (c.phi) j["phi"] = *c.phi;
  if (c.t) j["t"] = *c.t;
  j["replicates"] = c.replicates;
  j["centers"] = c.centers;
  j["replicate"] = c.replicate;
  if (c.seed) j["seed"] = *c.seed;
  j["pairs_per_cell"] = c.pairs_per_cell;
  j["regime"] = c.regime;
  if (!c.grid.empty()) j["grid"] = c.grid;
  if (c.small_alpha > 0.0) j["small_alpha"] = c.small_alpha;
  j["small_c"] = c.small_c;
  if (c.threshold_size > 0) j["threshold_size"] = c.threshold_size;
  j["output"] = c.output;
  j["format"] = c.format;
  return j.dump();
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  if (j.contains("subcommand")) c.cmd = subcommand_from_name(j["subcommand"]);
  c.process = j.value("process", c.process);
  c.d = j.value("d", c.d);
  c.n = j.value("n", c.n);
  if (j.contains("L")) c.L = j["L"];
  if (j.contains("phi")) c.phi = static_cast<double>(j["phi"]);
  if (j.contains("t")) c.t = static_cast<double>(j["t"]);
  c.replicates = j.value("replicates", c.replicates);
  c.centers = j.value("centers", c.centers);
  c.replicate = j.value("replicate", c.replicate);
  if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(j["seed"]);
  c.pairs_per_cell = j.value("pairs_per_cell", c.pairs_per_cell);
  c.regime = j.value("regime", c.regime);
  if (j.contains("grid")) c.grid = j["grid"].get<std::vector<double>>();
  c.small_alpha = j.value("small_alpha", c.small_alpha);
  c.small_c = j.value("small_c", c.small_c);
  c.threshold_size = j.value("threshold_size", c.threshold_size);
  c.output = j.value("output", c.output);
  c.format = j.value("format", c.format);
  return c;
}

namespace {

constexpr const char* kVarianceHeader =
    "process,d,N,L,phi,t,M,R,seed,v_hat,std_err,v_semi,v_ref";

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void write_variance_row_csv(std::ostream& os, const ProcessSpec& spec, double phi,
                            const std::optional<double>& t, int m, int r,
                            std::uint64_t seed, double v_hat, double std_err,
                            const std::optional<double>& v_semi,
                            const std::optional<double>& v_ref) {
  os << family_name(spec.family) << ',' << spec.d << ',' << spec.point_count() << ','
     << (spec.family == Family::harmonic ? std::to_string(spec.L) : std::string()) << ','
     << format_double(phi) << ',' << opt_field(t) << ',' << m << ',' << r << ',' << seed
     << ',' << format_double(v_hat) << ',' << format_double(std_err) << ','
     << opt_field(v_semi) << ',' << opt_field(v_ref) << '\n';
}

json variance_row_json(const ProcessSpec& spec, double phi, const std::optional<double>& t,
                       int m, int r, std::uint64_t seed, double v_hat, double std_err,
                       const std::optional<double>& v_semi,
                       const std::optional<double>& v_ref) {
  json row;
  row["process"] = family_name(spec.family);
  row["d"] = spec.d;
  row["N"] = spec.point_count();
  if (spec.family == Family::harmonic) row["L"] = spec.L; else row["L"] = nullptr;
  row["phi"] = phi;
  row["t"] = t ? json(*t) : json(nullptr);
  row["M"] = m;
  row["R"] = r;
  row["seed"] = seed;
  row["v_hat"] = v_hat;
  row["std_err"] = std_err;
  row["v_semi"] = v_semi ? json(*v_semi) : json(nullptr);
  row["v_ref"] = v_ref ? json(*v_ref) : json(nullptr);
  return row;
}

std::optional<double> attach_semi(const ProcessSpec& spec, double phi, int pairs,
                                  std::uint64_t seed) {
  switch (spec.family) {
    case Family::iid:
      return variance_iid_exact(spec.n, phi, spec.d);
    case Family::spherical:
      return variance_spherical_semianalytic(spec.n, phi);
    case Family::harmonic:
      if (phi > 0.5 * M_PI) return std::nullopt;
      return variance_harmonic_semianalytic(spec.d, spec.L, phi);
    case Family::jittered: {
      if (phi > 0.5 * M_PI) return std::nullopt;
      const ZonalPartition partition(spec.n);
      return variance_jittered_semianalytic(partition, phi, pairs, seed).value;
    }
  }
  return std::nullopt;
}

void run_sample(const ExperimentConfig& config, std::ostream& os) {
  const ProcessSpec spec = config.process_spec();
  const std::uint64_t seed = config.seed.value_or(0);
  const PointSample sample = sample_process(spec, seed, config.replicate);
  const int dim = sample.points.ambient_dim();

  if (config.format == "json") {
    json doc;
    doc["config"] = json::parse(config_to_json(config));
    json pts = json::array();
    for (int i = 0; i < sample.points.size(); ++i) {
      json p = json::array();
      for (double v : sample.points.point(i)) p.push_back(v);
      pts.push_back(p);
    }
    doc["points"] = pts;
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# config: " << config_to_json(config) << '\n';
  static const char* axes = "xyzw";
  for (int c = 0; c < dim; ++c) os << (c ? "," : "") << (c < 4 ? std::string(1, axes[c]) : "x" + std::to_string(c));
  os << '\n';
  for (int i = 0; i < sample.points.size(); ++i) {
    const auto p = sample.points.point(i);
    for (int c = 0; c < dim; ++c) os << (c ? "," : "") << format_double(p[c]);
    os << '\n';
  }
}

void run_variance(const ExperimentConfig& config, std::ostream& os) {
  if (!config.seed) throw std::domain_error("variance requires an explicit --seed");
  const ProcessSpec spec = config.process_spec();
  double phi;
  std::optional<double> t = config.t;
  if (t) {
    phi = *t * std::pow(static_cast<double>(spec.point_count()), -1.0 / spec.d);
  } else if (config.phi) {
    phi = *config.phi;
  } else {
    throw std::domain_error("variance requires --phi or --t");
  }

  VarianceReport report =
      mc_number_variance(spec, phi, config.replicates, config.centers, *config.seed);
  report.t = t;
  report.v_semi = attach_semi(spec, phi, config.pairs_per_cell, *config.seed);
  if (spec.family == Family::spherical)
    report.v_ref = t ? *t / (2.0 * std::sqrt(M_PI)) : variance_spherical_leading(spec.n, phi);

  if (config.format == "json") {
    json doc;
    doc["config"] = json::parse(config_to_json(config));
    doc["results"] = json::array(
        {variance_row_json(spec, phi, t, report.replicates, report.centers, report.seed,
                           report.v_hat, report.std_err, report.v_semi, report.v_ref)});
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# config: " << config_to_json(config) << '\n' << kVarianceHeader << '\n';
  write_variance_row_csv(os, spec, phi, t, report.replicates, report.centers, report.seed,
                         report.v_hat, report.std_err, report.v_semi, report.v_ref);
}

void run_regime(const ExperimentConfig& config, std::ostream& os) {
  if (!config.seed) throw std::domain_error("regime requires an explicit --seed");
  if (config.grid.empty()) throw std::domain_error("regime requires a non-empty --grid");
  const Family family = family_from_name(config.process);
  const Regime regime = regime_from_name(config.regime);

  RegimeParams params;
  params.grid = config.grid;
  params.d = config.d;
  if (config.phi) params.phi = *config.phi;
  params.small_alpha = config.small_alpha;
  params.small_c = config.small_c;
  params.threshold_size = config.threshold_size;
  params.pairs_per_cell = config.pairs_per_cell;

  const RegimeResult result = regime_experiment(family, regime, params, config.replicates,
                                                config.centers, *config.seed);

  if (config.format == "json") {
    json doc;
    doc["config"] = json::parse(config_to_json(config));
    json rows = json::array();
    for (const RegimeRow& row : result.rows) {
      ProcessSpec spec;
      spec.family = family;
      spec.d = params.d;
      spec.n = row.n_points;
      spec.L = row.L;
      std::optional<double> t =
          regime == Regime::threshold ? std::optional<double>(row.param) : std::nullopt;
      rows.push_back(variance_row_json(spec, row.phi, t, config.replicates, config.centers,
                                       *config.seed, row.v_hat, row.std_err, row.v_semi,
                                       row.v_ref));
    }
    doc["results"] = rows;
    doc["fitted_exponent"] = result.fitted_exponent;
    doc["fit_residual"] = result.fit_residual;
    doc["r_squared"] = result.r_squared;
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# config: " << config_to_json(config) << '\n' << kVarianceHeader << '\n';
  for (const RegimeRow& row : result.rows) {
    ProcessSpec spec;
    spec.family = family;
    spec.d = family == Family::iid || family == Family::harmonic ? params.d : 2;
    spec.n = row.n_points;
    spec.L = row.L;
    std::optional<double> t =
        regime == Regime::threshold ? std::optional<double>(row.param) : std::nullopt;
    write_variance_row_csv(os, spec, row.phi, t, config.replicates, config.centers,
                           *config.seed, row.v_hat, row.std_err, row.v_semi, row.v_ref);
  }
  os << "# fitted_exponent=" << format_double(result.fitted_exponent)
     << " fit_residual=" << format_double(result.fit_residual)
     << " r_squared=" << format_double(result.r_squared) << '\n';
}

void run_partition_dump(const ExperimentConfig& config, std::ostream& os) {
  if (config.n < 1) throw std::domain_error("partition dump requires --n >= 1");
  const ZonalPartition partition(config.n);
  if (config.format == "json") {
    json doc;
    doc["config"] = json::parse(config_to_json(config));
    json cells = json::array();
    for (const Cell& c : partition.cells()) {
      json jc;
      jc["index"] = c.index;
      jc["theta1"] = c.theta1;
      jc["theta2"] = c.theta2;
      jc["alpha1"] = c.alpha1;
      jc["alpha2"] = c.alpha2;
      jc["area"] = c.area();
      jc["diameter"] = c.diameter();
      cells.push_back(jc);
    }
    doc["cells"] = cells;
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# config: " << config_to_json(config) << '\n';
  os << "index,theta1,theta2,alpha1,alpha2,area,diameter\n";
  for (const Cell& c : partition.cells()) {
    os << c.index << ',' << format_double(c.theta1) << ',' << format_double(c.theta2) << ','
       << format_double(c.alpha1) << ',' << format_double(c.alpha2) << ','
       << format_double(c.area()) << ',' << format_double(c.diameter()) << '\n';
  }
}

struct VerifyCheck {
  std::string name;
  double worst;
  double tolerance;
  bool pass() const { return worst <= tolerance; }
};

}  // namespace

bool run_verify(std::ostream& os) {
  std::vector<VerifyCheck> checks;

  {  // Laplace coefficient: closed form against the defining integral
    double worst = 0.0;
    for (int d : {2, 3, 4}) {
      for (int n : {1, 2, 5, 13, 20}) {
        for (double phi : {0.1, 0.5, 1.0, 1.5}) {
          const double integral =
              gamma_d(d) * integrate_adaptive(
                               [d, n](double t) {
                                 return legendre_pd(d, n, std::cos(t)) *
                                        std::pow(std::sin(t), d - 1);
                               },
                               0.0, phi, 1e-12);
          worst = std::max(worst, std::abs(integral - laplace_coefficient(d, n, phi)));
        }
      }
    }
    checks.push_back({"laplace coefficient closed form vs quadrature", worst, 1e-9});
  }

  {  // d=2 cap difference: explicit formula against the quadrature route
    double worst = 0.0;
    for (int i = 1; i <= 12; ++i) {
      const double phi = 0.5 * M_PI * i / 12;
      for (int j = 0; j <= 12; ++j) {
        const double psi = M_PI * j / 12;
        const double closed = cap_diff_volume(2, phi, psi);
        double quad = 0.0;
        if (psi >= 2.0 * phi) {
          quad = cap_area(2, phi);
        } else {
          quad = integrate_adaptive(
                     [phi](double v) {
                       const double s2 = std::sin(phi - v) * std::sin(phi + v);
                       return s2 <= 0.0 ? 0.0 : std::sqrt(s2) / std::cos(v);
                     },
                     0.0, 0.5 * psi, 1e-12) /
                 M_PI;
        }
        worst = std::max(worst, std::abs(closed - quad));
      }
    }
    checks.push_back({"cap difference d=2 closed form vs quadrature", worst, 1e-9});
  }

  {  // kernel: degree sum against the Jacobi closed form
    double worst = 0.0;
    for (int d : {2, 3, 5}) {
      for (int L : {0, 1, 5, 32, 128}) {
        for (double x : {-0.99, -0.4, 0.0, 0.7, 1.0}) {
          const double a = kernel_kl(d, L, x);
          const double b = kernel_kl_jacobi(d, L, x);
          worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
      }
    }
    checks.push_back({"kernel sum form vs Jacobi form (relative)", worst, 1e-10});
  }

  bool all = true;
  for (const VerifyCheck& c : checks) {
    all = all && c.pass();
    os << (c.pass() ? "[pass] " : "[FAIL] ") << c.name << ": max error "
       << format_double(c.worst) << " (tolerance " << format_double(c.tolerance) << ")\n";
  }
  return all;
}

int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ostringstream buffer;
    std::ostream* os = &buffer;
    if (config.cmd == Subcommand::verify) {
      const bool ok = run_verify(out);
      return ok ? 0 : 1;
    }
    switch (config.cmd) {
      case Subcommand::sample: run_sample(config, *os); break;
      case Subcommand::variance: run_variance(config, *os); break;
      case Subcommand::regime: run_regime(config, *os); break;
      case Subcommand::partition_dump: run_partition_dump(config, *os); break;
      case Subcommand::verify: break;
    }
    if (config.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file) throw std::domain_error("cannot open output file: " + config.output);
      file << buffer.str();
    }
    return 0;
  } catch (const numerical_error& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace spherevar
