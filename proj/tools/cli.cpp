#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "confham/error.hpp"
#include "confham/gls.hpp"
#include "confham/moser.hpp"
#include "confham/symmetry.hpp"

namespace confham::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

void put_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

void append(std::vector<std::string>& row, const Vec4& v) {
  for (double c : {v.v3.x, v.v3.y, v.v3.z, v.h}) row.push_back(num(c));
}
void append(std::vector<std::string>& row, const Vec3& v) {
  for (double c : {v.x, v.y, v.z}) row.push_back(num(c));
}

double max_abs_diff(const PhasePointE& a, const PhasePointE& b) {
  return (to_vector(a) - to_vector(b)).cwiseAbs().maxCoeff();
}
double max_abs_diff(const DelaunayPoint& a, const DelaunayPoint& b) {
  return (to_vector(a.om, a.w) - to_vector(b.om, b.w)).cwiseAbs().maxCoeff();
}

std::vector<double> sample_times(double t_final, int n) {
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = n == 1 ? 0.0 : t_final * i / (n - 1);
  return ts;
}

// Splits one CSV record, honouring double quotes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells(1);
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else if (c != '\r') {
      cells.back() += c;
    }
  }
  return cells;
}

std::optional<double> parse_double(const std::string& s) {
  const char* b = s.c_str();
  while (*b == ' ') ++b;
  char* end = nullptr;
  const double v = std::strtod(b, &end);
  if (end == b) return std::nullopt;
  while (*end == ' ') ++end;
  if (*end != '\0') return std::nullopt;
  return v;
}

const std::vector<std::string> kPhaseColumns{"rx", "ry", "rz", "px", "py", "pz"};
const std::vector<std::string> kDelaunayColumns{"OMx", "OMy", "OMz", "OMh", "Wx",
                                                "Wy",  "Wz",  "Wh",  "sig"};

struct MapSpec {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  // Fills the output cells for one parsed row or throws.
  std::function<std::vector<std::string>(const std::vector<double>&)> apply;
};

MapSpec map_spec(const std::string& which, const KeplerParams& P) {
  const std::vector<std::string> q_out{"OMx", "OMy", "OMz", "OMh", "Wx", "Wy", "Wz", "Wh", "sig"};
  auto phase = [](const std::vector<double>& v) {
    return PhasePointE{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
  };
  auto delaunay_row = [P](const DelaunayPoint& q, double E) {
    std::vector<std::string> row;
    append(row, q.om);
    append(row, q.w);
    row.push_back(num(zeta(q.sig)));
    const ConstraintResiduals res = residuals(q, P);
    row.push_back(num(res.quadric));
    row.push_back(num(res.tangency));
    row.push_back(num(std::abs(delaunay_hamiltonian(q, P) - E)));
    return row;
  };

  if (which == "moser") {
    auto cols = q_out;
    cols.insert(cols.end(), {"rho", "quadric", "tangency", "energy_residual"});
    return {kPhaseColumns, cols, [=](const std::vector<double>& v) {
              const PhasePointE x = phase(v);
              const double E = energy(x, P);
              const std::optional<Signature> sig = energy_class(x, P);
              if (!sig) throw Error(ErrorKind::zero_energy, "moser lift needs E != 0");
              const double rho = rho_for_energy(E, P);
              const CotangentQPoint q = moser_lift_inv(x, rho, *sig);
              std::vector<std::string> row;
              append(row, q.om);
              append(row, q.w);
              row.push_back(num(zeta(q.sig)));
              row.push_back(num(rho));
              const ConstraintResiduals res = residuals(q);
              row.push_back(num(res.quadric));
              row.push_back(num(res.tangency));
              row.push_back(num(std::abs(moser_hamiltonian(q, P) - E)));
              return row;
            }};
  }
  if (which == "s" || which == "gls") {
    auto cols = q_out;
    cols.insert(cols.end(), {"quadric", "tangency", "energy_residual"});
    const bool flow = which == "gls";
    return {kPhaseColumns, cols, [=](const std::vector<double>& v) {
              const PhasePointE x = phase(v);
              return delaunay_row(flow ? gls_map(x, P) : s_inverse(x, P), energy(x, P));
            }};
  }
  if (which == "parabolic") {
    return {kPhaseColumns,
            {"omx", "omy", "omz", "wx", "wy", "wz", "involution", "energy_residual"},
            [=](const std::vector<double>& v) {
              const PhasePointE x = phase(v);
              const CotangentEPoint q = parabolic_lift(x, P.l);
              std::vector<std::string> row;
              append(row, q.om);
              append(row, q.w);
              row.push_back(num(max_abs_diff(parabolic_lift(q, P.l), x)));
              row.push_back(num(std::abs(parabolic_hamiltonian(q, P) - energy(x, P))));
              return row;
            }};
  }
  if (which == "gls-inverse") {
    return {kDelaunayColumns,
            {"rx", "ry", "rz", "px", "py", "pz", "energy_residual", "roundtrip"},
            [=](const std::vector<double>& v) {
              if (v[8] != 1.0 && v[8] != -1.0)
                throw Error(ErrorKind::invalid_argument, "sig must be 1 or -1");
              const DelaunayPoint q{{{v[0], v[1], v[2]}, v[3]},
                                    {{v[4], v[5], v[6]}, v[7]},
                                    v[8] > 0 ? Signature::elliptic : Signature::hyperbolic};
              const PhasePointE x = gls_inverse(q, P);
              std::vector<std::string> row;
              append(row, x.r);
              append(row, x.p);
              row.push_back(num(std::abs(energy(x, P) - delaunay_hamiltonian(q, P))));
              row.push_back(num(max_abs_diff(gls_map(x, P), q)));
              return row;
            }};
  }
  throw Error(ErrorKind::invalid_argument, "unknown map '" + which + "'");
}

PhasePointE point_from(const std::vector<double>& v) {
  return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (!(tol > 0.0 && tol <= 1e-3))
    throw Error(ErrorKind::invalid_argument, "tol must lie in (0, 1e-3], got " + num(tol));
  if (samples && *samples <= 0)
    throw Error(ErrorKind::invalid_argument, "samples must be positive");
}

VerifyConfig RunConfig::verify() const {
  VerifyConfig v;
  v.params = params;
  v.tol = tol;
  v.seed = seed;
  v.samples = samples;
  return v;
}

const std::vector<SuiteGroup>& suite_groups() {
  static const std::vector<SuiteGroup> groups{
      {"conservation", {"conservation", "hodograph"}},
      {"roundtrip", {"roundtrip", "energy"}},
      {"symplectic", {"symplectic", "anti-symplectic"}},
      {"equivariance", {"equivariance", "conformal", "sigma"}},
      {"brackets", {"brackets"}},
      {"algebroid", {"algebroid", "algebroid action"}},
      {"intertwine", {"intertwine", "explicit"}},
  };
  return groups;
}

std::vector<std::string> expand_suite(const std::string& name) {
  if (name == "all") {
    std::vector<std::string> all;
    for (const SuiteEntry& e : suite_registry()) all.push_back(e.name);
    return all;
  }
  for (const SuiteGroup& g : suite_groups())
    if (g.name == name) return g.suites;
  throw Error(ErrorKind::invalid_argument, "unknown suite '" + name + "'");
}

std::vector<SuiteReport> run_suites(const std::vector<std::string>& names, const VerifyConfig& cfg,
                                    unsigned threads) {
  std::vector<const SuiteEntry*> entries;
  for (const std::string& n : names) {
    const auto& reg = suite_registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const SuiteEntry& e) { return e.name == n; });
    if (it == reg.end()) throw Error(ErrorKind::invalid_argument, "unknown suite '" + n + "'");
    entries.push_back(&*it);
  }

  std::vector<SuiteReport> reports(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < entries.size();) {
      try {
        reports[i] = entries[i]->run(cfg);
      } catch (const std::exception& e) {
        // Suites record their own sampling errors; this is the backstop.
        SuiteReport r;
        r.name = entries[i]->name;
        Check c;
        c.name = "suite aborted";
        c.error = e.what();
        r.checks.push_back(c);
        reports[i] = r;
      }
    }
  };
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(entries.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  return reports;
}

nlohmann::json report_json(const SuiteReport& rep) {
  const Check* w = rep.worst();
  nlohmann::json j{{"name", rep.name},
                   {"samples", rep.samples()},
                   {"max_residual", w ? w->max_residual : 0.0},
                   {"tolerance", w ? w->tolerance : 0.0},
                   {"pass", rep.pass()},
                   {"worst", w ? w->name : ""}};
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : rep.checks) {
    nlohmann::json cj{{"name", c.name},
                      {"samples", c.samples},
                      {"max_residual", c.max_residual},
                      {"tolerance", c.tolerance},
                      {"gated", c.gated},
                      {"pass", c.pass()}};
    if (!c.error.empty()) cj["error"] = c.error;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  nlohmann::json info = nlohmann::json::object();
  for (const auto& [k, v] : rep.info) info[k] = v;
  j["info"] = std::move(info);
  return j;
}

void write_trajectory(const RunConfig& cfg, const PhasePointE& x0, double t_final, int n_samples,
                      std::ostream& out) {
  if (n_samples < 1) throw Error(ErrorKind::invalid_argument, "n-samples must be at least 1");
  put_row(out, {"t", "rx", "ry", "rz", "px", "py", "pz", "E", "Lx", "Ly", "Lz", "ex", "ey", "ez"});
  if (!(norm(x0.r) > 0.0)) throw Error(ErrorKind::collision, "initial point at r = 0");
  PhasePointE x = x0;
  double t_prev = 0.0;
  try {
    for (double t : sample_times(t_final, n_samples)) {
      if (t != t_prev) x = kepler_flow(x, t - t_prev, cfg.params, cfg.tol);
      t_prev = t;
      const EnergyMomentum j = energy_momentum(x, cfg.params);
      std::vector<std::string> row{num(t)};
      append(row, x.r);
      append(row, x.p);
      row.push_back(num(j.E));
      append(row, j.L);
      append(row, j.eps);
      put_row(out, row);
    }
  } catch (...) {
    out.flush();
    throw;
  }
}

void write_delaunay_flow(const RunConfig& cfg, const PhasePointE& x0, double s_final,
                         int n_samples, std::ostream& out) {
  if (n_samples < 1) throw Error(ErrorKind::invalid_argument, "n-samples must be at least 1");
  const DelaunayPoint q = gls_map(x0, cfg.params);
  put_row(out, {"s", "OMx", "OMy", "OMz", "OMh", "Wx", "Wy", "Wz", "Wh", "H", "quadric",
                "tangency"});
  for (double s : sample_times(s_final, n_samples)) {
    const DelaunayPoint qs = delaunay_flow(q, s, cfg.params);
    std::vector<std::string> row{num(s)};
    append(row, qs.om);
    append(row, qs.w);
    row.push_back(num(delaunay_hamiltonian(qs, cfg.params)));
    const ConstraintResiduals res = residuals(qs, cfg.params);
    row.push_back(num(res.quadric));
    row.push_back(num(res.tangency));
    put_row(out, row);
  }
}

MapSummary map_points(const RunConfig& cfg, const std::string& which, std::istream& in,
                      std::ostream& out) {
  const MapSpec spec = map_spec(which, cfg.params);
  std::vector<std::size_t> index(spec.inputs.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;

  std::vector<std::string> header = spec.outputs;
  header.push_back("error");
  put_row(out, header);

  MapSummary summary;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (first) {
      first = false;
      if (!parse_double(cells[0])) {
        for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
          const auto it = std::find(cells.begin(), cells.end(), spec.inputs[i]);
          if (it == cells.end())
            throw Error(ErrorKind::invalid_argument, "input header lacks column '" + spec.inputs[i] + "'");
          index[i] = static_cast<std::size_t>(it - cells.begin());
        }
        continue;
      }
    }
    ++summary.rows;
    std::vector<std::string> row;
    std::string error;
    try {
      std::vector<double> v(spec.inputs.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto d = index[i] < cells.size() ? parse_double(cells[index[i]]) : std::nullopt;
        if (!d) throw Error(ErrorKind::invalid_argument, "bad or missing value for " + spec.inputs[i]);
        v[i] = *d;
      }
      row = spec.apply(v);
    } catch (const std::exception& e) {
      error = e.what();
      row.assign(spec.outputs.size(), "");
      ++summary.errors;
    }
    row.push_back(csv_cell(error));
    put_row(out, row);
  }
  return summary;
}

nlohmann::json brackets_json(const RunConfig& cfg, const PhasePointE& x, double tolerance) {
  nlohmann::json rows = nlohmann::json::array();
  double worst = 0.0;
  for (const PoissonTableEntry& e : poisson_table_check(x, cfg.params)) {
    rows.push_back({{"name", e.name}, {"fd", e.fd}, {"expected", e.expected}, {"residual", e.residual()}});
    if (!(e.residual() <= worst)) worst = e.residual();
  }
  return {{"name", "brackets"},
          {"point", {x.r.x, x.r.y, x.r.z, x.p.x, x.p.y, x.p.z}},
          {"rows", rows},
          {"samples", rows.size()},
          {"max_residual", worst},
          {"tolerance", tolerance},
          {"pass", worst <= tolerance}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal reparametrization toolkit for the Kepler problem", "confham"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  double m = 1.0, k = 1.0, R = 1.0;
  std::optional<double> l;
  RunConfig cfg;
  int samples = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--m", m, "mass")->capture_default_str();
  app.add_option("--k", k, "force constant")->capture_default_str();
  app.add_option("--R", R, "radius of the Delaunay quadric")->capture_default_str();
  app.add_option("--l", l, "parabolic scale (default 2 m^2 k)");
  app.add_option("--tol", cfg.tol, "integrator tolerance, in (0, 1e-3]")->capture_default_str();
  app.add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  app.add_option("--samples", samples, "override every suite's sample count")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--threads", threads, "worker threads for check")->check(CLI::PositiveNumber);

  std::vector<double> x0;
  const char* x0_help = "initial point rx,ry,rz,px,py,pz";

  auto* integrate = app.add_subcommand("integrate", "integrate a Kepler orbit to CSV");
  double t_final = 0.0;
  int n_samples = 100;
  integrate->add_option("--x0", x0, x0_help)->required()->expected(6)->delimiter(',');
  integrate->add_option("--t-final", t_final, "final time")->required();
  integrate->add_option("--n-samples", n_samples, "rows, evenly spaced from t = 0")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* map = app.add_subcommand("map", "apply a map to every row of a CSV file");
  std::string which, in_path = "-";
  map->add_option("which", which, "moser | s | gls | gls-inverse | parabolic")
      ->required()
      ->check(CLI::IsMember({"moser", "s", "gls", "gls-inverse", "parabolic"}));
  map->add_option("--in", in_path, "input CSV (default stdin)");

  auto* flow = app.add_subcommand("flow", "Delaunay flow of the GLS image of a point to CSV");
  double s_final = 0.0;
  flow->add_option("--x0", x0, x0_help)->required()->expected(6)->delimiter(',');
  flow->add_option("--s-final", s_final, "final flow parameter")->required();
  flow->add_option("--n-samples", n_samples, "rows, evenly spaced from s = 0")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "run verification suites and print a JSON report");
  std::string suite = "all";
  std::vector<std::string> suite_names{"all"};
  for (const SuiteGroup& g : suite_groups()) suite_names.push_back(g.name);
  check->add_option("suite", suite, "all | conservation | roundtrip | symplectic | equivariance | "
                                    "brackets | algebroid | intertwine")
      ->capture_default_str()
      ->check(CLI::IsMember(suite_names));

  auto* brackets = app.add_subcommand("brackets", "Poisson table at a point as JSON");
  brackets->add_option("--x0", x0, x0_help)->required()->expected(6)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    cfg.params = KeplerParams::make(m, k, R, l);
    if (samples > 0) cfg.samples = samples;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "confham: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      err << "confham: cannot open " << cfg.out << " for writing\n";
      return kExitUsage;
    }
  }
  std::ostream& dest = cfg.out.empty() ? out : file;

  if (*integrate) {
    try {
      write_trajectory(cfg, point_from(x0), t_final, n_samples, dest);
    } catch (const Error& e) {
      err << "confham: integrate stopped: " << e.what() << '\n';
      return kExitFail;
    }
    return kExitPass;
  }

  if (*map) {
    std::ifstream file_in;
    if (in_path != "-") {
      file_in.open(in_path);
      if (!file_in) {
        err << "confham: cannot read " << in_path << '\n';
        return kExitUsage;
      }
    }
    std::istream& src = in_path == "-" ? std::cin : file_in;
    try {
      const MapSummary s = map_points(cfg, which, src, dest);
      if (s.errors > 0)
        err << "confham: map " << which << ": " << s.errors << " of " << s.rows
            << " rows failed (see the error column)\n";
    } catch (const Error& e) {
      err << "confham: " << e.what() << '\n';
      return kExitUsage;
    }
    return kExitPass;
  }

  if (*flow) {
    try {
      write_delaunay_flow(cfg, point_from(x0), s_final, n_samples, dest);
    } catch (const Error& e) {
      err << "confham: flow failed: " << e.what() << '\n';
      return kExitFail;
    }
    return kExitPass;
  }

  if (*brackets) {
    try {
      const nlohmann::json j = brackets_json(cfg, point_from(x0));
      dest << j.dump(2) << '\n';
      return j["pass"].get<bool>() ? kExitPass : kExitFail;
    } catch (const Error& e) {
      err << "confham: brackets failed: " << e.what() << '\n';
      return kExitFail;
    }
  }

  // check
  const std::vector<SuiteReport> reports = run_suites(expand_suite(suite), cfg.verify(), threads);
  nlohmann::json j{{"config",
                    {{"m", cfg.params.m},
                     {"k", cfg.params.k},
                     {"R", cfg.params.R},
                     {"l", cfg.params.l},
                     {"tol", cfg.tol},
                     {"seed", cfg.seed},
                     {"samples", cfg.samples ? nlohmann::json(*cfg.samples) : nlohmann::json()}}}};
  bool pass = true;
  nlohmann::json suites = nlohmann::json::array();
  for (const SuiteReport& r : reports) {
    suites.push_back(report_json(r));
    pass = pass && r.pass();
    err << (r.pass() ? "pass " : "FAIL ") << r.name << " (" << num(r.seconds) << " s)\n";
  }
  j["suites"] = std::move(suites);
  j["pass"] = pass;
  dest << j.dump(2) << '\n';
  return pass ? kExitPass : kExitFail;
}

}  // namespace confham::cli
