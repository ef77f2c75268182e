#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "densemimo/analytics.hpp"
#include "densemimo/errors.hpp"
#include "densemimo/json_io.hpp"
#include "densemimo/pathloss.hpp"
#include "densemimo/simulator.hpp"

namespace densemimo::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model_path;
  std::string lambda;
  std::string zeta = "1";
  std::string mk = "10";
  std::string schemes = "mr,zf";
  int k = 10;
  double tau_c = 200.0;
  double snr_db = 5.0;
  std::uint64_t seed = 1;
  std::uint64_t trials = 100;
  double bs_count = 1000.0;
  std::size_t threads = 0;
  std::string out;
  std::string format = "csv";
  bool optimize_zeta = false;
  bool uatf = false;
};

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text, const char* what) {
  if (text.empty()) throw UsageError(std::string("empty ") + what + " list");
  std::vector<double> out;
  try {
    for (const auto& part : split(text, ',')) out.push_back(parse_number(part));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
  return out;
}

std::vector<Scheme> parse_schemes(std::string_view text) {
  if (text.empty()) throw UsageError("empty scheme list");
  std::vector<Scheme> out;
  for (const auto& part : split(text, ',')) {
    try {
      out.push_back(parse_scheme(part));
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

std::vector<double> lambda_grid(const Options& o, std::string_view fallback) {
  try {
    const auto grid = parse_grid(o.lambda.empty() ? fallback : std::string_view(o.lambda));
    if (grid.front() <= 0.0) throw UsageError("BS densities must be positive");
    return grid;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--lambda: ") + e.what());
  }
}

PathLossModel load_model(const Options& o) {
  if (o.model_path.empty()) return make_dual_slope_default();
  return load_path_loss_model(o.model_path);
}

NetworkParams base_params(const Options& o) {
  NetworkParams p;
  p.k = o.k;
  p.tau_c = o.tau_c;
  p.snr0_db = o.snr_db;
  return p;
}

int antennas(double mk, int k) {
  const double m = std::round(mk * k);
  if (!(m >= 1.0) || m > 1e9) throw UsageError("--mk gives an unusable antenna count");
  return static_cast<int>(m);
}

void check(const NetworkParams& p, bool with_m) {
  try {
    if (with_m) {
      p.validate();
    } else {
      p.validate_without_m();
    }
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

std::string render_csv(const Table& t) {
  std::string s;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) s += ',';
    s += t.columns[c];
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      if (const double* d = std::get_if<double>(&row[c])) {
        s += format_number(*d);
      } else {
        s += std::get<std::string>(row[c]);
      }
    }
    s += '\n';
  }
  return s;
}

std::string render_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit([&](const auto& v) { obj[t.columns[c]] = v; }, row[c]);
    }
    rows.push_back(obj);
  }
  return rows.dump(2) + "\n";
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw UsageError("cannot write " + o.out);
  file << text;
}

void emit_table(const Table& t, const Options& o, std::ostream& out) {
  if (o.format == "csv") {
    emit(render_csv(t), o, out);
  } else {
    emit(render_json(t), o, out);
  }
}

int cmd_mu(const Options& o, std::ostream& out) {
  const auto grid = lambda_grid(o, "0.01:10000:61:log");
  const auto model = load_model(o);
  Table t{{"lambda", "mu1", "mu2"}, {}};
  for (double lambda : grid) {
    const auto mu = mu_coefficients(model, lambda);
    t.rows.push_back({lambda, mu.mu1, mu.mu2});
  }
  emit_table(t, o, out);
  return kOk;
}

int cmd_nmse(const Options& o, std::ostream& out) {
  const auto grid = lambda_grid(o, "0.01:10000:61:log");
  const auto zetas = parse_list(o.zeta, "--zeta");
  const auto model = load_model(o);
  Table t{{"lambda", "zeta", "nmse_bound"}, {}};
  for (double lambda : grid) {
    const auto mu = mu_coefficients(model, lambda);
    for (double zeta : zetas) {
      NetworkParams p = base_params(o);
      p.lambda_km2 = lambda;
      p.zeta = zeta;
      check(p, false);
      t.rows.push_back({lambda, zeta, nmse_bound(mu, p)});
    }
  }
  emit_table(t, o, out);
  return kOk;
}

int cmd_crossover(const Options& o, std::ostream& out) {
  const auto grid = lambda_grid(o, "1:1000:31:log");
  const auto zetas = parse_list(o.zeta, "--zeta");
  const auto schemes = parse_schemes(o.schemes);
  const auto model = load_model(o);
  Table t{{"lambda", "scheme", "zeta", "m_over_k_crossover"}, {}};
  for (double lambda : grid) {
    const auto mu = mu_coefficients(model, lambda);
    for (Scheme s : schemes) {
      for (double zeta : zetas) {
        NetworkParams p = base_params(o);
        p.lambda_km2 = lambda;
        p.zeta = zeta;
        check(p, false);
        t.rows.push_back({lambda, std::string(to_string(s)), zeta, crossover_antenna_ratio(mu, p, s)});
      }
    }
  }
  emit_table(t, o, out);
  return kOk;
}

int cmd_se(const Options& o, std::ostream& out) {
  const auto grid = lambda_grid(o, "1:300:31:log");
  const auto schemes = parse_schemes(o.schemes);
  const auto mks = parse_list(o.mk, "--mk");
  const auto zetas = o.optimize_zeta ? std::vector<double>{0.0} : parse_list(o.zeta, "--zeta");
  const auto model = load_model(o);
  const auto zeta_grid = default_zeta_grid(o.k, o.tau_c);
  Table t{{"lambda", "scheme", "m_over_k", "zeta_used", "se", "r_inf"}, {}};
  for (double lambda : grid) {
    const auto mu = mu_coefficients(model, lambda);
    NetworkParams base = base_params(o);
    base.lambda_km2 = lambda;
    check(base, false);
    const double r_inf = rate_asymptotic(mu.mu2, optimal_zeta_asymptotic(mu.mu2, o.k, o.tau_c).clamped, o.k, o.tau_c);
    for (Scheme s : schemes) {
      for (double mk : mks) {
        for (double zeta : zetas) {
          NetworkParams p = base;
          p.m = antennas(mk, o.k);
          p.zeta = o.optimize_zeta ? optimal_zeta_exhaustive(mu, p, s, zeta_grid) : zeta;
          check(p, true);
          t.rows.push_back({lambda, std::string(to_string(s)), mk, p.zeta, se_lower_bound(mu, p, s), r_inf});
        }
      }
    }
  }
  emit_table(t, o, out);
  return kOk;
}

int cmd_ase(const Options& o, std::ostream& out) {
  const auto grid = lambda_grid(o, "1:300:31:log");
  const auto schemes = parse_schemes(o.schemes);
  const auto mks = parse_list(o.mk, "--mk");
  const auto zetas = parse_list(o.zeta, "--zeta");
  if (mks.size() != 1 || zetas.size() != 1) throw UsageError("ase takes a single --mk and --zeta");
  const auto model = load_model(o);
  const auto zeta_grid = default_zeta_grid(o.k, o.tau_c);
  Table t{{"lambda", "scheme", "ase"}, {}};
  for (double lambda : grid) {
    const auto mu = mu_coefficients(model, lambda);
    for (Scheme s : schemes) {
      NetworkParams p = base_params(o);
      p.lambda_km2 = lambda;
      p.m = antennas(mks.front(), o.k);
      p.zeta = zetas.front();
      check(p, true);
      if (o.optimize_zeta) p.zeta = optimal_zeta_exhaustive(mu, p, s, zeta_grid);
      t.rows.push_back({lambda, std::string(to_string(s)), area_se(mu, p, s)});
    }
  }
  emit_table(t, o, out);
  return kOk;
}

json interval(const Estimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"ci99", {e.lower(), e.upper()}}};
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto grid = lambda_grid(o, "1,10,30,100");
  const auto zetas = parse_list(o.zeta, "--zeta");
  if (zetas.size() != 1) throw UsageError("validate takes a single --zeta");
  const auto schemes = parse_schemes(o.schemes);
  const auto mks = parse_list(o.mk, "--mk");
  if (mks.size() != 1) throw UsageError("validate takes a single --mk");

  SimConfig cfg;
  cfg.master_seed = o.seed;
  cfg.trials = o.trials;
  cfg.target_bs_count = o.bs_count;
  cfg.threads = o.threads;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }

  json report;
  report["seed"] = o.seed;
  report["trials"] = o.trials;
  report["target_bs_count"] = o.bs_count;
  json checks = json::array();
  bool passed = true;

  std::optional<PathLossModel> model;
  try {
    model = load_model(o);
    checks.push_back({{"name", "model"}, {"passed", true}});
  } catch (const ModelError& e) {
    checks.push_back({{"name", "model"}, {"passed", false}, {"error", e.what()}});
    passed = false;
  }

  if (model) {
    report["model"] = json::parse(to_json(*model));
    for (double lambda : grid) {
      NetworkParams p = base_params(o);
      p.lambda_km2 = lambda;
      p.zeta = zetas.front();
      p.m = antennas(mks.front(), o.k);
      check(p, false);
      const auto mu = mu_coefficients(*model, lambda);
      const TrialStats stats = estimate_nmse(*model, p, cfg);
      const double bound = nmse_bound(mu, p);
      const bool mu1_ok = stats.mu1.contains(mu.mu1);
      const bool mu2_ok = stats.mu2.contains(mu.mu2);
      const bool jensen_ok = stats.nmse->mean <= bound + stats.nmse->ci_half_width;
      checks.push_back({{"name", "mu1"}, {"lambda", lambda}, {"closed_form", mu.mu1},
                        {"simulated", interval(stats.mu1)}, {"n_effective", stats.n_effective},
                        {"passed", mu1_ok}});
      checks.push_back({{"name", "mu2"}, {"lambda", lambda}, {"closed_form", mu.mu2},
                        {"simulated", interval(stats.mu2)}, {"n_effective", stats.n_effective},
                        {"passed", mu2_ok}});
      checks.push_back({{"name", "nmse_jensen"}, {"lambda", lambda}, {"zeta", p.zeta}, {"bound", bound},
                        {"simulated", interval(*stats.nmse)}, {"passed", jensen_ok}});
      passed = passed && mu1_ok && mu2_ok && jensen_ok;
      if (o.uatf) {
        check(p, true);
        const TrialStats u = estimate_uatf_sinr(*model, p, cfg, schemes);
        for (const UatfStats& s : u.sinr_terms) {
          const double closed = sinr(mu, p, s.scheme).sinr;
          const bool ok = std::abs(s.sinr.mean - closed) <= 0.1 * closed;
          checks.push_back({{"name", "uatf_sinr"}, {"lambda", lambda}, {"scheme", std::string(to_string(s.scheme))},
                            {"m", p.m}, {"closed_form", closed}, {"simulated", interval(s.sinr)},
                            {"samples", s.samples}, {"passed", ok}});
          passed = passed && ok;
        }
      }
    }
  }
  report["checks"] = checks;
  report["passed"] = passed;
  emit(report.dump(2) + "\n", o, out);
  return passed ? kOk : kValidationFailed;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model_path, "path-loss model JSON (default: dual-slope)");
  sub->add_option("--lambda", o.lambda, "BS densities in BS/km^2: a,b,c or min:max:points[:lin|log]");
  sub->add_option("--zeta", o.zeta, "pilot reuse factor(s), comma separated");
  sub->add_option("--mk", o.mk, "antenna-UE ratio(s) M/K, comma separated");
  sub->add_option("--k", o.k, "UEs per cell")->check(CLI::PositiveNumber);
  sub->add_option("--tau-c", o.tau_c, "coherence block length in samples")->check(CLI::PositiveNumber);
  sub->add_option("--snr-db", o.snr_db, "received SNR in dB");
  sub->add_option("--scheme", o.schemes, "combiners: mr, zf or mr,zf");
  sub->add_option("--seed", o.seed, "master seed for the simulator");
  sub->add_option("--trials", o.trials, "simulator realizations per density")->check(CLI::PositiveNumber);
  sub->add_option("--bs-count", o.bs_count, "expected BSs in the simulation window");
  sub->add_option("--threads", o.threads, "worker threads (0 = all; DENSEMIMO_THREADS caps)");
  sub->add_option("--out", o.out, "write to this file instead of stdout");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--optimize-zeta", o.optimize_zeta, "pick zeta maximizing the SE over tau_p = K..tau_c-1");
  sub->add_flag("--uatf", o.uatf, "validate: also simulate the UatF SINR");
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() < 3 || parts.size() > 4) throw std::invalid_argument("range must be min:max:points[:lin|log]");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    const std::string spacing = parts.size() == 4 ? parts[3] : "log";
    if (count < 1 || count != std::floor(count) || count > 1e7) throw std::invalid_argument("bad point count");
    const auto n = static_cast<std::size_t>(count);
    if (spacing != "lin" && spacing != "log") throw std::invalid_argument("spacing must be lin or log");
    if (spacing == "log" && !(lo > 0.0)) throw std::invalid_argument("log spacing needs a positive minimum");
    if (n == 1) {
      if (lo != hi) throw std::invalid_argument("one point needs min == max");
      grid.push_back(lo);
    }
    for (std::size_t i = 0; n > 1 && i < n; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(n - 1);
      if (i == n - 1) {
        grid.push_back(hi);
      } else if (spacing == "lin") {
        grid.push_back(lo + f * (hi - lo));
      } else {
        grid.push_back(lo * std::pow(hi / lo, f));
      }
    }
  } else {
    if (text.empty()) throw std::invalid_argument("empty grid");
    for (const auto& part : split(text, ',')) grid.push_back(parse_number(part));
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
  }
  return grid;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Massive MIMO closed forms and stochastic-geometry Monte Carlo"};
  app.require_subcommand(1);
  Options o;
  using Handler = int (*)(const Options&, std::ostream&);
  struct Sub {
    const char* name;
    const char* help;
    Handler run;
  };
  const Sub subs[] = {
      {"mu", "interference moments mu1, mu2 over lambda", cmd_mu},
      {"nmse", "channel-estimate NMSE bound over lambda and zeta", cmd_nmse},
      {"crossover", "M/K where interference equals pilot contamination", cmd_crossover},
      {"se", "spectral-efficiency lower bound and its M -> infinity limit", cmd_se},
      {"ase", "area spectral efficiency", cmd_ase},
      {"validate", "Monte Carlo checks of the closed forms (JSON report)", cmd_validate},
  };
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, o);
    handlers.emplace_back(sub, s.run);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    for (const auto& [sub, run] : handlers) {
      if (sub->parsed()) return run(o, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}

}  // namespace densemimo::cli
