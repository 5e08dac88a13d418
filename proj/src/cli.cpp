#include "fraceig/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "fraceig/asymptotics.hpp"
#include "fraceig/eigensolve.hpp"
#include "fraceig/functional.hpp"
#include "fraceig/kernel.hpp"

namespace fraceig::cli {

using json = nlohmann::ordered_json;

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string text(buf);
  if (std::isfinite(value) && text.find_first_of(".e") == std::string::npos) text += ".0";
  return text;
}

namespace {

/// TOML, or a JSON report whose "config" field holds the TOML.
class ReportConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    input >> std::ws;
    if (input.peek() != '{') return CLI::ConfigTOML::from_config(input);
    const json report = json::parse(input, nullptr, false);
    if (report.is_discarded()) throw CLI::FileError("config report is not valid JSON");
    if (!report.contains("config") || !report["config"].is_string())
      throw CLI::FileError("config report has no \"config\" string");
    std::istringstream toml(report["config"].get<std::string>());
    return CLI::ConfigTOML::from_config(toml);
  }
};

double parse_real(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ValidationError("not a real number: '" + std::string(text) + "'");
  return value;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<std::string_view> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::string_view rest(text);
  while (true) {
    const auto pos = rest.find(sep);
    parts.push_back(rest.substr(0, pos));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  std::vector<double> values;
  if (sep == ':') {
    if (parts.size() != 3) throw ValidationError("range must be lo:hi:count, got '" + text + "'");
    const double lo = parse_real(parts[0]);
    const double hi = parse_real(parts[1]);
    const double count = parse_real(parts[2]);
    if (!(count >= 1.0) || count != std::floor(count))
      throw ValidationError("range count must be a positive integer, got '" + text + "'");
    const auto m = static_cast<std::size_t>(count);
    if (m == 1) return {lo};
    for (std::size_t i = 0; i < m; ++i)
      values.push_back(i + 1 == m ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1));
    return values;
  }
  for (auto part : parts) values.push_back(parse_real(part));
  return values;
}

GridFunction load_function_file(const std::filesystem::path& path, const DomainPtr& domain) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open function file " + path.string());
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    values.push_back(parse_real(line));
  }
  if (values.size() != domain->interior_count())
    throw ValidationError("function file " + path.string() + ": expected " +
                          std::to_string(domain->interior_count()) + " values, got " +
                          std::to_string(values.size()));
  return GridFunction(domain, std::move(values));
}

void write_function_file(const std::filesystem::path& path, const GridFunction& u) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write function file " + path.string());
  for (double v : u.values()) out << format_real(v) << '\n';
}

namespace {

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_real(const std::optional<double>& v) { return v ? real_or_null(*v) : json(nullptr); }

struct CsvRow {
  double param;
  double lambda;
  std::optional<double> reference;
  std::optional<double> rel_error;
};

struct Report {
  std::string summary;
  std::vector<CsvRow> rows;
  json results;
  bool converged = true;
};

std::string csv_text(const std::vector<CsvRow>& rows) {
  std::string text = "param,lambda,reference,rel_error\n";
  for (const auto& r : rows) {
    text += format_real(r.param) + "," + format_real(r.lambda) + ",";
    text += (r.reference ? format_real(*r.reference) : "") + ",";
    text += (r.rel_error ? format_real(*r.rel_error) : "") + "\n";
  }
  return text;
}

DomainPtr make_domain(const RunConfig& c) {
  if (c.domain == "interval") return build_interval(c.L, c.n);
  if (c.domain == "box") return build_box(c.Lx, c.Ly, c.n);
  if (c.domain == "mask") {
    if (c.mask.empty()) throw ValidationError("--domain mask requires --mask");
    return load_mask_file(c.mask);
  }
  throw ValidationError("unknown domain '" + c.domain + "' (interval, box, mask)");
}

std::optional<Kernel> make_kernel(const RunConfig& c) {
  if (c.kernel == "none") return std::nullopt;
  if (c.kernel == "constant") return Kernel::constant(c.kernel_value);
  if (c.kernel == "periodic") return Kernel::periodic_product(c.kernel_mean, c.kernel_amplitude, c.kernel_frequency);
  throw ValidationError("unknown kernel '" + c.kernel + "' (none, constant, periodic)");
}

SolverOptions make_solver(const RunConfig& c, const DomainPtr& domain) {
  SolverOptions opt;
  opt.max_iterations = c.max_iter;
  opt.tolerance = c.tol;
  opt.lbfgs_memory = c.lbfgs_memory;
  opt.restarts = c.restarts;
  opt.seed = c.seed;
  if (!c.initial_guess.empty()) {
    const auto u = load_function_file(c.initial_guess, domain);
    opt.initial_guess = std::vector<double>(u.values().begin(), u.values().end());
  }
  opt.validate();
  return opt;
}

json grid_json(const Domain& d) {
  return json{{"kind", to_string(d.kind())},
              {"dim", d.dim()},
              {"n", d.intervals(0)},
              {"h", d.spacing()},
              {"interior_nodes", d.interior_count()}};
}

json sweep_json(const SweepReport& r) {
  json j{{"kind", to_string(r.kind)},
         {"k", r.k},
         {"n", r.n},
         {"h", r.h},
         {"reference", r.reference},
         {"extrapolated", optional_real(r.extrapolated)},
         {"parameters", r.parameters},
         {"values", r.values},
         {"rel_errors", r.rel_errors},
         {"eigenfunction_distances", r.eigenfunction_distances},
         {"all_converged", r.all_converged},
         {"note", r.note}};
  if (r.refinement) {
    const auto& f = *r.refinement;
    j["refinement"] = json{{"parameter", f.parameter},       {"n_coarse", f.n_coarse},
                           {"value_coarse", f.value_coarse}, {"n_fine", f.n_fine},
                           {"value_fine", f.value_fine},     {"relative_change", f.relative_change}};
  } else {
    j["refinement"] = nullptr;
  }
  return j;
}

Report sweep_report(const SweepReport& r, const char* label) {
  Report out;
  for (std::size_t i = 0; i < r.parameters.size(); ++i)
    out.rows.push_back({r.parameters[i], r.values[i], r.reference, r.rel_errors[i]});
  out.results = sweep_json(r);
  out.converged = r.all_converged;
  out.summary = std::string(label) + ": " + std::to_string(r.parameters.size()) +
                " points, reference=" + format_real(r.reference) +
                ", last=" + format_real(r.values.back()) +
                (r.extrapolated ? ", extrapolated=" + format_real(*r.extrapolated) : std::string()) +
                ", last rel_error=" + format_real(r.rel_errors.back());
  return out;
}

Report do_kconst(const RunConfig& c) {
  const double quad = k_constant(c.kconst_dim, c.kconst_p);
  const double closed = k_constant_closed_form(c.kconst_dim, c.kconst_p);
  Report out;
  out.summary = format_real(quad);
  out.rows.push_back({c.kconst_p, quad, closed, (quad - closed) / closed});
  out.results = json{{"N", c.kconst_dim}, {"p", c.kconst_p}, {"K", quad}, {"K_closed_form", closed}};
  return out;
}

Report do_energy(const RunConfig& c) {
  if (c.function.empty()) throw ValidationError("energy requires --function");
  const auto domain = make_domain(c);
  const FracParams fp{c.s, c.p, std::nullopt};
  fp.validate();
  const auto u = load_function_file(c.function, domain);
  const double energy = gagliardo_energy(u, fp);
  const double fn = f_n(u, fp);
  const double norm = lq_norm(u, c.p);
  Report out;
  out.results = json{{"grid", grid_json(*domain)},
                     {"gagliardo_energy", energy},
                     {"f_n", fn},
                     {"lp_norm", norm}};
  out.summary = "energy=" + format_real(energy) + " f_n=" + format_real(fn);
  if (const auto kernel = make_kernel(c)) {
    const double weighted = weighted_energy(u, fp, *kernel);
    out.results["weighted_energy"] = weighted;
    out.summary += " weighted=" + format_real(weighted);
  }
  out.rows.push_back({c.s, energy, std::nullopt, std::nullopt});
  return out;
}

Report do_eig1(const RunConfig& c) {
  const auto domain = make_domain(c);
  const FracParams fp{c.s, c.p, std::nullopt};
  fp.validate();
  const auto opt = make_solver(c, domain);
  const auto kernel = make_kernel(c);
  const auto result = kernel ? first_eigenpair_weighted(domain, fp, *kernel, opt) : first_eigenpair(domain, fp, opt);
  if (!c.eigenfunction_out.empty()) write_function_file(c.eigenfunction_out, result.eigenfunction);
  Report out;
  out.converged = result.converged;
  out.rows.push_back({c.s, result.lambda, std::nullopt, std::nullopt});
  out.results = json{{"grid", grid_json(*domain)},
                     {"s", c.s},
                     {"p", c.p},
                     {"weighted", kernel.has_value()},
                     {"lambda", result.lambda},
                     {"iterations", result.iterations},
                     {"residual", real_or_null(result.residual)},
                     {"converged", result.converged},
                     {"monotone", result.monotone},
                     {"used_fallback_start", result.used_fallback_start}};
  out.summary = "lambda=" + format_real(result.lambda) + " iterations=" + std::to_string(result.iterations) +
                (result.converged ? "" : " (not converged)");
  return out;
}

Report do_spectrum(const RunConfig& c) {
  const auto domain = make_domain(c);
  if (c.k < 1) throw ValidationError("--k must be >= 1");
  const auto kernel = make_kernel(c);
  const auto pairs = kernel ? spectrum_linear_weighted(domain, c.s, *kernel, static_cast<std::size_t>(c.k))
                            : spectrum_linear(domain, c.s, static_cast<std::size_t>(c.k));
  Report out;
  std::vector<double> lambdas;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    lambdas.push_back(pairs[i].lambda);
    out.rows.push_back({static_cast<double>(i + 1), pairs[i].lambda, std::nullopt, std::nullopt});
  }
  out.results = json{{"grid", grid_json(*domain)}, {"s", c.s}, {"weighted", kernel.has_value()}, {"eigenvalues", lambdas}};
  out.summary = "lambda_1=" + format_real(lambdas.front()) + " lambda_" + std::to_string(c.k) + "=" +
                format_real(lambdas.back());
  return out;
}

SweepOptions sweep_options(const RunConfig& c, const DomainPtr& domain) {
  SweepOptions opt;
  opt.solver = make_solver(c, domain);
  opt.refinement = c.refinement;
  return opt;
}

Report do_sweep_s(const RunConfig& c) {
  const auto domain = make_domain(c);
  return sweep_report(sweep_s(domain, c.p, c.k, parse_list(c.s_values), sweep_options(c, domain)), "sweep-s");
}

Report do_sweep_p(const RunConfig& c) {
  const auto domain = make_domain(c);
  return sweep_report(sweep_p(domain, c.alpha, parse_list(c.p_values), sweep_options(c, domain)), "sweep-p");
}

Report do_homogenize(const RunConfig& c) {
  const auto domain = make_domain(c);
  const FracParams fp{c.s, c.p, std::nullopt};
  fp.validate();
  RunConfig kc = c;
  if (kc.kernel == "none") kc.kernel = "periodic";
  const auto family = make_kernel(kc);
  std::vector<int> freqs;
  for (double f : parse_list(c.frequencies)) {
    if (f != std::floor(f) || f < 1.0) throw ValidationError("frequencies must be positive integers");
    freqs.push_back(static_cast<int>(f));
  }
  return sweep_report(homogenization_sweep(domain, fp, *family, freqs, sweep_options(c, domain)), "homogenize");
}

Report do_certificate(const RunConfig& c, std::ostream& err) {
  const auto domain = make_domain(c);
  const auto cert = infinity_eigen_certificate(domain, c.alpha);
  if (cert.degraded) err << "warning: no grid node attains the inradius; the certificate is degraded\n";
  Report out;
  out.summary = format_real(cert.lambda);
  out.rows.push_back({c.alpha, cert.lambda, cert.certified_ratio, (cert.certified_ratio - cert.lambda) / cert.lambda});
  out.results = json{{"grid", grid_json(*domain)},
                     {"alpha", c.alpha},
                     {"inradius", inradius(*domain)},
                     {"lambda", cert.lambda},
                     {"certified_ratio", cert.certified_ratio},
                     {"degraded", cert.degraded}};
  return out;
}

void write_report(const RunConfig& c, const std::string& config_text, const Report& report, std::ostream& out) {
  if (c.output.empty()) return;
  if (c.format != "csv" && c.format != "json" && c.format != "both")
    throw ValidationError("--format must be csv, json or both");
  const bool csv = c.format != "json";
  const bool js = c.format != "csv";
  json doc{{"schema_version", "1"}, {"subcommand", c.subcommand}, {"config", config_text}, {"results", report.results}};
  const std::string json_text = doc.dump(2) + "\n";
  if (c.output == "-") {
    if (csv) out << csv_text(report.rows);
    if (csv && js) out << '\n';
    if (js) out << json_text;
    return;
  }
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write report " + path);
    f << text;
  };
  if (csv) write(c.output + ".csv", csv_text(report.rows));
  if (js) write(c.output + ".json", json_text);
}

// ---------------------------------------------------------------------------

void add_domain(CLI::App* sub, RunConfig& c) {
  sub->add_option("--domain", c.domain, "interval | box | mask");
  sub->add_option("--L", c.L, "interval length");
  sub->add_option("--Lx", c.Lx, "box width");
  sub->add_option("--Ly", c.Ly, "box height");
  sub->add_option("--mask", c.mask, "mask file (domain mask)");
  sub->add_option("--n", c.n, "grid intervals along x");
}

void add_kernel(CLI::App* sub, RunConfig& c) {
  sub->add_option("--kernel", c.kernel, "none | constant | periodic");
  sub->add_option("--kernel-value", c.kernel_value, "constant kernel value");
  sub->add_option("--kernel-mean", c.kernel_mean, "periodic kernel mean");
  sub->add_option("--kernel-amplitude", c.kernel_amplitude, "periodic kernel amplitude");
  sub->add_option("--kernel-frequency", c.kernel_frequency, "periodic kernel frequency");
}

void add_solver(CLI::App* sub, RunConfig& c) {
  sub->add_option("--max-iter", c.max_iter, "maximum descent iterations");
  sub->add_option("--tol", c.tol, "relative quotient change for convergence");
  sub->add_option("--lbfgs-memory", c.lbfgs_memory, "L-BFGS memory (0 = steepest descent)");
  sub->add_option("--restarts", c.restarts, "extra random starts");
  sub->add_option("--seed", c.seed, "random seed for restarts");
  sub->add_option("--initial-guess", c.initial_guess, "function file with the starting values");
}

void add_output(CLI::App* sub, RunConfig& c, const std::string& default_output) {
  sub->add_option("--output", c.output, "report prefix (PREFIX.csv, PREFIX.json); '-' = stdout")
      ->default_str(default_output);
  sub->add_option("--format", c.format, "csv | json | both");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  // Reports go to stdout by default except for commands whose result is a single number.
  std::map<std::string, std::string> default_output{{"kconst", ""}, {"energy", ""}, {"certificate", ""}};

  CLI::App app{"Eigenvalues of fractional p-Laplacian type operators and their limits", "fraceig"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML file ([subcommand] sections) or a JSON report");
  app.config_formatter(std::make_shared<ReportConfig>());
  app.option_defaults()->always_capture_default();

  auto sub = [&](const std::string& name, const std::string& about) {
    auto* s = app.add_subcommand(name, about);
    s->option_defaults()->always_capture_default();
    const auto it = default_output.find(name);
    add_output(s, c, it == default_output.end() ? "-" : it->second);
    return s;
  };

  auto* kconst = sub("kconst", "K(N,p) by quadrature");
  kconst->add_option("N", c.kconst_dim, "dimension (1, 2, 3)")->required();
  kconst->add_option("p", c.kconst_p, "exponent")->required();

  auto* energy = sub("energy", "seminorm of a function file");
  add_domain(energy, c);
  energy->add_option("--s", c.s);
  energy->add_option("--p", c.p);
  add_kernel(energy, c);
  energy->add_option("--function", c.function, "function file (one value per interior node)");

  auto* eig1 = sub("eig1", "first eigenpair");
  add_domain(eig1, c);
  eig1->add_option("--s", c.s);
  eig1->add_option("--p", c.p);
  add_kernel(eig1, c);
  add_solver(eig1, c);
  eig1->add_option("--eigenfunction-out", c.eigenfunction_out, "write the eigenfunction here");

  auto* spectrum = sub("spectrum", "lowest eigenvalues at p = 2");
  add_domain(spectrum, c);
  spectrum->add_option("--s", c.s);
  spectrum->add_option("--k", c.k, "number of eigenvalues");
  add_kernel(spectrum, c);

  auto* sweep_s_cmd = sub("sweep-s", "s -> 1 sweep");
  add_domain(sweep_s_cmd, c);
  sweep_s_cmd->add_option("--p", c.p);
  sweep_s_cmd->add_option("--k", c.k, "eigenvalue index");
  sweep_s_cmd->add_option("--s", c.s_values, "lo:hi:count or comma list");
  sweep_s_cmd->add_option("--refinement", c.refinement, "mesh-refinement check at the last point");
  add_solver(sweep_s_cmd, c);

  auto* sweep_p_cmd = sub("sweep-p", "p -> infinity sweep with s_p = alpha - N/p");
  add_domain(sweep_p_cmd, c);
  sweep_p_cmd->add_option("--alpha", c.alpha);
  sweep_p_cmd->add_option("--p", c.p_values, "lo:hi:count or comma list");
  sweep_p_cmd->add_option("--refinement", c.refinement, "mesh-refinement check at the last point");
  add_solver(sweep_p_cmd, c);

  auto* homogenize = sub("homogenize", "oscillating kernel sweep against its average");
  add_domain(homogenize, c);
  homogenize->add_option("--s", c.s);
  homogenize->add_option("--p", c.p);
  add_kernel(homogenize, c);
  homogenize->add_option("--frequencies", c.frequencies, "lo:hi:count or comma list");
  homogenize->add_option("--refinement", c.refinement, "mesh-refinement check at the last frequency");
  add_solver(homogenize, c);

  auto* certificate = sub("certificate", "Holder-infinity eigenvalue R^-alpha");
  add_domain(certificate, c);
  certificate->add_option("--alpha", c.alpha);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("fraceig");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  CLI::App* active = app.get_subcommands().front();
  c.subcommand = active->get_name();
  if (active->get_option("--output")->count() == 0) {
    const auto it = default_output.find(c.subcommand);
    c.output = it == default_output.end() ? "-" : it->second;
  }
  const std::string config_text = "[" + c.subcommand + "]\n" + active->config_to_str(true, false);

  try {
    Report report;
    if (active == kconst) report = do_kconst(c);
    else if (active == energy) report = do_energy(c);
    else if (active == eig1) report = do_eig1(c);
    else if (active == spectrum) report = do_spectrum(c);
    else if (active == sweep_s_cmd) report = do_sweep_s(c);
    else if (active == sweep_p_cmd) report = do_sweep_p(c);
    else if (active == homogenize) report = do_homogenize(c);
    else report = do_certificate(c, err);
    out << report.summary << '\n';
    write_report(c, config_text, report, out);
    if (!report.converged) {
      err << "error: the solver did not converge\n";
      return kExitSolver;
    }
    return kExitOk;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace fraceig::cli
