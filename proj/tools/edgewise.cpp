#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "edgewise/equilibrium.hpp"
#include "edgewise/errors.hpp"
#include "edgewise/fredholm.hpp"
#include "edgewise/hankel.hpp"
#include "edgewise/painleve.hpp"
#include "edgewise/rmt.hpp"

using namespace edgewise;
using ojson = nlohmann::ordered_json;

namespace {

using Cell = std::variant<double, long long, std::string>;

/** \brief Rows of named cells plus run metadata. */
struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  ojson meta = ojson::object();
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

ojson json_cell(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_double(*d);
  }
  if (auto i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

void emit(const Table& t, bool json, std::ostream& out) {
  if (json) {
    ojson doc = ojson::object();
    doc["command"] = t.command;
    for (auto it = t.meta.begin(); it != t.meta.end(); ++it) doc[it.key()] = it.value();
    ojson rows = ojson::array();
    for (const auto& r : t.rows) {
      ojson o = ojson::object();
      for (std::size_t k = 0; k < t.columns.size(); ++k) o[t.columns[k]] = json_cell(r[k]);
      rows.push_back(o);
    }
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << csv_cell(r[k]);
    out << '\n';
  }
}

/** \brief "a:b:step" or a single value. */
std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::domain, "cannot parse range '" + spec + "'");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0])
    fail(ErrorKind::domain, "range must be a:b:step with a <= b and step > 0");
  const long long count = static_cast<long long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  if (count > 1000000) fail(ErrorKind::domain, "range has too many points");
  std::vector<double> v;
  for (long long i = 0; i < count; ++i) v.push_back(parts[0] + i * parts[2]);
  return v;
}

/** \brief Reads a JSON object into CLI11 config items; nested objects address subcommands. */
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    ojson doc;
    try {
      doc = ojson::parse(in);
    } catch (const std::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    walk(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const ojson& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  }
  static void walk(const ojson& node, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& items) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (it.value().is_object()) {
        auto p = parents;
        p.push_back(it.key());
        walk(it.value(), p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it.value().is_array())
        for (const auto& e : it.value()) item.inputs.push_back(scalar(e));
      else
        item.inputs.push_back(scalar(it.value()));
      items.push_back(item);
    }
  }
};

Tw2Route parse_route(const std::string& r) {
  if (r == "sigma") return Tw2Route::sigma;
  if (r == "q") return Tw2Route::q;
  if (r == "pii") return Tw2Route::pii;
  if (r == "fredholm") return Tw2Route::fredholm;
  fail(ErrorKind::domain, "unknown route '" + r + "'");
}

Table run_tw2(const std::string& range, const std::string& route) {
  Table t{"tw2", {"s", "F2", "route", "est_error"}, {}};
  const std::vector<std::string> all{"sigma", "q", "pii", "fredholm"};
  for (double s : parse_range(range)) {
    if (!(s >= -8.0 && s <= 8.0)) fail(ErrorKind::domain, "tw2 grid must lie within [-8, 8]");
    if (route == "all") {
      std::vector<double> v;
      for (const auto& r : all) v.push_back(tw2(s, parse_route(r)));
      double spread = 0.0;
      for (double a : v)
        for (double b : v) spread = std::max(spread, std::fabs(a - b));
      for (std::size_t k = 0; k < all.size(); ++k) t.rows.push_back({s, v[k], all[k], spread});
    } else {
      const Tw2Route r = parse_route(route);
      const double v = tw2(s, r);
      // The error estimate is the distance to an independent route.
      const double ref = tw2(s, r == Tw2Route::fredholm ? Tw2Route::pii : Tw2Route::fredholm);
      t.rows.push_back({s, v, route, std::fabs(v - ref)});
    }
  }
  return t;
}

Table run_painleve(double alpha, double gamma_re, double gamma_im, const std::string& range, double rtol) {
  if (gamma_im == 0.0 && gamma_re < 0.0) fail(ErrorKind::domain, "gamma must not lie in (-inf, 0)");
  const std::vector<double> grid = parse_range(range);
  double lo = grid.front();
  for (double x : grid) lo = std::min(lo, x);
  const PainleveParams p{alpha, cplx(gamma_re, gamma_im)};
  LaxOptions opts;
  opts.rtol = rtol;
  const LaxTrajectory traj = solve_lax(p, std::min(lo, default_t0(alpha) - 1.0) - 0.25, opts);
  Table t{"painleve", {"t", "re_sigma", "im_sigma", "re_q", "im_q", "constraint1", "constraint2"}, {}};
  for (double x : grid) {
    if (x > traj.t0()) fail(ErrorKind::domain, "abscissa above the launch point " + format_double(traj.t0()));
    const LaxState st = traj.state(x);
    t.rows.push_back({x, st.sigma().real(), st.sigma().imag(), st.q.real(), st.q.imag(), std::abs(st.constraint1()),
                      std::abs(st.constraint2(alpha))});
  }
  t.meta["alpha"] = alpha;
  t.meta["gamma_re"] = gamma_re;
  t.meta["gamma_im"] = gamma_im;
  return t;
}

Potential read_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::domain, "cannot open potential file '" + path + "'");
  ojson doc;
  try {
    doc = ojson::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::domain, std::string("potential file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("coeffs") || !doc["coeffs"].is_array())
    fail(ErrorKind::domain, "potential file needs an array 'coeffs' of ascending coefficients");
  Potential v;
  for (const auto& c : doc["coeffs"]) {
    if (!c.is_number()) fail(ErrorKind::domain, "potential coefficients must be numbers");
    v.coeffs.push_back(c.get<double>());
  }
  v.validate();
  return v;
}

Table run_equilibrium(const std::string& path, double s) {
  const Potential v = read_potential(path);
  const EquilibriumData eq = compute_equilibrium(v);
  const EdgeConstants ec = edge_constants(eq, s);
  const double r2 = std::sqrt(2.0);
  Table t{"equilibrium",
          {"degree", "h_sqrt2", "h_minus_sqrt2", "h_zero", "ell", "tau", "normalization_defect", "rho1", "rho2",
           "i1", "i2", "w_edge", "wp_edge", "factor", "theta_left", "s"},
          {}};
  t.rows.push_back({static_cast<long long>(v.degree()), eq.h(r2), eq.h(-r2), eq.h(0.0), eq.ell, eq.tau,
                    eq.normalization_defect, ec.rho1, ec.rho2, ec.i1, ec.i2, ec.w_edge, ec.wp_edge, ec.factor,
                    ec.theta_left, s});
  const std::vector<double> hm = eq.h_monomial();
  for (std::size_t k = 0; k < hm.size(); ++k) {
    t.columns.push_back("h_coeff_" + std::to_string(k));
    t.rows.back().push_back(hm[k]);
  }
  return t;
}

struct HankelArgs {
  int n = 6;
  double alpha = 0.0, beta = 1.0, lambda = 1.0, s = 0.0, c = 1.0, h = 1e-4, x = 0.0, y = 0.0;
  std::string n_list = "64,128,256";
  bool lambda_set = false;
};

FHWeight weight_of(const HankelArgs& a) {
  FHWeight w{a.lambda_set ? a.lambda : lambda_edge(a.s, a.n), a.alpha, a.beta, a.n};
  w.validate();
  return w;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stoi(item));
    } catch (const std::exception&) {
      fail(ErrorKind::domain, "cannot parse integer list '" + s + "'");
    }
  }
  return v;
}

/** \brief Returns the table and whether the command's own pass criterion holds. */
std::pair<Table, bool> run_hankel(const std::string& sub, const HankelArgs& a) {
  Table t;
  t.command = "hankel " + sub;
  bool ok = true;
  if (sub == "log-ratio") {
    const FHWeight w = weight_of(a);
    const GramResult r = log_ratio(w);
    t.columns = {"n", "alpha", "beta", "lambda", "log_det", "matrix_condition"};
    t.rows.push_back({static_cast<long long>(r.n), w.alpha, w.beta, w.lambda, r.log_det, r.matrix_condition});
  } else if (sub == "op-data") {
    const FHWeight w = weight_of(a);
    const OPData d = op_data(w);
    t.columns = {"n", "lambda", "log_kappa_n", "log_kappa_n1", "delta_nn", "gamma_nn"};
    t.rows.push_back({static_cast<long long>(w.n), w.lambda, d.log_kappa_n, d.log_kappa_n1, d.delta_nn, d.gamma_nn});
  } else if (sub == "check-a9") {
    const FHWeight w = weight_of(a);
    const A9Check c = check_a9(w, a.h);
    const double tol = 1e-5 * (1.0 + std::fabs(c.exact));
    ok = c.residual <= tol;
    t.columns = {"n", "lambda", "fd", "exact", "residual", "tolerance"};
    t.rows.push_back({static_cast<long long>(w.n), w.lambda, c.fd, c.exact, c.residual, tol});
  } else if (sub == "fredholm") {
    const FHWeight w = weight_of(a);
    t.columns = {"n", "lambda", "c", "F_n"};
    t.rows.push_back({static_cast<long long>(w.n), w.lambda, a.c, finite_fredholm(w, a.c)});
  } else if (sub == "kernel") {
    const FHWeight w = weight_of(a);
    t.columns = {"n", "x", "y", "K_n"};
    t.rows.push_back({static_cast<long long>(w.n), a.x, a.y, kernel_Kn(w, a.x, a.y)});
  } else if (sub == "trend") {
    t.columns = {"n", "log_ratio", "predicted", "remainder"};
    for (const TrendRow& r : check_e21_trend(a.alpha, a.beta, a.s, parse_int_list(a.n_list)))
      t.rows.push_back({static_cast<long long>(r.n), r.log_ratio, r.predicted, r.remainder});
  } else if (sub == "root-slope" || sub == "gap-slope") {
    const SlopeCheck c = sub == "root-slope" ? check_root_slope(a.alpha, a.beta, a.s, a.n) : check_e25(a.alpha, a.s, a.n);
    t.columns = {"n", "alpha", "s", "fd", "reference", "residual"};
    t.rows.push_back({static_cast<long long>(a.n), a.alpha, a.s, c.fd, c.reference, c.residual});
  } else if (sub == "jump-ratio") {
    const RatioCheck c = check_jump_ratio(a.beta, a.s, a.n);
    t.columns = {"n", "beta", "s", "log_det", "reference", "defect"};
    t.rows.push_back({static_cast<long long>(a.n), a.beta, a.s, c.log_det, c.reference, c.defect});
  } else {
    fail(ErrorKind::domain, "unknown hankel command '" + sub + "'");
  }
  return {t, ok};
}

void write_rows(const std::string& path, const std::vector<std::string>& cols,
                const std::vector<std::vector<Cell>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::domain, "cannot write '" + path + "'");
  Table t{"", cols, rows};
  emit(t, false, out);
}

Table run_mc_edge(int n, int samples, std::uint64_t seed, int threads, const std::string& samples_out) {
  const EdgeSampleSet set = sample_edge(n, samples, seed, threads);
  const double ks = ks_vs_tw2(set);
  const SampleStats st = sample_stats(set.s_values);
  if (!samples_out.empty()) {
    std::vector<std::vector<Cell>> rows;
    const double scale = std::pow(n * std::pow(2.0, 0.75), 2.0 / 3.0);
    for (int i = 0; i < samples; ++i)
      rows.push_back({static_cast<long long>(seed), static_cast<long long>(i), static_cast<long long>(n),
                      std::sqrt(2.0) + set.s_values[i] / scale, set.s_values[i]});
    write_rows(samples_out, {"seed", "stream", "n", "lmax_or_logdet", "s"}, rows);
  }
  Table t{"mc edge", {"seed", "n", "count", "ks", "mean", "var", "tw2_mean"}, {}};
  t.rows.push_back({static_cast<long long>(seed), static_cast<long long>(n), static_cast<long long>(samples), ks,
                    st.mean, st.var, tw2_mean()});
  t.meta["seed"] = seed;
  t.meta["threads"] = threads;
  return t;
}

Table run_mc_clt(int n, double s, int samples, std::uint64_t seed, int threads, const std::string& samples_out) {
  const CltResult r = clt_logdet(n, s, samples, seed, threads);
  if (!samples_out.empty()) {
    std::vector<std::vector<Cell>> rows;
    for (int i = 0; i < samples; ++i)
      rows.push_back({static_cast<long long>(seed), static_cast<long long>(i), static_cast<long long>(n), r.logdet[i], s});
    write_rows(samples_out, {"seed", "stream", "n", "lmax_or_logdet", "s"}, rows);
  }
  Table t{"mc clt", {"seed", "n", "s", "count", "mean", "var", "skew"}, {}};
  t.rows.push_back({static_cast<long long>(seed), static_cast<long long>(n), s, static_cast<long long>(samples),
                    r.stats.mean, r.stats.var, r.stats.skew});
  t.meta["seed"] = seed;
  t.meta["threads"] = threads;
  return t;
}

Table run_fredholm(const std::string& sub, const std::string& range, int m, double theta) {
  Table t{"fredholm " + sub, {"s", "logdet", "m"}, {}};
  if (m < 4 || m > 1000) fail(ErrorKind::domain, "m must lie in [4, 1000]");
  for (double s : parse_range(range)) {
    double v;
    if (sub == "airy")
      v = nystrom_logdet(airy_kernel_spec(), s, m).log_det;
    else if (sub == "a01")
      v = nystrom_logdet(kernel_a01(s), 0.0, m).log_det;
    else if (sub == "deformed")
      v = deformed_airy_logdet(s, theta, m);
    else
      fail(ErrorKind::domain, "unknown fredholm kernel '" + sub + "'");
    t.rows.push_back({s, v, static_cast<long long>(m)});
  }
  if (sub == "deformed") t.meta["theta"] = theta;
  return t;
}

int resolve_threads(std::optional<int> flag) {
  if (flag) return std::max(1, *flag);
  if (const char* env = std::getenv("EDGEWISE_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      fail(ErrorKind::domain, "EDGEWISE_THREADS must be an integer");
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge statistics of Fisher-Hartwig deformed unitary ensembles"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON configuration file");

  bool as_json = false, as_csv = false;
  std::string output;
  std::optional<int> threads;
  auto fmt = app.add_option_group("format");
  fmt->add_flag("--json", as_json, "JSON output");
  fmt->add_flag("--csv", as_csv, "CSV output (default)");
  fmt->require_option(0, 1);
  app.add_option("-o,--output", output, "output file (default stdout)");
  app.add_option("--threads", threads, "worker threads for sample loops (fallback EDGEWISE_THREADS)")
      ->check(CLI::PositiveNumber);

  // tw2
  std::string tw_s = "0", tw_route = "sigma";
  auto* c_tw2 = app.add_subcommand("tw2", "Tracy-Widom distribution F_2");
  c_tw2->add_option("--s", tw_s, "abscissa or range a:b:step within [-8, 8]");
  c_tw2->add_option("--route", tw_route, "sigma, q, pii, fredholm or all")
      ->check(CLI::IsMember({"sigma", "q", "pii", "fredholm", "all"}));

  // painleve
  double pv_alpha = 0.0, pv_gamma = 1.0, pv_gamma_im = 0.0, pv_rtol = 1e-12;
  std::string pv_t = "-5:3:0.5";
  auto* c_pv = app.add_subcommand("painleve", "sigma-form and Painleve-XXXIV solutions from the Lax system");
  c_pv->add_option("--alpha", pv_alpha, "alpha > -1");
  c_pv->add_option("--gamma", pv_gamma, "real part of gamma");
  c_pv->add_option("--gamma-im", pv_gamma_im, "imaginary part of gamma");
  c_pv->add_option("--t", pv_t, "abscissa or range a:b:step");
  c_pv->add_option("--rtol", pv_rtol, "relative tolerance");

  // equilibrium
  std::string eq_file;
  double eq_s = 0.0;
  auto* c_eq = app.add_subcommand("equilibrium", "equilibrium measure and edge functionals of a potential");
  c_eq->add_option("--potential", eq_file, "JSON file with ascending 'coeffs'")->required();
  c_eq->add_option("--s", eq_s, "edge variable for rho and Theta terms");

  // hankel
  HankelArgs ha;
  std::string hk_sub;
  auto* c_hk = app.add_subcommand("hankel", "finite-n Hankel determinants and identities");
  c_hk->add_option("command", hk_sub, "log-ratio, op-data, check-a9, fredholm, kernel, trend, root-slope, jump-ratio, gap-slope")
      ->required();
  c_hk->add_option("--n", ha.n, "matrix size");
  c_hk->add_option("--alpha", ha.alpha, "root exponent");
  c_hk->add_option("--beta", ha.beta, "jump factor > 0");
  auto* lam_opt = c_hk->add_option("--lambda", ha.lambda, "singular point (default: edge placement from --s)");
  c_hk->add_option("--s", ha.s, "edge variable");
  c_hk->add_option("--c", ha.c, "cut point of the gap indicator");
  c_hk->add_option("--fd-step", ha.h, "finite-difference step in lambda");
  c_hk->add_option("--x", ha.x, "first kernel argument");
  c_hk->add_option("--y", ha.y, "second kernel argument");
  c_hk->add_option("--n-list", ha.n_list, "comma-separated sizes for the trend table");

  // mc
  std::string mc_sub, mc_samples_out;
  int mc_n = 400, mc_samples = 4000;
  double mc_s = 0.0;
  std::uint64_t mc_seed = 0;
  auto* c_mc = app.add_subcommand("mc", "Monte Carlo edge law and log-determinant CLT");
  c_mc->add_option("command", mc_sub, "edge or clt")->required()->check(CLI::IsMember({"edge", "clt"}));
  c_mc->add_option("--n", mc_n, "matrix size");
  c_mc->add_option("--samples", mc_samples, "sample count");
  c_mc->add_option("--s", mc_s, "edge variable (clt)");
  c_mc->add_option("--seed", mc_seed, "64-bit seed")->required();
  c_mc->add_option("--samples-out", mc_samples_out, "CSV file with one row per sample");

  // fredholm
  std::string fr_sub, fr_s = "0";
  int fr_m = 80;
  double fr_theta = 1.0;
  auto* c_fr = app.add_subcommand("fredholm", "Fredholm determinants by Nystrom quadrature");
  c_fr->add_option("kernel", fr_sub, "airy, a01 or deformed")->required();
  c_fr->add_option("--s", fr_s, "abscissa or range a:b:step");
  c_fr->add_option("--m", fr_m, "quadrature points");
  c_fr->add_option("--theta", fr_theta, "deformation factor (deformed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  ha.lambda_set = lam_opt->count() > 0;

  try {
    const int nthreads = resolve_threads(threads);
    Table table;
    bool ok = true;
    if (c_tw2->parsed()) {
      table = run_tw2(tw_s, tw_route);
    } else if (c_pv->parsed()) {
      table = run_painleve(pv_alpha, pv_gamma, pv_gamma_im, pv_t, pv_rtol);
    } else if (c_eq->parsed()) {
      table = run_equilibrium(eq_file, eq_s);
    } else if (c_hk->parsed()) {
      std::tie(table, ok) = run_hankel(hk_sub, ha);
    } else if (c_mc->parsed()) {
      table = mc_sub == "edge" ? run_mc_edge(mc_n, mc_samples, mc_seed, nthreads, mc_samples_out)
                               : run_mc_clt(mc_n, mc_s, mc_samples, mc_seed, nthreads, mc_samples_out);
    } else if (c_fr->parsed()) {
      table = run_fredholm(fr_sub, fr_s, fr_m, fr_theta);
    }
    if (output.empty()) {
      emit(table, as_json, std::cout);
    } else {
      std::ofstream out(output, std::ios::binary);
      if (!out) fail(ErrorKind::domain, "cannot write '" + output + "'");
      emit(table, as_json, out);
    }
    if (!ok) {
      std::cerr << "edgewise: check failed its tolerance\n";
      return 4;
    }
    return 0;
  } catch (const PoleError& e) {
    std::cerr << "edgewise: pole at t = " << format_double(e.abscissa()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const Error& e) {
    std::cerr << "edgewise: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "edgewise: " << e.what() << '\n';
    return 4;
  }
}
