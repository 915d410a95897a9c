#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "circleprev/error.hpp"
#include "circleprev/evaluation.hpp"
#include "circleprev/io.hpp"
#include "circleprev/lifting.hpp"
#include "circleprev/measure_lab.hpp"
#include "circleprev/probe.hpp"
#include "circleprev/qks.hpp"
#include "circleprev/reflection_group.hpp"
#include "circleprev/rotation.hpp"

namespace cp = circleprev;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

struct Config {
  std::vector<std::string> inputs;
  std::string output;
  std::string format;  // empty: the subcommand's default
  int grid = cp::kDefaultGrid;
  int nmax = 1;
  std::vector<double> gammas{0.01, 0.05, 0.1};
  std::vector<int> branches;
  std::vector<double> lambda_window;
  int terms = 100;
  double beta = 0.5;
  long long qmax = 10000;
  int iters = 10000;
  unsigned long long seed = 0;
};

// Thrown when flags are individually valid but inconsistent.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    cp::io::write_text_file(cfg.output, text);
  }
}

bool wants_json(const Config& cfg) { return cfg.format == "json"; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const std::string& single_input(const Config& cfg) {
  if (cfg.inputs.size() != 1) throw UsageError("exactly one --input is required");
  return cfg.inputs.front();
}

cp::Probe load_probe(const Config& cfg) {
  return cp::io::probe_from_json(cp::io::read_json_file(single_input(cfg)), cfg.grid);
}

cp::Interval window_for(const Config& cfg, const cp::Probe& p) {
  if (cfg.lambda_window.empty()) return cp::default_window(p);
  return {cfg.lambda_window[0], cfg.lambda_window[1]};
}

json point_json(const cp::EvaluationPoint& pt) {
  return {{"x", pt.x},
          {"n", pt.n},
          {"branch", pt.branch},
          {"lambda", pt.lambda},
          {"d_x", pt.d_x},
          {"d_lambda", pt.d_lambda},
          {"delta_prime", cp::io::number(pt.delta_prime)},
          {"residual", pt.residual}};
}

int run_validate(const Config& cfg) {
  const cp::Lifting f = cp::io::lifting_from_json(cp::io::read_json_file(single_input(cfg)));
  const cp::DiffeoCertificate cert = cp::validate_diffeo(f, cfg.grid);
  emit(cfg, dump({{"is_diffeo", cert.is_diffeo},
                  {"min_derivative", cert.min_derivative},
                  {"method", std::string(cp::method_name(cert.method))},
                  {"has_fixed_point", cp::has_fixed_point(f, cfg.grid)},
                  {"regularity", f.regularity()}}));
  return cert.is_diffeo ? kExitOk : kExitInvalid;
}

int run_group(const Config& cfg) {
  if (cfg.inputs.empty()) throw UsageError("group needs at least one --input");
  cp::GroupElement acc;
  for (const std::string& path : cfg.inputs) {
    acc = cp::compose(acc, cp::io::group_element_from_json(cp::io::read_json_file(path)));
  }
  emit(cfg, dump(cp::io::to_json(acc)));
  return kExitOk;
}

int run_probe_domain(const Config& cfg) {
  const cp::Probe p = load_probe(cfg);
  emit(cfg, dump({{"kind", std::string(cp::kind_name(p.kind()))},
                  {"a", cp::io::number(p.domain().lo)},
                  {"b", cp::io::number(p.domain().hi)},
                  {"sigma", p.sigma()},
                  {"f_has_fixed_point", p.f_has_fixed_point()}}));
  return kExitOk;
}

int run_foliate(const Config& cfg) {
  const cp::Probe p = load_probe(cfg);
  const cp::Interval w = window_for(cfg, p);
  if (!w.bounded()) throw UsageError("foliate needs a bounded --lambda-window");
  const int count = cfg.iters;
  std::vector<double> lambdas;
  for (int i = 0; i < count; ++i) {
    lambdas.push_back(count == 1 ? w.lo : w.lo + (w.hi - w.lo) * i / (count - 1));
  }
  const auto leaves = cp::foliation_samples(p, lambdas, cfg.grid);
  if (wants_json(cfg)) {
    json out = json::array();
    for (const auto& leaf : leaves) {
      json xs = json::array();
      json ys = json::array();
      for (const auto& [x, y] : leaf.samples) {
        xs.push_back(x);
        ys.push_back(y);
      }
      out.push_back({{"lambda", leaf.lambda}, {"in_h0", leaf.in_h0}, {"x", xs}, {"y", ys}});
    }
    emit(cfg, dump(out));
    return kExitOk;
  }
  std::ostringstream os;
  os << "lambda,x,value,in_h0\n";
  for (const auto& leaf : leaves) {
    for (const auto& [x, y] : leaf.samples) {
      os << cp::io::format_double(leaf.lambda) << ',' << cp::io::format_double(x) << ','
         << cp::io::format_double(y) << ',' << (leaf.in_h0 ? 1 : 0) << '\n';
    }
  }
  emit(cfg, os.str());
  return kExitOk;
}

std::vector<int> branches_for(const Config& cfg, const cp::Probe& p, int n,
                              const cp::Interval& w) {
  return cfg.branches.empty() ? cp::default_branches(p, n, w) : cfg.branches;
}

int run_eval_map(const Config& cfg) {
  const cp::Probe p = load_probe(cfg);
  const cp::Interval w = window_for(cfg, p);
  const int n = cfg.nmax;
  std::vector<cp::EvaluationPoint> rows;
  for (const int branch : branches_for(cfg, p, n, w)) {
    for (const auto& s : cp::solve_on_grid(p, n, branch, cfg.grid, w)) {
      if (s) rows.push_back(*s);
    }
  }
  if (wants_json(cfg)) {
    json out = json::array();
    for (const auto& pt : rows) out.push_back(point_json(pt));
    emit(cfg, dump(out));
    return kExitOk;
  }
  std::ostringstream os;
  os << "x,lambda,d_x,delta_prime,branch\n";
  for (const auto& pt : rows) {
    os << cp::io::format_double(pt.x) << ',' << cp::io::format_double(pt.lambda) << ','
       << cp::io::format_double(pt.d_x) << ',' << cp::io::format_double(pt.delta_prime)
       << ',' << pt.branch << '\n';
  }
  emit(cfg, os.str());
  return kExitOk;
}

int run_critical(const Config& cfg) {
  const cp::Probe p = load_probe(cfg);
  const cp::Interval w = window_for(cfg, p);
  const int n = cfg.nmax;
  json points = json::array();
  bool degenerate = false;
  for (const int branch : branches_for(cfg, p, n, w)) {
    const cp::CriticalScan scan = cp::critical_points(p, n, branch, cfg.grid, w);
    degenerate = degenerate || scan.degenerate_probe;
    for (const auto& pt : scan.points) points.push_back(point_json(pt));
  }
  emit(cfg, dump({{"n", n}, {"degenerate_probe", degenerate}, {"points", points}}));
  return kExitOk;
}

int run_rotation(const Config& cfg) {
  const cp::Lifting f = cp::io::lifting_from_json(cp::io::read_json_file(single_input(cfg)));
  const cp::RotationAnalysis a = cp::analyze_rotation(f, cfg.iters, cfg.beta, cfg.qmax);
  const cp::DiophantineReport& r = a.star_beta;
  json convergents = json::array();
  for (const auto& c : r.convergents) convergents.push_back({c.p, c.q});
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"p", v.p}, {"q", v.q}, {"gap", v.gap}});
  }
  json star{{"beta", r.beta},
            {"q_max", r.q_max},
            {"q_threshold", r.q_threshold},
            {"rational", r.rational},
            {"satisfied_up_to_qmax", r.satisfied_up_to_qmax},
            {"violations", violations},
            {"possibly_rational", nullptr},
            {"warning", nullptr}};
  if (r.possibly_rational) {
    star["possibly_rational"] = {r.possibly_rational->p, r.possibly_rational->q};
  }
  if (r.warning) star["warning"] = *r.warning;
  json out{{"rho", a.estimate.value},
           {"error", a.estimate.error_bound},
           {"iterations", a.estimate.iterations},
           {"convergents", convergents},
           {"star_beta", star},
           {"periodic_orbit", nullptr}};
  if (a.periodic_orbit) {
    out["periodic_orbit"] = {{"x", a.periodic_orbit->x},
                             {"residual", a.periodic_orbit->residual}};
  }
  if (r.warning) std::cerr << "warning: " << *r.warning << '\n';
  emit(cfg, dump(out));
  return kExitOk;
}

int run_qks(const Config& cfg) {
  const cp::Probe p = load_probe(cfg);
  const cp::QksReport rep = cp::qks_report(p, cfg.nmax, cfg.gammas, cfg.grid, cfg.branches);

  std::ostringstream csv;
  csv << "n,gamma,measured,u,b_n,c_n,bound,ratio,holds\n";
  json rows = json::array();
  for (const cp::QksRow& row : rep.rows) {
    const cp::MeasureEstimate& e = row.estimate;
    csv << row.n << ',' << cp::io::format_double(row.gamma) << ','
        << cp::io::format_double(e.measured) << ',' << cp::io::format_double(e.u) << ','
        << cp::io::format_double(e.b_n) << ',' << cp::io::format_double(e.c_n) << ','
        << cp::io::format_double(e.bound) << ',' << cp::io::format_double(row.ratio) << ','
        << (row.holds ? "true" : "false") << '\n';
    json intervals = json::array();
    for (const auto& [lo, hi] : e.intervals) intervals.push_back({lo, hi});
    rows.push_back({{"n", row.n},
                    {"gamma", row.gamma},
                    {"entries", row.entries},
                    {"measured", e.measured},
                    {"intervals", intervals},
                    {"u", cp::io::number(e.u)},
                    {"b_n", cp::io::number(e.b_n)},
                    {"c_n", e.c_n},
                    {"bound", e.bound},
                    {"ratio", cp::io::number(row.ratio)},
                    {"holds", row.holds},
                    {"inverse_b_partial_sum", row.inverse_b_partial_sum},
                    {"u_above_one", row.u_above_one}});
  }
  const json detail{{"sigma", rep.sigma},
                    {"a", cp::io::number(rep.domain.lo)},
                    {"b", cp::io::number(rep.domain.hi)},
                    {"x_grid", rep.x_grid},
                    {"slack", rep.slack},
                    {"rows", rows}};

  if (wants_json(cfg)) {
    emit(cfg, dump(detail));
    return kExitOk;
  }
  emit(cfg, csv.str());
  if (!cfg.output.empty()) {
    const std::filesystem::path out(cfg.output);
    cp::io::write_text_file((out.parent_path() / out.stem()).string() + ".json", dump(detail));
  }
  return kExitOk;
}

int run_ccc(const Config& cfg) {
  const cp::CCCCoefficients c = cp::ccc_coefficients(cfg.terms);
  const double sum = c.coefficient_sum();
  emit(cfg, dump({{"n_terms", c.n_terms},
                  {"sin1", std::sin(1.0)},
                  {"p_last", c.partial_products.back()},
                  {"sin_limit_gap", c.sin_limit_gap()},
                  {"coefficient_sum", sum},
                  {"renormalization_gap", std::abs(sum - 1.0)},
                  {"lambdas", c.lambdas},
                  {"partial_products", c.partial_products},
                  {"coefficients", c.coefficients}}));
  return kExitOk;
}

int run_measure(const Config& cfg) {
  const cp::BoxUnion bu =
      cp::io::box_union_from_json(cp::io::read_json_file(single_input(cfg)));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  double lambda = lam(rng);
  while (lambda == 1.0) lambda = lam(rng);
  std::vector<double> h(bu.dim());
  for (double& v : h) v = shift(rng);
  const cp::InvarianceReport r = cp::invariance_check(bu, lambda, h);
  emit(cfg, dump({{"dim", bu.dim()},
                  {"boxes", bu.boxes().size()},
                  {"measure", r.before},
                  {"invariance",
                   {{"seed", cfg.seed},
                    {"lambda", lambda},
                    {"h", h},
                    {"before", r.before},
                    {"after", r.after},
                    {"ratio", cp::io::number(r.ratio)},
                    {"expected", r.expected},
                    {"holds", r.holds}}}}));
  return r.holds ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probes, evaluation maps and measure estimates for circle diffeomorphism lifts"};
  app.require_subcommand(1);
  Config cfg;

  auto add_input = [&](CLI::App* sub, bool many) {
    auto* opt = sub->add_option("--input", cfg.inputs, "input JSON file")->required();
    if (!many) opt->expected(1);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output", cfg.output, "output path (default: stdout)");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid, "grid resolution")->check(CLI::Range(2, 1 << 24));
  };
  auto add_window = [&](CLI::App* sub) {
    sub->add_option("--lambda-window", cfg.lambda_window, "parameter window a,b")
        ->delimiter(',')
        ->expected(2);
  };
  auto add_branches = [&](CLI::App* sub) {
    sub->add_option("--branches", cfg.branches, "lift branches m, comma separated")
        ->delimiter(',');
  };
  auto add_period = [&](CLI::App* sub) {
    sub->add_option("--nmax", cfg.nmax, "period n")->check(CLI::Range(1, 1000));
  };

  auto* validate = app.add_subcommand("validate", "certify a lifting as a diffeomorphism");
  add_input(validate, false);
  add_output(validate);
  add_grid(validate);

  auto* group = app.add_subcommand("group", "compose group elements, first input outermost");
  add_input(group, true);
  add_output(group);

  auto* domain = app.add_subcommand("probe-domain", "maximal parameter interval and sigma");
  add_input(domain, false);
  add_output(domain);
  add_grid(domain);

  auto* foliate = app.add_subcommand("foliate", "sample alpha_lambda on a parameter grid");
  add_input(foliate, false);
  add_output(foliate);
  add_grid(foliate);
  add_window(foliate);
  add_format(foliate);
  foliate->add_option("--iters", cfg.iters, "number of lambda values")
      ->check(CLI::Range(1, 1 << 20));

  auto* evalmap = app.add_subcommand("eval-map", "solve lambda = Delta_n(x) on an x grid");
  add_input(evalmap, false);
  add_output(evalmap);
  add_grid(evalmap);
  add_window(evalmap);
  add_branches(evalmap);
  add_format(evalmap);
  add_period(evalmap);

  auto* critical = app.add_subcommand("critical", "degenerate periodic points of a probe");
  add_input(critical, false);
  add_output(critical);
  add_grid(critical);
  add_window(critical);
  add_branches(critical);
  add_period(critical);

  auto* rotation = app.add_subcommand("rotation", "rotation number and (*)_beta report");
  add_input(rotation, false);
  add_output(rotation);
  rotation->add_option("--iters", cfg.iters, "iterations N")->check(CLI::Range(1, 1 << 30));
  rotation->add_option("--beta", cfg.beta, "Diophantine exponent beta")
      ->check(CLI::PositiveNumber);
  rotation->add_option("--qmax", cfg.qmax, "largest convergent denominator")
      ->check(CLI::Range(1LL, 1LL << 40));

  auto* qks = app.add_subcommand("qks", "measure of near-degenerate parameters vs bound");
  qks->add_option("--input,--probe", cfg.inputs, "probe JSON file")->required()->expected(1);
  add_format(qks);
  add_output(qks);
  add_grid(qks);
  add_branches(qks);
  qks->add_option("--nmax", cfg.nmax, "largest period")->check(CLI::Range(1, 1000));
  qks->add_option("--gammas", cfg.gammas, "hyperbolicity tolerances")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  auto* ccc = app.add_subcommand("ccc", "countable convex convolution coefficients");
  add_output(ccc);
  ccc->add_option("--terms", cfg.terms, "number of terms")->check(CLI::Range(1, 1 << 24));

  auto* measure = app.add_subcommand("measure", "projection-product measure of a box union");
  add_input(measure, false);
  add_output(measure);
  measure->add_option("--seed", cfg.seed, "seed for the random reflection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (!cfg.lambda_window.empty() && !(cfg.lambda_window[0] < cfg.lambda_window[1])) {
      throw UsageError("--lambda-window needs a < b");
    }
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "validate") return run_validate(cfg);
    if (name == "group") return run_group(cfg);
    if (name == "probe-domain") return run_probe_domain(cfg);
    if (name == "foliate") return run_foliate(cfg);
    if (name == "eval-map") return run_eval_map(cfg);
    if (name == "critical") return run_critical(cfg);
    if (name == "rotation") return run_rotation(cfg);
    if (name == "qks") return run_qks(cfg);
    if (name == "ccc") return run_ccc(cfg);
    if (name == "measure") return run_measure(cfg);
  } catch (const cp::io::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const cp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == cp::Errc::kSchema ? kExitIo : kExitInvalid;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitInvalid;
}
