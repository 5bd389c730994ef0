#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "datalimit/datalimit.hpp"
#include "validation.hpp"

namespace datalimit::cli {
namespace {

constexpr const char* kSchemas = R"(Output columns (CSV header / JSON keys):
  bound     formula,value_<unit>,trunc_err,series_terms
  finite    T,value_<unit>,ratio,formula         (--to-ratio: ratio,T)
  sweep     <axis names...>,value_<unit>,formula,trunc_err,status
  plan      speed: P,target_nats,v   power: v,target_nats,P   curve: P,v
  validate  check,samples,max_rel_dev,tolerance,status
trunc_err is in the output unit. status is ok, fallback (S <= 1, quadrature
used) or invalid (hypothesis violated, value nan).
Axis syntax: name:min:max:count[:log|lin], name in P v alpha z0 x0 S B T.
Exit codes: 0 ok, 1 I/O or failed validation, 2 invalid input,
3 numerical non-convergence, 4 infeasible plan.)";

struct RunConfig {
  LinkBudget budget;
  MobilityProfile profile;
  double horizon_s = 3600.0;
  std::string target;
  std::string unit = "nats";
  std::string format = "csv";
  int series_max_terms = 100;
  double qtol = 1e-10;
  long qmax_subdivisions = 1'000'000;
  std::string config_path;

  std::string formula = "auto";
  std::vector<std::string> axes;
  std::string solve;
  std::vector<double> times;
  std::optional<double> to_ratio;
};

struct Parsed {
  InfoUnit unit = InfoUnit::Nats;
  OutputFormat format = OutputFormat::Csv;
  EvalOptions eval;
};

Axis parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4 && parts.size() != 5)
    throw DomainError("axis '" + text + "' must be name:min:max:count[:log|lin]");
  Axis a;
  const auto param = parse_param(parts[0]);
  if (!param) throw DomainError("unknown axis parameter '" + parts[0] + "'");
  a.param = *param;
  try {
    a.min = std::stod(parts[1]);
    a.max = std::stod(parts[2]);
    a.count = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw DomainError("axis '" + text + "' has a non-numeric field");
  }
  if (parts.size() == 5) {
    if (parts[4] == "log")
      a.spacing = Spacing::Log;
    else if (parts[4] != "lin")
      throw DomainError("axis spacing must be log or lin, got '" + parts[4] + "'");
  }
  a.validate();
  return a;
}

std::vector<Axis> parse_axes(const std::vector<std::string>& texts) {
  std::vector<Axis> out;
  for (const auto& t : texts) out.push_back(parse_axis(t));
  return out;
}

// Values from --config fill in every flag not given on the command line.
void apply_config(const CLI::App& app, RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  std::ifstream in(cfg.config_path);
  if (!in) throw DomainError("cannot open config file '" + cfg.config_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw DomainError("config file must hold a JSON object");

  const std::map<std::string, double*> reals = {
      {"bandwidth", &cfg.budget.bandwidth_hz}, {"noise", &cfg.budget.noise_power_w},
      {"ref-distance", &cfg.budget.ref_distance_m}, {"gain", &cfg.budget.antenna_gain},
      {"power", &cfg.budget.tx_power_w}, {"alpha", &cfg.budget.path_loss_exp},
      {"x0", &cfg.profile.x0_m}, {"z0", &cfg.profile.z0_m},
      {"speed", &cfg.profile.speed_mps}, {"T", &cfg.horizon_s}, {"qtol", &cfg.qtol}};
  const std::map<std::string, std::string*> strings = {
      {"target", &cfg.target}, {"unit", &cfg.unit}, {"format", &cfg.format},
      {"formula", &cfg.formula}, {"solve", &cfg.solve}};

  for (const auto& [key, value] : j.items()) {
    const CLI::Option* flag = app.get_option_no_throw("--" + key);
    if (flag == nullptr) throw DomainError("unknown config key '" + key + "'");
    const bool on_command_line = flag->count() > 0;
    try {
      if (auto it = reals.find(key); it != reals.end()) {
        if (!on_command_line) *it->second = value.get<double>();
      } else if (auto st = strings.find(key); st != strings.end()) {
        if (!on_command_line) *st->second = value.get<std::string>();
      } else if (key == "series-max-terms") {
        if (!on_command_line) cfg.series_max_terms = value.get<int>();
      } else if (key == "qmax-subdivisions") {
        if (!on_command_line) cfg.qmax_subdivisions = value.get<long>();
      } else {
        throw DomainError("unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception&) {
      throw DomainError("config key '" + key + "' has the wrong type");
    }
  }
}

Parsed finish(const RunConfig& cfg) {
  Parsed p;
  const auto unit = parse_unit(cfg.unit);
  if (!unit) throw DomainError("--unit must be one of nats, bits, bytes, MB");
  p.unit = *unit;
  if (cfg.format == "csv")
    p.format = OutputFormat::Csv;
  else if (cfg.format == "json")
    p.format = OutputFormat::Json;
  else
    throw DomainError("--format must be csv or json");
  p.eval.series.max_terms = cfg.series_max_terms;
  p.eval.series.validate();
  p.eval.quadrature.rel_tol = cfg.qtol;
  p.eval.quadrature.max_subdivisions = cfg.qmax_subdivisions;
  p.eval.quadrature.validate();
  p.eval.horizon_s = cfg.horizon_s;
  cfg.budget.validate();
  cfg.profile.validate();
  return p;
}

std::string describe(const LinkBudget& b, const MobilityProfile& m) {
  std::ostringstream os;
  os << "S=" << format_real(b.transmit_snr()) << " alpha=" << format_real(b.path_loss_exp)
     << " v=" << format_real(m.speed_mps) << " x0=" << format_real(m.x0_m)
     << " z0=" << format_real(m.z0_m);
  return os.str();
}

int cmd_bound(const RunConfig& cfg, const Parsed& p, std::ostream& out, std::ostream& err) {
  const auto formula = parse_formula(cfg.formula);
  if (!formula) throw DomainError("unknown --formula '" + cfg.formula + "'");
  const BoundResult r = evaluate(*formula, cfg.budget, cfg.profile, p.eval);
  err << "provenance: formula=" << formula_name(r.formula_tag) << ' '
      << describe(cfg.budget, cfg.profile) << " series_terms=" << r.series_terms_used
      << " trunc_err_nats=" << format_real(r.truncation_error_nats) << '\n';
  Table t;
  t.header = {"formula", value_column(p.unit), "trunc_err", "series_terms"};
  t.rows.push_back({std::string(formula_name(r.formula_tag)), r.amount.in(p.unit),
                    r.truncation_error_nats / nats_per(p.unit),
                    static_cast<double>(r.series_terms_used)});
  emit(t, p.format, out);
  return kOk;
}

int cmd_finite(const RunConfig& cfg, const Parsed& p, std::ostream& out, std::ostream& err) {
  Table t;
  if (cfg.to_ratio) {
    const double horizon = time_to_ratio(cfg.budget, cfg.profile, *cfg.to_ratio, p.eval);
    t.header = {"ratio", "T"};
    t.rows.push_back({*cfg.to_ratio, horizon});
  } else {
    const std::vector<double> times = cfg.times.empty() ? std::vector<double>{cfg.horizon_s} : cfg.times;
    const auto curve = finite_time_curve(cfg.budget, cfg.profile, times, p.eval);
    const std::string tag = cfg.budget.path_loss_exp == 2.0
                                ? std::string(formula_name(FormulaTag::ClosedFiniteAlpha2))
                                : std::string(formula_name(FormulaTag::Quadrature));
    t.header = {"T", value_column(p.unit), "ratio", "formula"};
    for (const auto& pt : curve)
      t.rows.push_back({pt.horizon_s, pt.data_nats / nats_per(p.unit), pt.ratio, tag});
  }
  err << "provenance: " << describe(cfg.budget, cfg.profile) << '\n';
  emit(t, p.format, out);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, const Parsed& p, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.axes = cfg.axes.empty() ? std::vector<Axis>{{Param::Speed, 1.0, 100.0, 50, Spacing::Log},
                                                   {Param::Power, 1e-3, 100.0, 50, Spacing::Log}}
                               : parse_axes(cfg.axes);
  const auto formula = parse_formula(cfg.formula);
  if (!formula) throw DomainError("unknown --formula '" + cfg.formula + "'");
  spec.formula = *formula;
  spec.unit = p.unit;
  spec.budget = cfg.budget;
  spec.profile = cfg.profile;
  spec.eval = p.eval;
  const auto rows = sweep(spec);
  std::size_t flagged = 0;
  for (const auto& r : rows) flagged += r.status != RowStatus::Ok;
  err << "sweep: " << rows.size() << " rows, " << flagged << " flagged\n";
  emit(sweep_table(spec, rows), p.format, out);
  return kOk;
}

int cmd_plan(const RunConfig& cfg, const Parsed& p, const CLI::App& app, std::ostream& out,
             std::ostream& err) {
  if (cfg.target.empty()) throw DomainError("plan needs --target <value><unit>");
  const InfoQuantity target = parse_quantity(cfg.target);
  std::string mode = cfg.solve;
  if (mode.empty()) {
    const bool power_given = app.count("--power") > 0;
    const bool speed_given = app.count("--speed") > 0;
    if (power_given && !speed_given)
      mode = "speed";
    else if (speed_given && !power_given)
      mode = "power";
    else
      throw DomainError("plan: give exactly one of --power / --speed, or choose --solve speed|power|curve");
  }

  Table t;
  if (mode == "speed") {
    const PlanQuery q{target, cfg.budget.tx_power_w, std::nullopt, cfg.budget};
    const double v = solve_speed(q, p.eval.series);
    t.header = {"P", "target_nats", "v"};
    t.rows.push_back({cfg.budget.tx_power_w, target.value_nats(), v});
  } else if (mode == "power") {
    const PlanQuery q{target, std::nullopt, cfg.profile.speed_mps, cfg.budget};
    const double power = solve_power(q, p.eval.series, p.eval.quadrature);
    t.header = {"v", "target_nats", "P"};
    t.rows.push_back({cfg.profile.speed_mps, target.value_nats(), power});
  } else if (mode == "curve") {
    Axis axis{Param::Power, 1e-3, 100.0, 50, Spacing::Log};
    if (!cfg.axes.empty()) {
      axis = parse_axis(cfg.axes.front());
      if (axis.param != Param::Power) throw DomainError("plan curve axis must be P");
    }
    t.header = {"P", "v"};
    for (const auto& [power, v] : admissible_curve(cfg.budget, target, axis.points(), p.eval.series))
      t.rows.push_back({power, v});
  } else {
    throw DomainError("--solve must be speed, power or curve");
  }
  err << "plan: solved for " << mode << " with alpha=" << format_real(cfg.budget.path_loss_exp)
      << '\n';
  emit(t, p.format, out);
  return kOk;
}

int cmd_validate(const RunConfig& cfg, const Parsed& p, std::ostream& out, std::ostream& err) {
  const auto checks = run_validation(cfg.budget, p.eval);
  Table t;
  t.header = {"check", "samples", "max_rel_dev", "tolerance", "status"};
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed();
    t.rows.push_back({c.name, static_cast<double>(c.samples), c.max_rel_dev, c.tolerance,
                      std::string(c.passed() ? "pass" : "fail")});
  }
  err << "validate: " << (all ? "all checks passed" : "some checks FAILED") << '\n';
  emit(t, p.format, out);
  return all ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Upper bounds on total transmittable data for a receding terminal", "datalimit"};
  app.footer(kSchemas);
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--bandwidth", cfg.budget.bandwidth_hz, "Bandwidth B in Hz")->capture_default_str();
  app.add_option("--noise", cfg.budget.noise_power_w, "Noise power sigma^2 in W")->capture_default_str();
  app.add_option("--ref-distance", cfg.budget.ref_distance_m, "Reference distance d0 in m")->capture_default_str();
  app.add_option("--gain", cfg.budget.antenna_gain, "Antenna gain G (unitless)")->capture_default_str();
  app.add_option("--power", cfg.budget.tx_power_w, "Transmit power P in W")->capture_default_str();
  app.add_option("--alpha", cfg.budget.path_loss_exp, "Path loss exponent (>= 2)")->capture_default_str();
  app.add_option("--x0", cfg.profile.x0_m, "Initial lateral position in m")->capture_default_str();
  app.add_option("--z0", cfg.profile.z0_m, "Constant offset in m")->capture_default_str();
  app.add_option("--speed", cfg.profile.speed_mps, "Speed v in m/s")->capture_default_str();
  app.add_option("--T", cfg.horizon_s, "Finite horizon in s")->capture_default_str();
  app.add_option("--target", cfg.target, "Data target M, e.g. 3.5MB or 1e7nats");
  app.add_option("--unit", cfg.unit, "Output unit: nats|bits|bytes|MB")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format: csv|json")->capture_default_str();
  app.add_option("--series-max-terms", cfg.series_max_terms, "Series term cap")->capture_default_str();
  app.add_option("--qtol", cfg.qtol, "Quadrature relative tolerance")->capture_default_str();
  app.add_option("--qmax-subdivisions", cfg.qmax_subdivisions, "Quadrature subdivision cap")
      ->capture_default_str();
  app.add_option("--config", cfg.config_path, "JSON file keyed by long flag names");
  app.add_option("--formula", cfg.formula,
                 "auto|thm1|thm1-lower|error|thm2|cor2|finite|quadrature|quadrature-finite")
      ->capture_default_str();
  app.add_option("--axis", cfg.axes, "Sweep axis name:min:max:count[:log|lin] (repeatable)");
  app.add_option("--solve", cfg.solve, "plan: speed|power|curve");

  auto* bound = app.add_subcommand("bound", "One bound value with provenance");
  auto* finite = app.add_subcommand("finite", "Finite-horizon data and ratio to the infinite-horizon bound");
  finite->add_option("--times", cfg.times, "Several horizons in s (ascending)");
  finite->add_option("--to-ratio", cfg.to_ratio, "Report the horizon needed to reach this ratio");
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep (default: v 1..100 x P 1e-3..100, log, 50x50)");
  auto* plan = app.add_subcommand("plan", "Solve for speed or power that delivers --target");
  auto* validate = app.add_subcommand("validate", "Closed forms vs quadrature oracle");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    apply_config(app, cfg);
    const Parsed p = finish(cfg);
    if (bound->parsed()) return cmd_bound(cfg, p, out, err);
    if (finite->parsed()) return cmd_finite(cfg, p, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, p, out, err);
    if (plan->parsed()) return cmd_plan(cfg, p, app, out, err);
    if (validate->parsed()) return cmd_validate(cfg, p, out, err);
    err << "error: no subcommand\n";
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace datalimit::cli
