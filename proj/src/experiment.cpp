#include "udn/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "udn/error.hpp"
#include "udn/regimes.hpp"
#include "udn/tail_analysis.hpp"

namespace udn {

namespace {

constexpr std::size_t kMinTrials = 1000;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string g10(double v) { return fmt("%.10g", v); }
std::string g17(double v) { return fmt("%.17g", v); }

std::string join(const std::vector<double>& values, std::string (*f)(double)) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += f(values[i]);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::ValidationError, field + ": " + message);
}

double parse_double(std::string_view text, std::size_t line) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    parse_error(line, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view text, std::size_t line) {
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    parse_error(line, "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text, std::size_t line) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma - start), line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1));
  }
  return out;
}

bool needs_network(ExperimentKind kind) { return kind != ExperimentKind::RegimeReport; }

std::string describe_pathloss(const PathlossModel& pl) {
  std::ostringstream out;
  out << "A0=" << pl.scales()[0] << " beta=";
  for (int k = 0; k < pl.slopes(); ++k) out << (k ? "," : "") << pl.exponents()[k];
  out << " r_breaks_m=";
  for (int k = 1; k < pl.slopes(); ++k) out << (k > 1 ? "," : "") << pl.breakpoints()[k];
  out << " r_inf_m=" << pl.r_inf() << " d=" << pl.dimension()
      << " bounded=" << (pl.is_bounded() ? "yes" : "no")
      << " physical=" << (pl.is_physical() ? "yes" : "no");
  return out.str();
}

std::string header(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "experiment: " << spec.name << " (" << to_string(spec.kind) << ")\n";
  if (needs_network(spec.kind)) {
    out << "pathloss: " << describe_pathloss(spec.pathloss()) << '\n';
    out << "channel: " << spec.ch.build().describe() << '\n';
    if (spec.ch2) out << "channel 2: " << spec.ch2->build().describe() << '\n';
    out << "noise: " << spec.w_linear << "  trials: " << spec.trials << "  seed: " << spec.seed
        << '\n';
  }
  return out.str();
}

TailClass link_class_of(const ExperimentSpec& spec, const ChannelSpec& ch) {
  return classify_link_tail(spec.pathloss(), ch.build());
}

std::size_t closest_to_zero_db(const SweepResult& result, std::size_t y_count) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < y_count; ++j) {
    if (std::abs(result.points[j].y_db) < std::abs(result.points[best].y_db)) best = j;
  }
  return best;
}

ExperimentOutput run_sweep(const ExperimentSpec& spec, const SimOptions& options) {
  Simulator sim(options);
  const auto base = spec.network(0.0, spec.ch);
  const SweepResult result =
      sweep(base, spec.lambda_grid_per_km2, spec.y_grid_db, spec.trials, spec.seed, sim);
  ExperimentOutput out;
  out.csv = sweep_csv(result);

  const TailClass link = link_class_of(spec, spec.ch);
  const Regime regime = classify_regime(link);
  const std::size_t ny = spec.y_grid_db.size();
  const std::size_t j = closest_to_zero_db(result, ny);
  std::ostringstream s;
  s << header(spec);
  s << "link tail: " << link.describe() << '\n';
  s << "regime: " << to_string(regime.kind) << " (analytic) / "
    << empirical_regime(result, ny) << " (empirical)\n";
  s << "y_db = " << result.points[j].y_db << '\n';
  s << "lambda_per_km2  coverage  coverage_ci95  rate_nats  rate_ci95\n";
  for (std::size_t i = 0; i < spec.lambda_grid_per_km2.size(); ++i) {
    const auto& p = result.at(i, j, ny);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14g  %-8.4f  %-13.4f  %-9.4f  %.4f\n", p.lambda_per_km2,
                  p.coverage.value, p.coverage.ci95, p.rate.rate.value, p.rate.rate.ci95);
    s << buf;
  }
  out.summary = s.str();
  return out;
}

ExperimentOutput run_regime_report(const ExperimentSpec& spec) {
  ExperimentOutput out;
  const auto rows = table_one_rows();
  std::ostringstream csv;
  write_regime_csv(csv, rows);
  out.csv = csv.str();
  std::ostringstream s;
  s << header(spec);
  write_regime_table(s, rows);
  if (!spec.pl_beta.empty()) {
    const auto link = link_class_of(spec, spec.ch);
    const auto regime = classify_from_model(spec.pl_beta.front(), spec.d, spec.ch.build().tail_class());
    s << "configured: " << spec.ch.build().describe() << " beta0=" << spec.pl_beta.front()
      << " link tail " << link.describe() << " regime " << to_string(regime.kind)
      << " flags " << boundary_flags(regime) << '\n';
  }
  out.summary = s.str();
  return out;
}

ExperimentOutput run_tail_diagnostic(const ExperimentSpec& spec) {
  ExperimentOutput out;
  const LinkTail link(spec.pathloss(), spec.ch.build());
  const std::vector<double> grid = spec.t_grid.empty() ? log_grid(1e-2, 1e8, 51) : spec.t_grid;
  std::ostringstream csv;
  write_tail_diagnostic_csv(csv, link, grid);
  out.csv = csv.str();

  std::ostringstream s;
  s << header(spec);
  s << "link tail: " << link.classification().describe() << '\n';
  const auto samples = sample_log_link_powers(link.pathloss(), link.channel(), 1000000, spec.seed);
  const auto diag = tail_index_diagnostic_log(samples);
  const char* labels[] = {"0.5%", "1%", "2%"};
  for (std::size_t i = 0; i < 3; ++i) {
    s << "hill top " << labels[i] << ": " << diag.estimates[i].alpha << " +- "
      << diag.estimates[i].std_error << '\n';
  }
  s << "hill relative spread: " << diag.relative_spread << "  drift z: " << diag.drift_z
    << "  regularly varying: " << (diag.regularly_varying ? "yes" : "no") << '\n';
  out.summary = s.str();
  return out;
}

ExperimentOutput run_laplace_check(const ExperimentSpec& spec, const SimOptions& options) {
  ExperimentOutput out;
  const TailClass link = link_class_of(spec, spec.ch);
  Simulator sim(options);
  std::ostringstream csv;
  std::ostringstream s;
  s << header(spec) << "link tail: " << link.describe() << '\n';
  csv << "lambda_per_km2,s,link_rho,laplace_analytic,laplace_mc,laplace_mc_ci95\n";
  for (const double lambda : spec.lambda_grid_per_km2) {
    const auto config = spec.network(lambda, spec.ch);
    const auto outcomes = sim.run(config, spec.trials, spec.seed);
    for (const double sv : spec.s_grid) {
      const double analytic = laplace_Z(link, sv);
      const Estimate mc = laplace_from(outcomes, config.noise, sv);
      csv << g10(lambda) << ',' << g10(sv) << ',' << g10(link.effective_index()) << ','
          << g10(analytic) << ',' << g10(mc.value) << ',' << g10(mc.ci95) << '\n';
      const double z = mc.ci95 > 0.0 ? std::abs(mc.value - analytic) / (mc.ci95 / 1.96) : 0.0;
      s << "lambda " << lambda << " s " << sv << ": analytic " << analytic << " mc " << mc.value
        << " z " << z << (z <= 3.0 ? " agree" : " differ") << '\n';
    }
  }
  out.csv = csv.str();
  out.summary = s.str();
  return out;
}

ExperimentOutput run_ordering_check(const ExperimentSpec& spec, const SimOptions& options) {
  ExperimentOutput out;
  const ChannelSpec& c2 = *spec.ch2;
  const TailClass l1 = link_class_of(spec, spec.ch);
  const TailClass l2 = link_class_of(spec, c2);
  const Ordering predicted = predict_ordering(l1, l2);
  Simulator sim1(options), sim2(options);
  std::ostringstream csv;
  std::ostringstream s;
  s << header(spec) << "link tails: " << l1.describe() << " / " << l2.describe() << '\n'
    << "predicted: " << to_string(predicted) << '\n';
  csv << "lambda_per_km2,network,link_rho,rate_nats,rate_ci95\n";
  for (const double lambda : spec.lambda_grid_per_km2) {
    const auto r1 = rate_from(sim1.run(spec.network(lambda, spec.ch), spec.trials, spec.seed), spec.w_linear);
    const auto r2 = rate_from(sim2.run(spec.network(lambda, c2), spec.trials, spec.seed), spec.w_linear);
    csv << g10(lambda) << ",1," << g10(l1.effective_index()) << ',' << g10(r1.rate.value) << ','
        << g10(r1.rate.ci95) << '\n';
    csv << g10(lambda) << ",2," << g10(l2.effective_index()) << ',' << g10(r2.rate.value) << ','
        << g10(r2.rate.ci95) << '\n';
    std::string verdict = "Unresolved";
    if (r1.rate.value - r1.rate.ci95 > r2.rate.value + r2.rate.ci95) verdict = to_string(Ordering::FirstDominates);
    if (r2.rate.value - r2.rate.ci95 > r1.rate.value + r1.rate.ci95) verdict = to_string(Ordering::SecondDominates);
    s << "lambda " << lambda << ": rate " << r1.rate.value << " vs " << r2.rate.value
      << " empirical " << verdict << '\n';
  }
  out.csv = csv.str();
  out.summary = s.str();
  return out;
}

ExperimentSpec figure_spec(std::string name, ExperimentKind kind, std::vector<double> beta,
                           ChannelSpec ch) {
  ExperimentSpec spec;
  spec.name = name;
  spec.kind = kind;
  spec.pl_beta = std::move(beta);
  spec.pl_r_breaks_m = {10.0};
  spec.ch = std::move(ch);
  spec.out = name + ".csv";
  return spec;
}

ChannelSpec channel_spec(std::string kind, double alpha = 1.0) {
  ChannelSpec c;
  c.kind = std::move(kind);
  c.alpha = alpha;
  return c;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Ccdf: return "ccdf";
    case ExperimentKind::CoverageSweep: return "coverage_sweep";
    case ExperimentKind::RateSweep: return "rate_sweep";
    case ExperimentKind::RegimeReport: return "regime_report";
    case ExperimentKind::TailDiagnostic: return "tail_diagnostic";
    case ExperimentKind::LaplaceCheck: return "laplace_check";
    case ExperimentKind::OrderingCheck: return "ordering_check";
  }
  return "";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (const auto k : {ExperimentKind::Ccdf, ExperimentKind::CoverageSweep,
                       ExperimentKind::RateSweep, ExperimentKind::RegimeReport,
                       ExperimentKind::TailDiagnostic, ExperimentKind::LaplaceCheck,
                       ExperimentKind::OrderingCheck}) {
    if (to_string(k) == text) return k;
  }
  invalid("kind", "unknown experiment kind '" + std::string(text) + "'");
}

ChannelPowerDist ChannelSpec::build() const {
  try {
    if (kind == "deterministic") return ChannelPowerDist::deterministic(sigma);
    if (kind == "rayleigh") return ChannelPowerDist::rayleigh(sigma);
    if (kind == "lognormal") return ChannelPowerDist::lognormal(sigma_db);
    if (kind == "composite") return ChannelPowerDist::composite(sigma_db);
    if (kind == "pareto") return ChannelPowerDist::pareto(alpha, sigma);
    if (kind == "gamma") return ChannelPowerDist::gamma(alpha, sigma);
    if (kind == "slowly_varying") return ChannelPowerDist::slowly_varying();
  } catch (const Error& e) {
    invalid("ch", e.what());
  }
  invalid("ch.kind", "unknown channel kind '" + kind + "'");
}

PathlossModel ExperimentSpec::pathloss() const {
  if (pl_beta.empty()) invalid("pl.beta", "at least one exponent is required");
  if (pl_r_breaks_m.size() + 1 != pl_beta.size()) {
    invalid("pl.r_breaks_m", "expected " + std::to_string(pl_beta.size() - 1) + " breakpoints");
  }
  try {
    return PathlossModel::build_multislope(pl_a0, pl_beta, pl_r_breaks_m, r_inf_m, d);
  } catch (const Error& e) {
    invalid("pl", e.what());
  }
}

NetworkConfig ExperimentSpec::network(double lambda_per_km2, const ChannelSpec& channel) const {
  return NetworkConfig::from_km2(lambda_per_km2, w_linear, pathloss(), channel.build());
}

void validate(const ExperimentSpec& spec) {
  if (spec.d < 1 || spec.d > 3) invalid("d", "dimension must be 1, 2 or 3");
  if (!(spec.r_inf_m > 0.0) || !std::isfinite(spec.r_inf_m)) invalid("r_inf_m", "must be positive");
  if (!(spec.w_linear >= 0.0) || !std::isfinite(spec.w_linear)) {
    invalid("w_linear", "must be finite and nonnegative");
  }
  if (spec.lambda_grid_per_km2.empty()) invalid("lambda_grid_per_km2", "grid is empty");
  for (const double v : spec.lambda_grid_per_km2) {
    if (!(v >= 0.0) || !std::isfinite(v)) invalid("lambda_grid_per_km2", "densities must be >= 0");
  }
  if (spec.y_grid_db.empty()) invalid("y_grid_db", "grid is empty");
  for (const double v : spec.y_grid_db) {
    if (!std::isfinite(v)) invalid("y_grid_db", "thresholds must be finite");
  }
  if (spec.trials < kMinTrials) invalid("trials", "at least 1000 trials are required");
  if (spec.s_grid.empty()) invalid("s_grid", "grid is empty");
  for (const double v : spec.s_grid) {
    if (!(v >= 0.0)) invalid("s_grid", "s must be nonnegative");
  }
  for (const double v : spec.t_grid) {
    if (!(v > 0.0)) invalid("t_grid", "t must be positive");
  }
  if (spec.out.empty()) invalid("out", "output path is empty");
  spec.ch.build();
  if (spec.ch2) spec.ch2->build();
  if (needs_network(spec.kind) || !spec.pl_beta.empty()) spec.pathloss();
  if (spec.kind == ExperimentKind::OrderingCheck && !spec.ch2) {
    invalid("ch2.kind", "an ordering check needs a second channel");
  }
}

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec;
  spec.pl_beta.clear();
  std::map<std::string, std::size_t> seen;
  bool has_kind = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_error(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) parse_error(line_no, "empty key");
    if (!seen.emplace(key, line_no).second) parse_error(line_no, "duplicate key '" + key + "'");

    auto channel_key = [&](ChannelSpec& ch, std::string_view field) {
      if (field == "kind") ch.kind = std::string(value);
      else if (field == "alpha") ch.alpha = parse_double(value, line_no);
      else if (field == "sigma") ch.sigma = parse_double(value, line_no);
      else if (field == "sigma_db") ch.sigma_db = parse_double(value, line_no);
      else parse_error(line_no, "unknown key '" + key + "'");
    };

    if (key == "kind") {
      spec.kind = parse_experiment_kind(value);
      has_kind = true;
    } else if (key == "name") {
      spec.name = std::string(value);
    } else if (key == "d") {
      spec.d = parse_integer<int>(value, line_no);
    } else if (key == "r_inf_m") {
      spec.r_inf_m = parse_double(value, line_no);
    } else if (key == "w_linear") {
      spec.w_linear = parse_double(value, line_no);
    } else if (key == "lambda_grid_per_km2") {
      spec.lambda_grid_per_km2 = parse_list(value, line_no);
    } else if (key == "y_grid_db") {
      spec.y_grid_db = parse_list(value, line_no);
    } else if (key == "trials") {
      spec.trials = parse_integer<std::size_t>(value, line_no);
    } else if (key == "seed") {
      spec.seed = parse_integer<std::uint64_t>(value, line_no);
    } else if (key == "pl.a0") {
      spec.pl_a0 = parse_double(value, line_no);
    } else if (key == "pl.beta") {
      spec.pl_beta = parse_list(value, line_no);
    } else if (key == "pl.r_breaks_m") {
      spec.pl_r_breaks_m = parse_list(value, line_no);
    } else if (key.starts_with("ch.")) {
      channel_key(spec.ch, std::string_view(key).substr(3));
    } else if (key.starts_with("ch2.")) {
      if (!spec.ch2) spec.ch2 = ChannelSpec{};
      channel_key(*spec.ch2, std::string_view(key).substr(4));
    } else if (key == "s_grid") {
      spec.s_grid = parse_list(value, line_no);
    } else if (key == "t_grid") {
      spec.t_grid = parse_list(value, line_no);
    } else if (key == "out") {
      spec.out = std::string(value);
    } else {
      parse_error(line_no, "unknown key '" + key + "'");
    }
  }
  if (!has_kind) invalid("kind", "missing");
  validate(spec);
  return spec;
}

std::string render_config(const ExperimentSpec& spec) {
  std::ostringstream out;
  auto channel = [&](const char* prefix, const ChannelSpec& ch) {
    out << prefix << "kind = " << ch.kind << '\n';
    out << prefix << "alpha = " << g17(ch.alpha) << '\n';
    out << prefix << "sigma = " << g17(ch.sigma) << '\n';
    out << prefix << "sigma_db = " << g17(ch.sigma_db) << '\n';
  };
  out << "kind = " << to_string(spec.kind) << '\n';
  out << "name = " << spec.name << '\n';
  out << "d = " << spec.d << '\n';
  out << "r_inf_m = " << g17(spec.r_inf_m) << '\n';
  out << "w_linear = " << g17(spec.w_linear) << '\n';
  out << "lambda_grid_per_km2 = " << join(spec.lambda_grid_per_km2, g17) << '\n';
  out << "y_grid_db = " << join(spec.y_grid_db, g17) << '\n';
  out << "trials = " << spec.trials << '\n';
  out << "seed = " << spec.seed << '\n';
  out << "pl.a0 = " << g17(spec.pl_a0) << '\n';
  out << "pl.beta = " << join(spec.pl_beta, g17) << '\n';
  out << "pl.r_breaks_m = " << join(spec.pl_r_breaks_m, g17) << '\n';
  channel("ch.", spec.ch);
  if (spec.ch2) channel("ch2.", *spec.ch2);
  out << "s_grid = " << join(spec.s_grid, g17) << '\n';
  if (!spec.t_grid.empty()) out << "t_grid = " << join(spec.t_grid, g17) << '\n';
  out << "out = " << spec.out << '\n';
  return out.str();
}

std::vector<std::string> suite_names() {
  return {"fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig7a", "fig7b", "table1"};
}

std::vector<ExperimentSpec> suite(std::string_view name) {
  using K = ExperimentKind;
  std::vector<double> ccdf_grid;
  for (int y = -10; y <= 30; y += 2) ccdf_grid.push_back(y);
  const std::vector<double> dense{1e3, 1e4, 1e5};

  auto ccdf = [&](std::string n, std::vector<double> beta, ChannelSpec ch) {
    auto s = figure_spec(std::move(n), K::Ccdf, std::move(beta), std::move(ch));
    s.lambda_grid_per_km2 = dense;
    s.y_grid_db = ccdf_grid;
    return s;
  };
  auto sweep_spec = [&](std::string n, std::vector<double> beta, ChannelSpec ch,
                        std::vector<double> y) {
    auto s = figure_spec(std::move(n), K::CoverageSweep, std::move(beta), std::move(ch));
    s.y_grid_db = std::move(y);
    return s;
  };

  if (name == "fig3a") return {ccdf("fig3a", {3, 4}, channel_spec("composite"))};
  if (name == "fig3b") return {ccdf("fig3b", {0, 4}, channel_spec("pareto", 0.5))};
  if (name == "fig4") {
    return {sweep_spec("fig4", {0, 4}, channel_spec("slowly_varying"), {0, 10, 20, 30, 40})};
  }
  if (name == "fig5") {
    return {sweep_spec("fig5_composite", {3, 4}, channel_spec("composite"), {-5, 0, 5, 10}),
            sweep_spec("fig5_rayleigh", {3, 4}, channel_spec("rayleigh"), {-5, 0, 5, 10}),
            sweep_spec("fig5_pareto4", {3, 4}, channel_spec("pareto", 4.0), {-5, 0, 5, 10})};
  }
  if (name == "fig6") {
    auto ordering = figure_spec("fig6_ordering", K::OrderingCheck, {0, 4}, channel_spec("pareto", 0.4));
    ordering.ch2 = channel_spec("pareto", 0.6);
    ordering.lambda_grid_per_km2 = dense;
    return {sweep_spec("fig6_pareto04", {0, 4}, channel_spec("pareto", 0.4), {-5, 0, 5, 10}),
            sweep_spec("fig6_pareto06", {0, 4}, channel_spec("pareto", 0.6), {-5, 0, 5, 10}),
            ordering};
  }
  if (name == "fig7a") return {sweep_spec("fig7a", {0, 4}, channel_spec("composite"), {-5, 0, 5})};
  if (name == "fig7b") return {sweep_spec("fig7b", {1, 4}, channel_spec("composite"), {-5, 0, 5})};
  if (name == "fig7") {
    auto a = suite("fig7a");
    auto b = suite("fig7b");
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  if (name == "table1") {
    ExperimentSpec s;
    s.name = "table1";
    s.kind = K::RegimeReport;
    s.out = "table1.csv";
    return {s};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "lambda_per_km2,y_db,coverage,coverage_ci95,rate_nats,rate_ci95,cov_density_per_km2,"
      "ase_nats_per_km2,trials,seed\n";
  for (const auto& p : result.points) {
    out += g10(p.lambda_per_km2) + ',' + g10(p.y_db) + ',' + g10(p.coverage.value) + ',' +
           g10(p.coverage.ci95) + ',' + g10(p.rate.rate.value) + ',' + g10(p.rate.rate.ci95) +
           ',' + g10(p.coverage_density) + ',' + g10(p.ase) + ',' +
           std::to_string(result.trials) + ',' + std::to_string(result.seed) + '\n';
  }
  return out;
}

std::string empirical_regime(const SweepResult& result, std::size_t y_count) {
  if (y_count == 0 || result.points.empty()) return "Inconclusive";
  const std::size_t nl = result.points.size() / y_count;
  const std::size_t j = closest_to_zero_db(result, y_count);
  std::vector<const SweepPoint*> p;
  for (std::size_t i = 0; i < nl; ++i) p.push_back(&result.at(i, j, y_count));
  if (nl < 2) return "Inconclusive";

  auto cov = [&](std::size_t i) { return p[i]->coverage; };
  auto rate = [&](std::size_t i) { return p[i]->rate.rate; };
  auto above = [](const Estimate& a, const Estimate& b) { return a.value - a.ci95 > b.value + b.ci95; };
  const std::size_t last = nl - 1;

  bool growing = cov(last).value >= 0.95 && nl >= 3;
  for (std::size_t i = std::max<std::size_t>(1, nl - 2); i < nl && growing; ++i) {
    growing = above(rate(i), rate(i - 1));
  }
  if (growing) return "Growth";

  std::size_t peak = 0;
  for (std::size_t i = 1; i < nl; ++i) {
    if (cov(i).value > cov(peak).value) peak = i;
  }
  std::size_t rate_peak = 0;
  for (std::size_t i = 1; i < nl; ++i) {
    if (rate(i).value > rate(rate_peak).value) rate_peak = i;
  }
  if (peak < last && above(cov(peak), cov(last)) && cov(last).value < 0.5 * cov(peak).value &&
      rate_peak < last && above(rate(rate_peak), rate(last))) {
    return "Deficit";
  }

  const auto& a = cov(last - 1);
  const auto& b = cov(last);
  const auto& ra = rate(last - 1);
  const auto& rb = rate(last);
  if (std::abs(a.value - b.value) < 2.0 * std::max(a.ci95, b.ci95) &&
      std::abs(ra.value - rb.value) < 2.0 * std::max(ra.ci95, rb.ci95)) {
    return "Saturation";
  }
  return "Inconclusive";
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, const SimOptions& options) {
  validate(spec);
  switch (spec.kind) {
    case ExperimentKind::Ccdf:
    case ExperimentKind::CoverageSweep:
    case ExperimentKind::RateSweep: return run_sweep(spec, options);
    case ExperimentKind::RegimeReport: return run_regime_report(spec);
    case ExperimentKind::TailDiagnostic: return run_tail_diagnostic(spec);
    case ExperimentKind::LaplaceCheck: return run_laplace_check(spec, options);
    case ExperimentKind::OrderingCheck: return run_ordering_check(spec, options);
  }
  return {};
}

std::vector<std::string> write_outputs(const ExperimentSpec& spec, const ExperimentOutput& output) {
  namespace fs = std::filesystem;
  const fs::path csv_path(spec.out);
  fs::path summary_path = csv_path;
  summary_path.replace_extension(".txt");
  std::error_code ec;
  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path(), ec);
  auto write = [](const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  };
  write(csv_path, output.csv);
  write(summary_path, output.summary);
  return {csv_path.string(), summary_path.string()};
}

}  // namespace udn
