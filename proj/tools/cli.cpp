#include "cli.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coboson/exchange.hpp"
#include "coboson/fock.hpp"
#include "coboson/norm_table.hpp"
#include "coboson/profile.hpp"
#include "coboson/statistics.hpp"

namespace coboson::cli {

namespace {

using OrderedJson = nlohmann::ordered_json;
using Cell = std::optional<std::string>;

struct ProfileSpec {
  enum class Kind { uniform, hydrogenic, file };
  Kind kind = Kind::uniform;
  int modes = 0;
  double a_over_L = 0.0;
  std::string path;
};

ProfileSpec parse_profile_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("profile spec \"" + text +
                      "\" must be uniform:M, hydrogenic:A_OVER_L or file:PATH");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  ProfileSpec spec;
  if (kind == "uniform") {
    spec.kind = ProfileSpec::Kind::uniform;
    try {
      spec.modes = std::stoi(arg);
    } catch (const std::exception&) {
      throw ConfigError("uniform profile needs an integer mode count");
    }
    if (spec.modes < 1) throw ConfigError("uniform profile needs M >= 1");
  } else if (kind == "hydrogenic") {
    spec.kind = ProfileSpec::Kind::hydrogenic;
    try {
      spec.a_over_L = std::stod(arg);
    } catch (const std::exception&) {
      throw ConfigError("hydrogenic profile needs a numeric a_B/L ratio");
    }
    if (!(spec.a_over_L > 0)) throw ConfigError("hydrogenic profile needs a_B/L > 0");
  } else if (kind == "file") {
    spec.kind = ProfileSpec::Kind::file;
    if (arg.empty()) throw ConfigError("file profile needs a path");
    spec.path = arg;
  } else {
    throw ConfigError("unknown profile kind \"" + kind + "\"");
  }
  return spec;
}

Mode resolve_mode(const RunConfig& config, const ProfileSpec& spec) {
  if (spec.kind == ProfileSpec::Kind::hydrogenic) {
    if (config.mode && *config.mode == Mode::rational)
      throw ConfigError(
          "rational mode is not available for hydrogenic profiles (the "
          "exchange weights involve pi); use --mode float");
    return Mode::floating;
  }
  return config.mode.value_or(Mode::rational);
}

std::string mode_name(Mode mode) {
  return mode == Mode::rational ? "rational" : "float";
}

std::string range_name(const NRange& r) {
  std::string s = std::to_string(r.lo) + ".." + std::to_string(r.hi);
  if (r.stride != 1) s += ":" + std::to_string(r.stride);
  return s;
}

OrderedJson base_meta(const std::string& command, const RunConfig& config,
                      Mode mode, const ProfileSpec* spec) {
  OrderedJson meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["command"] = command;
  if (!config.profile_spec.empty()) meta["profile"] = config.profile_spec;
  meta["mode"] = mode_name(mode);
  if (spec && spec->kind == ProfileSpec::Kind::hydrogenic) {
    // The momentum-space pair density behind the closed form; the quartic
    // denominator power is what normalizes lambda_1 to one.
    meta["hydrogenic_momentum_profile"] =
        "64*pi*(a_B/L)^3 / (1 + (k*a_B)^2)^4";
    meta["hydrogenic_momentum_exponent"] = 4;
  }
  if (config.lambda_max) meta["lambda_max"] = *config.lambda_max;
  return meta;
}

struct Table {
  OrderedJson meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool bare_rows = false;  // JSON: emit only the row array (report schema)
};

std::string meta_value_text(const OrderedJson& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

void write_csv(const Table& table, std::ostream& out) {
  for (const auto& [key, value] : table.meta.items())
    out << "# " << key << ": " << meta_value_text(value) << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      if (row[c]) out << *row[c];
    }
    out << "\n";
  }
}

void write_json(const Table& table, std::ostream& out) {
  OrderedJson rows = OrderedJson::array();
  for (const auto& row : table.rows) {
    OrderedJson obj;
    for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
      if (row[c]) {
        obj[table.columns[c]] = *row[c];
      } else {
        obj[table.columns[c]] = nullptr;
      }
    }
    rows.push_back(std::move(obj));
  }
  if (table.bare_rows) {
    out << rows.dump(2) << "\n";
    return;
  }
  OrderedJson doc;
  doc["meta"] = table.meta;
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
}

void write_table(const Table& table, Format format, std::ostream& out) {
  if (format == Format::csv) {
    write_csv(table, out);
  } else {
    write_json(table, out);
  }
}

// --- stats sweep -----------------------------------------------------------

const std::vector<std::string> kStatsColumns = {
    "N",          "eta",          "mean_n",       "mean_n2",
    "variance",   "Q",            "g2",           "Q_approx",
    "g2_approx_a", "g2_approx_b", "g2_large_sample",
    "g2_elementary", "Q_elementary", "status"};

enum class RowStatus { ok, blocked, precision_loss };

template <class S>
struct RowEval {
  int n = 0;
  RowStatus status = RowStatus::ok;
  MomentReport<S> report;
};

template <class S>
RowEval<S> evaluate_row(const NormTable<S>& table, int n,
                        std::optional<double> eta) {
  RowEval<S> row;
  row.n = n;
  try {
    row.report = moment_report(table, n, eta);
  } catch (const BlockedStateError&) {
    row.status = RowStatus::blocked;
  } catch (const PrecisionDomainError&) {
    row.status = RowStatus::precision_loss;
  }
  return row;
}

// Rows are independent functions of the shared immutable table, so a sweep
// fans out across threads and is reassembled in order.
template <class S>
std::vector<RowEval<S>> evaluate_rows(const NormTable<S>& table,
                                      const std::vector<int>& ns,
                                      double eta_per_n) {
  std::vector<RowEval<S>> rows(ns.size());
  const auto eval = [&](std::size_t i) {
    const std::optional<double> eta =
        eta_per_n > 0 ? std::optional<double>(eta_per_n * ns[i]) : std::nullopt;
    rows[i] = evaluate_row(table, ns[i], eta);
  };
  const unsigned hw = std::thread::hardware_concurrency();
  if (ns.size() < 256 || hw < 2) {
    for (std::size_t i = 0; i < ns.size(); ++i) eval(i);
    return rows;
  }
  const unsigned workers = std::min(hw, 8u);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < ns.size(); i += workers) eval(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

template <class S>
void append_stats_rows(Table& table, const std::vector<RowEval<S>>& rows,
                       int* precision_rows, int* last_ok_n) {
  for (const auto& row : rows) {
    std::vector<Cell> cells(kStatsColumns.size());
    cells[0] = std::to_string(row.n);
    if (row.status == RowStatus::ok) {
      const auto& r = row.report;
      if (r.eta) cells[1] = format_double(*r.eta);
      cells[2] = format_scalar(r.mean_n);
      cells[3] = format_scalar(r.mean_n2);
      cells[4] = format_scalar(r.variance);
      cells[5] = format_scalar(r.mandel_q);
      cells[6] = format_scalar(r.g2);
      cells[7] = format_scalar(r.approx_q);
      cells[8] = format_scalar(r.approx_g2_a);
      cells[9] = format_scalar(r.approx_g2_b);
      cells[10] = format_scalar(r.approx_g2_large);
      cells[11] = format_scalar(r.baseline_g2);
      cells[12] = format_scalar(r.baseline_q);
      cells[13] = "ok";
      *last_ok_n = std::max(*last_ok_n, row.n);
    } else if (row.status == RowStatus::blocked) {
      cells[13] = "blocked";
    } else {
      cells[13] = "precision_loss";
      ++*precision_rows;
    }
    table.rows.push_back(std::move(cells));
  }
}

std::vector<int> range_values(const NRange& r) {
  if (r.lo < 1 || r.hi < r.lo || r.stride < 1)
    throw ConfigError("N range must satisfy 1 <= lo <= hi, stride >= 1");
  std::vector<int> ns;
  for (int n = r.lo; n <= r.hi; n += r.stride) ns.push_back(n);
  return ns;
}

ModeProfile<Rational> make_rational_profile(const ProfileSpec& spec) {
  switch (spec.kind) {
    case ProfileSpec::Kind::uniform:
      return uniform_profile<Rational>(spec.modes);
    case ProfileSpec::Kind::file:
      return load_profile_rational(spec.path);
    case ProfileSpec::Kind::hydrogenic:
      break;
  }
  throw ConfigError("hydrogenic profiles have no rational representation");
}

ModeProfile<double> make_float_profile(const ProfileSpec& spec) {
  switch (spec.kind) {
    case ProfileSpec::Kind::uniform:
      return uniform_profile<double>(spec.modes);
    case ProfileSpec::Kind::file:
      return load_profile_float(spec.path);
    case ProfileSpec::Kind::hydrogenic:
      break;
  }
  throw ConfigError("hydrogenic profiles are not discrete");
}

std::ostream& resolve_output(const RunConfig& config, std::ofstream& file,
                             std::ostream& fallback) {
  if (!config.out_path) return fallback;
  file.open(*config.out_path);
  if (!file) throw ConfigError("cannot open output file " + *config.out_path);
  return file;
}

}  // namespace

NRange parse_n_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos)
    throw ConfigError("N range \"" + text + "\" must look like LO..HI[:STRIDE]");
  NRange r;
  try {
    r.lo = std::stoi(text.substr(0, dots));
    std::string rest = text.substr(dots + 2);
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      r.stride = std::stoi(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    r.hi = std::stoi(rest);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("N range \"" + text + "\" must look like LO..HI[:STRIDE]");
  }
  if (r.lo < 1 || r.hi < r.lo || r.stride < 1)
    throw ConfigError("N range must satisfy 1 <= lo <= hi, stride >= 1");
  return r;
}

int run_lambdas(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ProfileSpec spec = parse_profile_spec(config.profile_spec);
  const Mode mode = resolve_mode(config, spec);
  const int n_max = config.n_max.value_or(10);
  if (n_max < 1) throw ConfigError("--n-max must be >= 1");

  Table table;
  table.meta = base_meta("lambdas", config, mode, &spec);
  table.meta["n_max"] = n_max;
  table.columns = {"n", "lambda"};

  if (mode == Mode::rational) {
    const auto profile = make_rational_profile(spec);
    for (int n = 1; n <= n_max; ++n)
      table.rows.push_back(
          {std::to_string(n), format_rational(lambda_from_profile(profile, n))});
  } else if (spec.kind == ProfileSpec::Kind::hydrogenic) {
    for (int n = 1; n <= n_max; ++n)
      table.rows.push_back(
          {std::to_string(n), format_double(hydrogenic_lambda(n, spec.a_over_L))});
  } else {
    const auto profile = make_float_profile(spec);
    for (int n = 1; n <= n_max; ++n)
      table.rows.push_back(
          {std::to_string(n), format_double(lambda_from_profile(profile, n))});
  }

  std::ofstream file;
  write_table(table, config.format, resolve_output(config, file, out));
  (void)err;
  return kExitOk;
}

int run_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ProfileSpec spec = parse_profile_spec(config.profile_spec);
  const Mode mode = resolve_mode(config, spec);
  const std::vector<int> ns = range_values(config.n_range);
  const int hi = config.n_range.hi;
  if (config.lambda_max) {
    if (spec.kind != ProfileSpec::Kind::hydrogenic)
      throw ConfigError("--lambda-max applies to hydrogenic sweeps only");
    if (*config.lambda_max < 3)
      throw ConfigError("--lambda-max must be >= 3");
  }

  Table table;
  table.meta = base_meta("stats", config, mode, &spec);
  table.meta["n_range"] = range_name(config.n_range);
  table.columns = kStatsColumns;

  int precision_rows = 0;
  int last_ok_n = 0;
  if (mode == Mode::rational) {
    const auto profile = make_rational_profile(spec);
    const auto lambdas = ExchangeTable<Rational>::from_profile(
        profile, std::max(hi + 2, 3));
    const auto norm = build_norm_table(lambdas, hi);
    append_stats_rows(table, evaluate_rows(norm, ns, 0.0), &precision_rows,
                      &last_ok_n);
  } else if (spec.kind == ProfileSpec::Kind::hydrogenic) {
    const HydrogenicProfile hp(spec.a_over_L);
    const int full = std::max(hi + 2, 3);
    const int capped = config.lambda_max ? std::min(*config.lambda_max, full)
                                         : full;
    const auto lambdas = hydrogenic_exchange_table(hp, capped);
    const auto norm = build_norm_table(lambdas, hi, /*allow_truncated=*/capped < full);
    append_stats_rows(table,
                      evaluate_rows(norm, ns, std::pow(spec.a_over_L, 3)),
                      &precision_rows, &last_ok_n);
  } else {
    const auto profile = make_float_profile(spec);
    const auto lambdas = ExchangeTable<double>::from_profile(
        profile, std::max(hi + 2, 3));
    const auto norm = build_norm_table(lambdas, hi);
    append_stats_rows(table, evaluate_rows(norm, ns, 0.0), &precision_rows,
                      &last_ok_n);
  }

  if (precision_rows > 0) {
    table.meta["precision_loss_rows"] = precision_rows;
    table.meta["last_reliable_n"] = last_ok_n;
  }
  std::ofstream file;
  write_table(table, config.format, resolve_output(config, file, out));
  if (precision_rows > 0) {
    err << "stats: " << precision_rows
        << " row(s) past the reliable float range; last reliable N = "
        << last_ok_n << "\n";
    return kExitPrecision;
  }
  return kExitOk;
}

namespace {

void append_check_rows(Table& table, const CheckReport& report,
                       const std::string& prefix) {
  for (const auto& check : report.checks)
    table.rows.push_back({prefix.empty() ? check.identity
                                         : prefix + "/" + check.identity,
                          std::to_string(check.n),
                          check.pass ? std::string("pass") : std::string("fail"),
                          check.residual});
}

Rational abs_rational(Rational v) {
  if (v < 0) v = -v;
  return v;
}

/// Recursion-vs-oracle rows: norms for N <= M+2, full statistics for
/// 2 <= N <= M.
CheckReport equivalence_report(const ModeProfile<Rational>& profile) {
  CheckReport report;
  const int modes = profile.mode_count();
  const auto lambdas = ExchangeTable<Rational>::from_profile(profile, modes + 4);
  const auto norm = build_norm_table(lambdas, modes + 2);

  Rational nfact{1};
  for (int n = 0; n <= modes + 2; ++n) {
    if (n > 1) nfact *= n;
    const Rational via_oracle = oracle_f(profile, n);
    const Rational gap = abs_rational(norm.f(n) - via_oracle);
    report.checks.push_back({"norm_recursion_vs_oracle", n, gap == 0,
                             format_rational(gap)});
  }

  for (int n = 2; n <= profile.occupiable_modes(); ++n) {
    const auto closed = moment_report(norm, n);
    const auto direct = oracle_report(profile, n);
    Rational gap{0};
    const auto consider = [&gap](const Rational& a, const Rational& b) {
      gap = std::max(gap, abs_rational(a - b));
    };
    consider(closed.mean_n, direct.mean_n);
    consider(closed.mean_n2, direct.mean_n2);
    consider(closed.variance, direct.variance);
    consider(closed.mandel_q, direct.mandel_q);
    consider(closed.coincidence, direct.coincidence);
    consider(closed.g2, direct.g2);
    consider(closed.d00_moment, direct.d00_moment);
    consider(closed.r_term, direct.r_term);
    report.checks.push_back({"statistics_vs_oracle", n, gap == 0,
                             format_rational(gap)});
  }
  return report;
}

}  // namespace

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.mode && *config.mode == Mode::floating)
    throw ConfigError("verification runs in rational mode only");
  if (config.random_count && !config.profile_spec.empty())
    throw ConfigError("--random and --profile are mutually exclusive");

  std::vector<std::pair<std::string, ModeProfile<Rational>>> profiles;
  if (config.random_count) {
    if (*config.random_count < 1) throw ConfigError("--random needs a count >= 1");
    if (config.random_modes < 1 || config.random_modes > 12)
      throw ConfigError("--modes must be in 1..12");
    auto sampled = sample_rational_profiles(*config.random_count,
                                            config.random_modes,
                                            config.random_modes, config.seed);
    for (std::size_t i = 0; i < sampled.size(); ++i)
      profiles.emplace_back("random:" + std::to_string(i),
                            std::move(sampled[i]));
  } else {
    if (config.profile_spec.empty())
      throw ConfigError("verify needs --profile or --random");
    const ProfileSpec spec = parse_profile_spec(config.profile_spec);
    if (spec.kind == ProfileSpec::Kind::hydrogenic)
      throw ConfigError(
          "verify needs a discrete profile; the oracle has no hydrogenic "
          "representation");
    profiles.emplace_back("", make_rational_profile(spec));
  }

  Table table;
  table.meta = base_meta("verify", config, Mode::rational, nullptr);
  if (config.random_count) {
    table.meta["random_profiles"] = *config.random_count;
    table.meta["modes"] = config.random_modes;
    table.meta["seed"] = config.seed;
  }
  table.columns = {"identity", "N", "status", "residual"};
  table.bare_rows = config.format == Format::json;

  std::size_t failures = 0;
  std::size_t total = 0;
  for (const auto& [label, profile] : profiles) {
    if (profile.mode_count() > 12)
      throw ConfigError("verify is capped at 12 modes");
    const int depth = config.n_max.value_or(profile.mode_count());
    if (depth < 1 || depth > profile.mode_count())
      throw ConfigError("--n-max must be in 1..mode count");
    CheckReport identities = check_identities(profile, depth);
    CheckReport equivalence = equivalence_report(profile);
    failures += identities.failure_count() + equivalence.failure_count();
    total += identities.checks.size() + equivalence.checks.size();
    append_check_rows(table, identities, label);
    append_check_rows(table, equivalence, label);
  }

  std::ofstream file;
  write_table(table, config.format, resolve_output(config, file, out));
  err << "verify: " << total << " checks, " << failures << " failure(s)\n";
  return failures == 0 ? kExitOk : kExitVerifyFailure;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Statistical signatures of N composite bosons: exact moment\n"
               "tables, small-density approximations and an exact Fock-space\n"
               "verification oracle."};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  const std::map<std::string, Mode> mode_map{{"rational", Mode::rational},
                                             {"float", Mode::floating}};
  const std::map<std::string, Format> format_map{{"csv", Format::csv},
                                                 {"json", Format::json}};

  RunConfig config;
  std::string n_range_text;
  Mode mode_opt = Mode::rational;
  bool mode_given = false;

  const auto add_common = [&](CLI::App* cmd, bool need_profile) {
    auto* p = cmd->add_option("--profile", config.profile_spec,
                              "uniform:M | hydrogenic:A_OVER_L | file:PATH");
    if (need_profile) p->required();
    cmd->add_option("--mode", mode_opt, "numeric mode")
        ->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case))
        ->each([&](const std::string&) { mode_given = true; });
    cmd->add_option("--format", config.format, "output format")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    cmd->add_option("--out", [&](const std::vector<std::string>& v) {
      config.out_path = v.back();
      return true;
    }, "write the table to PATH instead of stdout");
  };

  auto* lambdas_cmd =
      app.add_subcommand("lambdas", "exchange weight table lambda_1..lambda_n");
  add_common(lambdas_cmd, /*need_profile=*/true);
  int lambdas_n_max = 10;
  lambdas_cmd->add_option("--n-max", lambdas_n_max, "largest n (default 10)");

  auto* stats_cmd =
      app.add_subcommand("stats", "moment/correlation sweep over N");
  add_common(stats_cmd, /*need_profile=*/true);
  stats_cmd->add_option("--n", n_range_text, "N range, LO..HI[:STRIDE]")
      ->required();
  int lambda_max_opt = 0;
  stats_cmd->add_option("--lambda-max", lambda_max_opt,
                        "cap the exchange-weight list (hydrogenic sweeps; "
                        "truncates the recursion)");

  auto* verify_cmd = app.add_subcommand(
      "verify", "exact-oracle identity and equivalence suite");
  add_common(verify_cmd, /*need_profile=*/false);
  int verify_n_max = 0;
  int random_count = 0;
  verify_cmd->add_option("--n-max", verify_n_max,
                         "identity depth (default: mode count)");
  verify_cmd->add_option("--random", random_count,
                         "verify COUNT seeded random rational profiles");
  verify_cmd->add_option("--modes", config.random_modes,
                         "modes per random profile (default 6)");
  verify_cmd->add_option("--seed", config.seed, "random profile seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (mode_given) config.mode = mode_opt;
    if (lambda_max_opt > 0) config.lambda_max = lambda_max_opt;
    if (app.got_subcommand(lambdas_cmd)) {
      config.n_max = lambdas_n_max;
      return run_lambdas(config, std::cout, std::cerr);
    }
    if (app.got_subcommand(stats_cmd)) {
      config.n_range = parse_n_range(n_range_text);
      return run_stats(config, std::cout, std::cerr);
    }
    if (verify_n_max > 0) config.n_max = verify_n_max;
    if (random_count > 0) config.random_count = random_count;
    return run_verify(config, std::cout, std::cerr);
  } catch (const PrecisionDomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecision;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace coboson::cli
