// replistat: selection-adjusted replicability analysis of paired
// original/replication studies.
//
// Subcommands: validate, fdp, shift, decline, simulate.
// Exit codes: 0 success, 2 schema/usage errors, 3 empty eligible set,
// 1 unexpected failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "replistat/decline.hpp"
#include "replistat/errors.hpp"
#include "replistat/fdp.hpp"
#include "replistat/multiplicity.hpp"
#include "replistat/output.hpp"
#include "replistat/selective.hpp"
#include "replistat/simulate.hpp"
#include "replistat/study.hpp"
#include "replistat/version.hpp"

namespace {

using namespace replistat;

constexpr int k_exit_ok = 0;
constexpr int k_exit_error = 1;
constexpr int k_exit_schema = 2;
constexpr int k_exit_empty = 3;

struct GlobalOpts {
  std::string input;
  std::string out;
  std::uint64_t seed = 20260816;
  std::string format = "csv";
  bool quiet = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyEligibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void info(const GlobalOpts& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << "\n";
}

// ---------------------------------------------------------------------------
// Table rendering: CSV text or a JSON array of row objects.  Numeric cells
// are tagged so the JSON form carries numbers, not strings.

struct Cell {
  std::string text;
  bool numeric = false;
  double value = 0.0;
};

Cell scell(std::string s) { return {std::move(s), false, 0.0}; }
Cell ncell(double v) { return {fmt17(v), true, v}; }
Cell icell(long v) { return {std::to_string(v), true, static_cast<double>(v)}; }
Cell bcell(bool v) { return {v ? "1" : "0", true, v ? 1.0 : 0.0}; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Table& t) {
  std::string out = csv_line(t.header);
  for (const auto& row : t.rows) {
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (const Cell& c : row) fields.push_back(c.text);
    out += csv_line(fields);
  }
  return out;
}

std::string render_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size() && i < t.header.size(); ++i) {
      if (row[i].numeric && std::isfinite(row[i].value))
        obj[t.header[i]] = row[i].value;
      else
        obj[t.header[i]] = row[i].text;
    }
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

void emit_table(const GlobalOpts& g, const Table& t, const RunManifest& manifest) {
  std::string body = g.format == "json" ? render_json(t) : render_csv(t);
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  write_file(g.out, body);
  write_file(g.out + ".manifest.json", manifest_to_json(manifest));
  info(g, "wrote " + g.out);
}

RunManifest make_manifest(const std::string& command, const GlobalOpts& g,
                          std::map<std::string, std::string> cfg) {
  RunManifest m;
  m.command = command;
  cfg["format"] = g.format;
  if (!g.input.empty()) cfg["input"] = g.input;
  m.configuration = std::move(cfg);
  if (!g.input.empty()) m.input_digest = fnv1a64_hex(read_file_bytes(g.input));
  m.tool_version = version_string;
  m.seed = g.seed;
  m.timestamp = iso8601_utc_now();
  return m;
}

// ---------------------------------------------------------------------------
// Shared ingestion pipeline.

struct LoadedData {
  ParseResult parsed;
  EligibleStudies eligible;
};

LoadedData load_studies(const GlobalOpts& g, double alpha0, long min_df, bool strict_rows) {
  if (g.input.empty()) throw UsageError("--input is required for this command");
  LoadedData data;
  data.parsed = parse_studies(g.input);
  for (const StudyIssue& issue : data.parsed.report.issues) {
    std::ostringstream ss;
    ss << "note: " << issue.code;
    if (issue.line >= 0) ss << " (line " << issue.line << ")";
    if (!issue.study_id.empty()) ss << " [" << issue.study_id << "]";
    ss << ": " << issue.detail;
    info(g, ss.str());
  }
  if (strict_rows && data.parsed.report.has_row_errors)
    throw schema_error("input contains malformed rows (see notes above)", "");
  EligibilityCriteria criteria;
  criteria.alpha0 = alpha0;
  criteria.min_df = min_df;
  data.eligible = filter_eligible(data.parsed.pairs, criteria, data.parsed.report);
  for (std::size_t i = data.parsed.report.issues.size();
       i < data.eligible.report.issues.size(); ++i) {
    const StudyIssue& issue = data.eligible.report.issues[i];
    info(g, "note: " + issue.code + " [" + issue.study_id + "]: " + issue.detail);
  }
  return data;
}

long pct(double v) { return std::lround(100.0 * v); }

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const GlobalOpts& g, double alpha0, long min_df) {
  LoadedData data = load_studies(g, alpha0, min_df, /*strict_rows=*/false);
  const EligibilityReport& rep = data.eligible.report;

  Table t;
  t.header = {"metric", "value"};
  t.rows.push_back({scell("pairs_parsed"), icell(rep.total)});
  t.rows.push_back({scell("significant_univariate"), icell(rep.significant_univariate)});
  t.rows.push_back({scell("z_approximable"), icell(rep.z_approximable)});
  t.rows.push_back({scell("issues"), icell(static_cast<long>(rep.issues.size()))});
  RunManifest manifest = make_manifest("validate", g,
                                       {{"alpha0", fmt17(alpha0)},
                                        {"min_df", std::to_string(min_df)}});
  emit_table(g, t, manifest);

  std::ostringstream ss;
  ss << "parsed " << rep.total << " pairs; " << rep.significant_univariate
     << " significant at alpha0=" << alpha0 << "; " << rep.z_approximable
     << " z-approximable";
  info(g, ss.str());

  if (rep.has_row_errors) return k_exit_schema;
  if (data.eligible.fdp_class.empty()) return k_exit_empty;
  return k_exit_ok;
}

// ---------------------------------------------------------------------------
// fdp

int cmd_fdp(const GlobalOpts& g, const std::string& source, const std::string& method,
            double alpha, double alpha0, double lambda, double confidence, long min_df) {
  LoadedData data = load_studies(g, alpha0, min_df, /*strict_rows=*/false);
  const auto& studies = data.eligible.fdp_class;
  if (studies.empty()) throw EmptyEligibleError("no studies significant at alpha0");

  FdpResult result;
  if (source == "original") {
    std::vector<double> p_adj;
    p_adj.reserve(studies.size());
    for (const FdpStudy& s : studies) p_adj.push_back(adjust_pvalue(s.p_original, alpha0));
    if (method == "internal") {
      if (alpha != alpha0)
        throw UsageError(
            "--method internal analyzes the full selected set, so --alpha must equal "
            "--alpha0; use --method external (original source) or --source replication "
            "for stricter thresholds");
      result = fdp_internal(p_adj, lambda, confidence);
      result.alpha = alpha0;
    } else {
      if (!(alpha < lambda * alpha0))
        throw UsageError("--method external requires --alpha < lambda * alpha0");
      result = fdp_external(p_adj, alpha, alpha0, lambda, confidence);
    }
  } else {  // replication
    if (method == "external")
      throw UsageError("--method external applies only to --source original");
    if (!(alpha <= alpha0))
      throw UsageError("--source replication requires --alpha <= --alpha0");
    std::vector<double> p_rep;
    for (const FdpStudy& s : studies)
      if (s.p_original < alpha) p_rep.push_back(s.p_replication_directional);
    if (p_rep.empty()) throw EmptyEligibleError("no originals significant at --alpha");
    result = replication_fdp(p_rep, lambda, confidence);
    result.alpha = alpha;
  }
  result.alpha0 = alpha0;

  Table t;
  t.header = {"method", "source", "alpha0", "alpha", "lambda", "confidence",
              "beta", "R", "B", "N", "R_alpha", "ucb_count", "estimate", "ucb"};
  std::vector<Cell> row;
  row.push_back(scell(result.method));
  row.push_back(scell(source));
  row.push_back(ncell(result.alpha0));
  row.push_back(ncell(result.alpha));
  row.push_back(ncell(result.lambda));
  row.push_back(ncell(result.confidence));
  row.push_back(std::isnan(result.beta) ? scell("") : ncell(result.beta));
  row.push_back(result.R < 0 ? scell("") : icell(result.R));
  row.push_back(result.B < 0 ? scell("") : icell(result.B));
  row.push_back(result.N < 0 ? scell("") : icell(result.N));
  row.push_back(result.R_alpha < 0 ? scell("") : icell(result.R_alpha));
  row.push_back(result.ucb_count < 0 ? scell("") : icell(result.ucb_count));
  row.push_back(ncell(result.estimate));
  row.push_back(ncell(result.ucb));
  t.rows.push_back(std::move(row));

  RunManifest manifest = make_manifest(
      "fdp", g,
      {{"source", source}, {"method", method}, {"alpha", fmt17(alpha)},
       {"alpha0", fmt17(alpha0)}, {"lambda", fmt17(lambda)},
       {"confidence", fmt17(confidence)}, {"min_df", std::to_string(min_df)}});
  emit_table(g, t, manifest);

  std::ostringstream ss;
  ss << "directional FDP (" << result.method << ", " << source << ", alpha=" << alpha
     << "): estimate " << pct(result.estimate) << "%, upper bound " << pct(result.ucb) << "%";
  info(g, ss.str());
  return k_exit_ok;
}

// ---------------------------------------------------------------------------
// shift

int cmd_shift(const GlobalOpts& g, double level, bool adjusted,
              const std::vector<std::string>& multiplicity, double alpha0, long min_df) {
  LoadedData data = load_studies(g, alpha0, min_df, /*strict_rows=*/false);
  const auto& pairs = data.eligible.z_class;
  if (pairs.empty()) throw EmptyEligibleError("no z-approximable study pairs");

  struct Row {
    const StudyPair* pair;
    double p_adj, p_unadj;
    IntervalEstimate ci, pred_z;
  };
  std::vector<Row> rows;
  rows.reserve(pairs.size());
  std::map<std::string, double> pmap;
  long n_rej_adj = 0, n_rej_unadj = 0;
  for (const StudyPair& pair : pairs) {
    Row r;
    r.pair = &pair;
    r.p_adj = shift_pvalue(pair, 0.0, true);
    r.p_unadj = shift_pvalue(pair, 0.0, false);
    r.ci = ci_shift(pair, level, adjusted);
    r.pred_z = predictive_interval(pair, level, adjusted, IntervalTarget::z_replication);
    if (r.p_adj < 1.0 - level) ++n_rej_adj;
    if (r.p_unadj < 1.0 - level) ++n_rej_unadj;
    pmap[pair.study_id] = adjusted ? r.p_adj : r.p_unadj;
    rows.push_back(r);
  }

  // Multiplicity flags: entries look like "bh:0.10" or "holm:0.05".
  std::vector<MultiplicityDecision> decisions;
  for (const std::string& spec : multiplicity) {
    auto colon = spec.find(':');
    std::string proc = spec.substr(0, colon);
    if (colon == std::string::npos || (proc != "bh" && proc != "holm"))
      throw UsageError("--multiplicity entries must look like bh:0.10 or holm:0.05");
    double lvl = std::strtod(spec.c_str() + colon + 1, nullptr);
    if (!(lvl > 0.0 && lvl < 1.0))
      throw UsageError("--multiplicity level must lie in (0, 1): " + spec);
    decisions.push_back(proc == "bh" ? bh(pmap, lvl) : holm(pmap, lvl));
  }

  Table t;
  t.header = {"study_id", "z_o", "z_r", "k_o", "k_r", "p_adjusted", "p_unadjusted",
              "ci_lo", "ci_hi", "pred_z_lo", "pred_z_hi", "pred_effect_lo",
              "pred_effect_hi", "pred_connected"};
  for (const auto& d : decisions)
    t.header.push_back(std::string("reject_") + to_string(d.procedure));
  for (const Row& r : rows) {
    std::vector<Cell> cells;
    cells.push_back(scell(r.pair->study_id));
    cells.push_back(ncell(r.pair->z_o));
    cells.push_back(ncell(r.pair->z_r));
    cells.push_back(ncell(r.pair->k_o));
    cells.push_back(ncell(r.pair->k_r));
    cells.push_back(ncell(r.p_adj));
    cells.push_back(ncell(r.p_unadj));
    cells.push_back(ncell(r.ci.lo));
    cells.push_back(ncell(r.ci.hi));
    cells.push_back(ncell(r.pred_z.lo));
    cells.push_back(ncell(r.pred_z.hi));
    cells.push_back(ncell(r.pred_z.lo / r.pair->k_r));
    cells.push_back(ncell(r.pred_z.hi / r.pair->k_r));
    cells.push_back(bcell(r.pred_z.connected));
    for (const auto& d : decisions) {
      bool rejected = false;
      for (const std::string& id : d.rejected_ids)
        if (id == r.pair->study_id) {
          rejected = true;
          break;
        }
      cells.push_back(bcell(rejected));
    }
    t.rows.push_back(std::move(cells));
  }

  std::map<std::string, std::string> cfg = {{"level", fmt17(level)},
                                            {"adjusted", adjusted ? "true" : "false"},
                                            {"alpha0", fmt17(alpha0)},
                                            {"min_df", std::to_string(min_df)}};
  for (std::size_t i = 0; i < multiplicity.size(); ++i)
    cfg["multiplicity_" + std::to_string(i)] = multiplicity[i];
  emit_table(g, t, make_manifest("shift", g, std::move(cfg)));

  std::ostringstream ss;
  ss << "shift test at level " << 1.0 - level << ": " << n_rej_adj << "/" << rows.size()
     << " rejected adjusted, " << n_rej_unadj << "/" << rows.size() << " unadjusted";
  for (const auto& d : decisions)
    ss << "; " << to_string(d.procedure) << ":" << d.level << " -> "
       << d.rejected_ids.size();
  info(g, ss.str());
  return k_exit_ok;
}

// ---------------------------------------------------------------------------
// decline

int cmd_decline(const GlobalOpts& g, const std::string& rho_grid_text, double lambda,
                double confidence, double alpha0, long min_df) {
  LoadedData data = load_studies(g, alpha0, min_df, /*strict_rows=*/false);
  const auto& pairs = data.eligible.z_class;
  if (pairs.empty()) throw EmptyEligibleError("no z-approximable study pairs");

  std::vector<double> grid = parse_grid(rho_grid_text);
  DeclineBand band = decline_band(pairs, grid, lambda, confidence);

  Table t;
  t.header = {"rho", "b_count", "b_comp_count", "under", "over", "ci_lo", "ci_hi"};
  for (const DeclineBandRow& row : band.rows) {
    t.rows.push_back({ncell(row.rho), icell(row.b_count), icell(row.b_comp_count),
                      ncell(row.under), ncell(row.over), ncell(row.ci_lo),
                      ncell(row.ci_hi)});
  }
  emit_table(g, t,
             make_manifest("decline", g,
                           {{"rho_grid", rho_grid_text}, {"lambda", fmt17(lambda)},
                            {"confidence", fmt17(confidence)}, {"alpha0", fmt17(alpha0)},
                            {"min_df", std::to_string(min_df)}}));

  for (const DeclineBandRow& row : band.rows) {
    if (row.rho == 0.0 || row.rho == 0.25) {
      std::ostringstream ss;
      ss << "rho=" << row.rho << ": declining fraction between " << pct(row.under)
         << "% and " << pct(row.over) << "%, band (" << pct(row.ci_lo) << "%, "
         << pct(row.ci_hi) << "%)";
      info(g, ss.str());
    }
  }
  return k_exit_ok;
}

// ---------------------------------------------------------------------------
// simulate

Table curve_table(const std::vector<CurvePoint>& pts) {
  Table t;
  t.header = {"theta", "analytic", "mc", "mc_se", "n_selected"};
  for (const CurvePoint& p : pts)
    t.rows.push_back(
        {ncell(p.theta), ncell(p.analytic), ncell(p.mc), ncell(p.mc_se), icell(p.n_selected)});
  return t;
}

int cmd_simulate(const GlobalOpts& g, const std::string& scenario, long trials,
                 const std::string& theta_grid_text) {
  SimConfig cfg;
  cfg.seed = g.seed;
  if (!theta_grid_text.empty()) cfg.theta_grid = parse_grid(theta_grid_text);

  if (scenario == "curves") {
    cfg.n_trials = trials > 0 ? trials : 200000;
    struct Named {
      const char* name;
      std::vector<CurvePoint> pts;
    };
    std::vector<Named> curves;
    curves.push_back({"nonsig_same_dir", curve_nonsig_same_dir(cfg)});
    curves.push_back({"type_s", curve_type_s(cfg)});
    curves.push_back({"ci_miss", curve_ci_miss(cfg)});
    curves.push_back({"decline", curve_decline(cfg)});

    RunManifest manifest = make_manifest(
        "simulate", g,
        {{"scenario", scenario}, {"trials", std::to_string(cfg.n_trials)},
         {"theta_grid", theta_grid_text.empty() ? "0:5:0.05" : theta_grid_text}});

    if (g.out.empty()) {
      Table all;
      all.header = {"curve", "theta", "analytic", "mc", "mc_se", "n_selected"};
      for (const Named& c : curves)
        for (const CurvePoint& p : c.pts)
          all.rows.push_back({scell(c.name), ncell(p.theta), ncell(p.analytic), ncell(p.mc),
                              ncell(p.mc_se), icell(p.n_selected)});
      std::cout << (g.format == "json" ? render_json(all) : render_csv(all));
      return k_exit_ok;
    }
    std::filesystem::create_directories(g.out);
    for (const Named& c : curves) {
      Table t = curve_table(c.pts);
      std::string path = g.out + "/curve_" + c.name + (g.format == "json" ? ".json" : ".csv");
      write_file(path, g.format == "json" ? render_json(t) : render_csv(t));
    }
    write_file(g.out + "/manifest.json", manifest_to_json(manifest));
    info(g, "wrote 4 curves to " + g.out);
    return k_exit_ok;
  }

  if (scenario == "validation") {
    nlohmann::ordered_json report;
    SimConfig fcfg = cfg;
    fcfg.scenario = Scenario::mixed_nulls;
    fcfg.n_trials = trials > 0 ? trials : 2000;
    nlohmann::ordered_json fdp_arr = nlohmann::ordered_json::array();
    for (double f : {0.0, 0.3, 1.0}) {
      fcfg.null_fraction = f;
      FdpHarnessReport r = harness_fdp(fcfg);
      for (const FdpMethodReport* m : {&r.internal_report, &r.external_report}) {
        nlohmann::ordered_json j;
        j["null_fraction"] = f;
        j["method"] = m->method;
        j["n_trials_used"] = m->n_trials_used;
        j["mean_estimate"] = m->mean_estimate;
        j["mean_true_fdp"] = m->mean_true_fdp;
        j["bias_mean"] = m->bias_mean;
        j["bias_se"] = m->bias_se;
        j["coverage"] = m->coverage;
        j["coverage_se"] = m->coverage_se;
        j["count_identities_ok"] = r.count_identities_ok;
        fdp_arr.push_back(j);
      }
    }
    report["fdp_harness"] = fdp_arr;

    SimConfig lcfg = cfg;
    lcfg.scenario = Scenario::boundary_decline;
    lcfg.n_trials = trials > 0 ? trials : 10000;
    nlohmann::ordered_json lvl_arr = nlohmann::ordered_json::array();
    for (const LevelPoint& p : harness_selective_level(lcfg)) {
      nlohmann::ordered_json j;
      j["test"] = p.test;
      j["theta_o"] = p.theta_o;
      j["theta_r"] = p.theta_r;
      j["k_o"] = p.k_o;
      j["k_r"] = p.k_r;
      j["rho"] = p.rho;
      j["n_trials"] = p.n_trials;
      j["rate01"] = p.rate01;
      j["rate05"] = p.rate05;
      j["rate10"] = p.rate10;
      j["se05"] = p.se05;
      lvl_arr.push_back(j);
    }
    report["selective_level"] = lvl_arr;

    SimConfig ccfg = cfg;
    ccfg.n_trials = trials > 0 ? trials : 10000;
    IntervalCoverageReport cov = harness_interval_coverage(ccfg, 1.0, 1.0, 1.0, 0.95);
    nlohmann::ordered_json jc;
    jc["n_trials"] = cov.n_trials;
    jc["ci_coverage"] = cov.ci_coverage;
    jc["ci_se"] = cov.ci_se;
    jc["pred_coverage"] = cov.pred_coverage;
    jc["pred_se"] = cov.pred_se;
    jc["duality_ok"] = cov.duality_ok;
    jc["n_audited"] = cov.n_audited;
    report["interval_coverage"] = jc;

    std::string body = report.dump(2) + "\n";
    RunManifest manifest = make_manifest(
        "simulate", g, {{"scenario", scenario}, {"trials", std::to_string(trials)}});
    if (g.out.empty()) {
      std::cout << body;
    } else {
      std::filesystem::create_directories(g.out);
      write_file(g.out + "/validation.json", body);
      write_file(g.out + "/manifest.json", manifest_to_json(manifest));
      info(g, "wrote validation report to " + g.out);
    }
    return k_exit_ok;
  }

  throw UsageError("unknown scenario '" + scenario + "' (use curves or validation)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selection-adjusted replicability analysis of paired "
               "original/replication studies"};
  app.set_version_flag("--version", version_string);
  app.set_config("--config");
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--input", g.input, "Input study CSV");
  app.add_option("--out", g.out, "Output file (or directory for simulate)");
  app.add_option("--seed", g.seed, "Random seed for simulation commands");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", g.quiet, "Suppress diagnostics on stderr");

  double alpha0 = 0.05;
  long min_df = 30;

  auto* validate = app.add_subcommand("validate", "Parse and classify the input studies");
  validate->add_option("--alpha0", alpha0, "Original-study significance threshold");
  validate->add_option("--min-df", min_df, "Minimum df for the z approximation");

  auto* fdp = app.add_subcommand("fdp", "Directional false-discovery-proportion analysis");
  std::string source = "original", method = "internal";
  double alpha = 0.05, lambda = 0.5, confidence = 0.95;
  fdp->add_option("--source", source, "Which p-values to analyze")
      ->check(CLI::IsMember({"original", "replication"}));
  fdp->add_option("--method", method, "Estimation method")
      ->check(CLI::IsMember({"internal", "external"}));
  fdp->add_option("--alpha", alpha, "Working significance threshold");
  fdp->add_option("--alpha0", alpha0, "Selection threshold");
  fdp->add_option("--lambda", lambda, "Large-p split point");
  fdp->add_option("--confidence", confidence, "Upper-bound confidence");
  fdp->add_option("--min-df", min_df, "Minimum df for the z approximation");

  auto* shift = app.add_subcommand("shift", "Per-study selective effect-shift analysis");
  double level = 0.95;
  bool unadjusted = false;
  std::vector<std::string> multiplicity = {"bh:0.10", "holm:0.05"};
  shift->add_option("--level", level, "Interval confidence level");
  shift->add_flag("--unadjusted", unadjusted,
                  "Ignore selection when building intervals and multiplicity input");
  shift->add_option("--multiplicity", multiplicity,
                    "Procedures to apply, e.g. bh:0.10 holm:0.05");
  shift->add_option("--alpha0", alpha0, "Selection threshold");
  shift->add_option("--min-df", min_df, "Minimum df for the z approximation");

  auto* decline = app.add_subcommand("decline", "Effect-decline band over a rho grid");
  std::string rho_grid = "0:1:0.05";
  decline->add_option("--rho-grid", rho_grid, "Grid as start:end:step or comma list");
  decline->add_option("--lambda", lambda, "Large-p split point");
  decline->add_option("--confidence", confidence, "Per-side band confidence");
  decline->add_option("--alpha0", alpha0, "Selection threshold");
  decline->add_option("--min-df", min_df, "Minimum df for the z approximation");

  auto* simulate = app.add_subcommand("simulate", "Selection-bias curves and validation harnesses");
  std::string scenario = "curves";
  long trials = 0;
  std::string theta_grid;
  simulate->add_option("--scenario", scenario, "curves or validation");
  simulate->add_option("--trials", trials, "Monte Carlo trials (0 = scenario default)");
  simulate->add_option("--theta-grid", theta_grid, "Grid as start:end:step or comma list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? k_exit_ok : k_exit_schema;
  }

  try {
    if (validate->parsed()) return cmd_validate(g, alpha0, min_df);
    if (fdp->parsed())
      return cmd_fdp(g, source, method, alpha, alpha0, lambda, confidence, min_df);
    if (shift->parsed())
      return cmd_shift(g, level, !unadjusted, multiplicity, alpha0, min_df);
    if (decline->parsed())
      return cmd_decline(g, rho_grid, lambda, confidence, alpha0, min_df);
    if (simulate->parsed()) return cmd_simulate(g, scenario, trials, theta_grid);
    std::cerr << "error: no subcommand\n";
    return k_exit_schema;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return k_exit_schema;
  } catch (const schema_error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return k_exit_schema;
  } catch (const row_error& e) {
    std::cerr << "row error: " << e.what() << "\n";
    return k_exit_schema;
  } catch (const EmptyEligibleError& e) {
    std::cerr << "no eligible studies: " << e.what() << "\n";
    return k_exit_empty;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return k_exit_error;
  }
}
