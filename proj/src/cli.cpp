#include "sarfocus/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "sarfocus/causal.hpp"
#include "sarfocus/dataset.hpp"
#include "sarfocus/fingerprint.hpp"
#include "sarfocus/focus.hpp"
#include "sarfocus/report.hpp"
#include "sarfocus/scm_io.hpp"
#include "sarfocus/smiles.hpp"
#include "sarfocus/synth.hpp"
#include "sarfocus/text.hpp"

namespace sarfocus {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Raised for bad flag values that CLI11 cannot catch on its own.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto t = trim(item);
    if (t.empty()) throw ConfigError("empty entry in list '" + text + "'");
    out.emplace_back(t);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError(what + ": '" + s + "' is not a number");
  return v;
}

std::vector<double> parse_t_grid(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_number(s, "--t-grid"));
  return out;
}

std::vector<std::size_t> parse_nsim_grid(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(text)) {
    if (s == "all" || s == "n") {
      out.push_back(kAllComplement);
      continue;
    }
    const double v = parse_number(s, "--nsim-grid");
    if (v < 0 || v != std::floor(v)) throw ConfigError("--nsim-grid: '" + s + "' is not a non-negative integer");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

BitRule parse_rule(const std::string& s) {
  if (s == "required" || s == "bit_required") return BitRule::bit_required;
  if (s == "forbidden" || s == "bit_forbidden") return BitRule::bit_forbidden;
  throw ConfigError("--rules: '" + s + "' must be 'required' or 'forbidden'");
}

std::string file_error(const DatasetError& e) { return e.what(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path.string() + ": cannot write file");
  f << text;
  if (!f) throw std::runtime_error(path.string() + ": write failed");
}

// scan ------------------------------------------------------------------------

struct ScanArgs {
  std::string data;
  std::string series;
  std::string out;
  std::string t_grid = "1,3.16,10,31.6,100,316,1000";
  std::string nsim_grid = "0,5,10,25,50,100,250,500,1000,all";
  int replicates = 500;
  std::uint64_t seed = 0;
  int radius = 2;
  std::size_t bits = 2048;
  std::string sim_ref = "train-half";
  bool svg = false;
  unsigned threads = 0;
  int trees = 100;
  int max_depth = 0;
  int min_leaf = 1;
  std::string features = "sqrt";
  std::string from_manifest;
  bool quiet = false;
};

json scan_config_json(const ScanArgs& a) {
  return json{{"data", a.data},         {"series", a.series},       {"t_grid", a.t_grid},
              {"nsim_grid", a.nsim_grid}, {"replicates", a.replicates}, {"seed", a.seed},
              {"radius", a.radius},     {"bits", a.bits},           {"sim_ref", a.sim_ref},
              {"svg", a.svg},           {"trees", a.trees},         {"max_depth", a.max_depth},
              {"min_leaf", a.min_leaf}, {"features", a.features}};
}

void apply_manifest(ScanArgs& a) {
  std::ifstream in(a.from_manifest);
  if (!in) throw ConfigError(a.from_manifest + ": cannot open manifest");
  json m;
  try {
    m = json::parse(in);
    const auto& c = m.at("config");
    a.data = c.at("data").get<std::string>();
    a.series = c.at("series").get<std::string>();
    a.t_grid = c.at("t_grid").get<std::string>();
    a.nsim_grid = c.at("nsim_grid").get<std::string>();
    a.replicates = c.at("replicates").get<int>();
    a.seed = c.at("seed").get<std::uint64_t>();
    a.radius = c.at("radius").get<int>();
    a.bits = c.at("bits").get<std::size_t>();
    a.sim_ref = c.at("sim_ref").get<std::string>();
    a.svg = c.at("svg").get<bool>();
    a.trees = c.at("trees").get<int>();
    a.max_depth = c.at("max_depth").get<int>();
    a.min_leaf = c.at("min_leaf").get<int>();
    a.features = c.at("features").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(a.from_manifest + ": malformed manifest: " + e.what());
  }
  const auto& inputs = m.value("inputs", json::object());
  if (inputs.contains("data")) {
    const auto expected = inputs["data"].value("sha256", std::string());
    if (!expected.empty() && fs::exists(a.data) && sha256_file(a.data) != expected)
      throw DatasetError(DatasetErrorKind::io, a.data, 0, "contents differ from the manifest digest");
  }
}

ScanConfig build_scan_config(const ScanArgs& a) {
  ScanConfig cfg;
  cfg.t_grid = parse_t_grid(a.t_grid);
  cfg.nsim_grid = parse_nsim_grid(a.nsim_grid);
  cfg.replicates = a.replicates;
  cfg.master_seed = a.seed;
  if (a.sim_ref == "train-half") {
    cfg.similarity_reference = SimilarityReference::training_half;
  } else if (a.sim_ref == "whole-series") {
    cfg.similarity_reference = SimilarityReference::whole_series;
  } else {
    throw ConfigError("--sim-ref must be 'train-half' or 'whole-series'");
  }
  cfg.forest.n_trees = a.trees;
  if (a.max_depth > 0) cfg.forest.max_depth = a.max_depth;
  cfg.forest.min_leaf = a.min_leaf;
  if (a.features == "sqrt") {
    cfg.forest.features = FeatureRule::sqrt;
  } else if (a.features == "all") {
    cfg.forest.features = FeatureRule::all;
  } else {
    const double k = parse_number(a.features, "--features");
    if (k < 1 || k != std::floor(k)) throw ConfigError("--features must be 'sqrt', 'all' or a positive integer");
    cfg.forest.features = FeatureRule::fixed;
    cfg.forest.fixed_features = static_cast<int>(k);
  }
  try {
    cfg.forest.validate();
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const FocusError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

int cmd_scan(ScanArgs a, std::ostream& out, std::ostream& err) {
  if (!a.from_manifest.empty()) apply_manifest(a);
  if (a.data.empty() || a.series.empty()) throw ConfigError("--data and --series are required");
  const ScanConfig cfg = build_scan_config(a);
  FingerprintParams fp;
  fp.radius = a.radius;
  fp.n_bits = a.bits;
  try {
    fp.validate();
  } catch (const FingerprintError& e) {
    throw ConfigError(e.what());
  }

  const auto started = std::chrono::steady_clock::now();
  const Dataset d = load_csv(a.data, fp);
  json inputs{{"data", {{"path", a.data}, {"sha256", sha256_file(a.data)}}}};
  SeriesSelection sel;
  if (fs::is_regular_file(a.series)) {
    const auto ids = read_id_file(a.series);
    sel = select_series(d, ids);
    inputs["series"] = {{"path", a.series}, {"sha256", sha256_file(a.series)}};
  } else {
    sel = select_series(d, a.series);
  }

  ScanOptions opts;
  opts.threads = a.threads;
  int last_decile = -1;
  if (!a.quiet) {
    opts.progress = [&](int done, int total) {
      const int decile = done * 10 / total;
      if (decile == last_decile) return;
      last_decile = decile;
      err << "scan: " << done << "/" << total << " replicates\n" << std::flush;
    };
  }
  FocusResult r = scan(d, sel, cfg, opts);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  std::vector<std::string> outputs;
  {
    std::ostringstream csv;
    write_heatmap_csv(csv, r);
    write_text(dir / "heatmap.csv", csv.str());
    outputs.push_back("heatmap.csv");
  }
  {
    std::ostringstream ids;
    write_id_list(ids, r.delta_s);
    write_text(dir / "delta_s.txt", ids.str());
    outputs.push_back("delta_s.txt");
  }
  if (a.svg) {
    write_text(dir / "heatmap.svg", heatmap_svg(r, "Focus scan: " + fs::path(a.data).filename().string() + " / " +
                                                       fs::path(a.series).filename().string()));
    outputs.push_back("heatmap.svg");
  }
  json digests = json::object();
  for (const auto& o : outputs) digests[o] = sha256_file(dir / o);
  const json manifest{
      {"tool", "sarfocus"},
      {"version", SARFOCUS_VERSION},
      {"command", "scan"},
      {"config", scan_config_json(a)},
      {"resolved",
       {{"t_grid", r.t_grid},
        {"nsim_grid", r.nsim_grid},
        {"series_size", sel.series.size()},
        {"complement_size", sel.complement.size()}}},
      {"inputs", inputs},
      {"timing", {{"seconds", seconds}, {"threads", a.threads}}},
      {"outputs", digests},
      {"best", {{"t_nm", r.best.t_nm}, {"n_sim", r.best.n_sim}, {"mean_auc", r.best.mean_auc}}},
  };
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  out << "best t_nm=" << format_double(r.best.t_nm) << " n_sim=" << r.best.n_sim
      << " mean_auc=" << format_double(r.best.mean_auc) << "\n";
  return kExitOk;
}

// synth -------------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  int per_series = 4;
  int n_series = 2;
  std::string rules;
  std::string mechanisms;
  std::string active_range = "10,95";
  std::string inactive_range = "120,1000";
  double noise = 0.0;
  std::uint64_t seed = 0;
};

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
  const auto parts = split_list(text);
  if (parts.size() != 2) throw ConfigError(flag + " expects 'lo,hi'");
  return {parse_number(parts[0], flag), parse_number(parts[1], flag)};
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SynthConfig cfg;
  cfg.per_series = a.per_series;
  cfg.n_series = a.n_series;
  if (!a.rules.empty()) {
    for (const auto& s : split_list(a.rules)) cfg.rules.push_back(parse_rule(s));
  }
  if (!a.mechanisms.empty()) {
    for (const auto& s : split_list(a.mechanisms)) {
      const double v = parse_number(s, "--mechanisms");
      if (v != std::floor(v)) throw ConfigError("--mechanisms entries must be integers");
      cfg.mechanisms.push_back(static_cast<int>(v));
    }
  }
  std::tie(cfg.active_lo, cfg.active_hi) = parse_range(a.active_range, "--active-range");
  std::tie(cfg.inactive_lo, cfg.inactive_hi) = parse_range(a.inactive_range, "--inactive-range");
  cfg.label_noise = a.noise;
  cfg.seed = a.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const SynthOutput s = generate(cfg);
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  std::ostringstream csv, truth;
  write_csv(csv, s.records);
  write_truth_csv(truth, s.truth);
  write_text(dir / "dataset.csv", csv.str());
  write_text(dir / "truth.csv", truth.str());
  out << "dataset.csv " << sha256_hex(csv.str()) << "\n";
  out << "truth.csv " << sha256_hex(truth.str()) << "\n";
  return kExitOk;
}

// causal-verify -----------------------------------------------------------------

void print_table(std::ostream& out, const std::string& title, const Eigen::MatrixXd& t, const std::string& cause,
                 const std::string& effect) {
  out << title << "\n";
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    out << "  do(" << cause << "=" << r << "):";
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      out << " P(" << effect << "=" << c << ")=" << std::setprecision(17) << t(r, c);
    }
    out << "\n";
  }
}

int cmd_causal_verify(const std::string& scm_path, const std::string& builtin, const std::string& dump,
                      std::ostream& out, std::ostream& err) {
  if (scm_path.empty() == builtin.empty()) throw ConfigError("give exactly one of --scm or --builtin");
  ScmSpec spec = [&] {
    if (!builtin.empty()) {
      if (builtin != "thought-experiment") throw ConfigError("unknown built-in model '" + builtin + "'");
      return ScmSpec{thought_experiment_scm(), FrontDoorQuery{}};
    }
    try {
      return load_scm(scm_path);
    } catch (const ScmFormatError& e) {
      throw ConfigError(e.what());
    }
  }();
  if (!dump.empty()) write_text(dump, scm_to_json(spec.model, spec.query));
  const auto& q = spec.query;

  const Dag g = induced_graph(spec.model);
  const auto report = check_front_door(g, q.cause, q.mediator, q.effect);
  if (!report.holds()) {
    for (const auto& f : report.failures()) err << "front-door criterion " << f << "\n";
    return kExitCriterion;
  }
  Eigen::MatrixXd truth, estimate;
  try {
    truth = total_effect(spec.model, q.cause, q.effect);
    estimate = front_door_table(observational_joint(spec.model), q.cause, q.mediator, q.effect);
  } catch (const PositivityViolation& e) {
    err << "positivity violation: " << e.what() << "\n";
    return kExitCriterion;
  } catch (const SupportTooLarge& e) {
    throw ConfigError(e.what());
  }
  print_table(out, "interventional (mutilated model):", truth, q.cause, q.effect);
  print_table(out, "front-door estimate (observational):", estimate, q.cause, q.effect);
  const double gap = (truth - estimate).cwiseAbs().maxCoeff();
  out << "max_abs_discrepancy=" << std::setprecision(6) << gap << "\n";
  return gap <= 1e-10 ? kExitOk : kExitCriterion;
}

// fp / sim ------------------------------------------------------------------------

FingerprintParams fp_params(int radius, std::size_t bits) {
  FingerprintParams p;
  p.radius = radius;
  p.n_bits = bits;
  try {
    p.validate();
  } catch (const FingerprintError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

Fingerprint fingerprint_of(const std::string& smiles, const FingerprintParams& p, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto m = parse_smiles(smiles, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return morgan_fingerprint(m, p);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Focus scans, synthetic Simpson data and front-door checks for SAR data sets", "sarfocus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SARFOCUS_VERSION);

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("scan", "Sweep (T, N_sim) and report the focused training set");
  scan_cmd->add_option("--data", scan_args.data, "Activity CSV (id,smiles,ic50_nm,qualifier,series)");
  scan_cmd->add_option("--series", scan_args.series, "Series label, or a file with one record id per line");
  scan_cmd->add_option("--out", scan_args.out, "Output directory")->required();
  scan_cmd->add_option("--t-grid", scan_args.t_grid, "Thresholds in nM, comma separated")->capture_default_str();
  scan_cmd->add_option("--nsim-grid", scan_args.nsim_grid, "N_sim values, comma separated; 'all' = whole complement")
      ->capture_default_str();
  scan_cmd->add_option("--replicates", scan_args.replicates, "Random 50/50 splits")->capture_default_str();
  scan_cmd->add_option("--seed", scan_args.seed, "Master seed")->capture_default_str();
  scan_cmd->add_option("--radius", scan_args.radius, "Fingerprint radius")->capture_default_str();
  scan_cmd->add_option("--bits", scan_args.bits, "Fingerprint width (512, 1024, 2048, 4096)")->capture_default_str();
  scan_cmd->add_option("--sim-ref", scan_args.sim_ref, "train-half or whole-series")->capture_default_str();
  scan_cmd->add_flag("--svg", scan_args.svg, "Also write heatmap.svg");
  scan_cmd->add_option("--threads", scan_args.threads, "Worker threads, 0 = all cores")->capture_default_str();
  scan_cmd->add_option("--trees", scan_args.trees, "Trees per forest")->capture_default_str();
  scan_cmd->add_option("--max-depth", scan_args.max_depth, "Tree depth limit, 0 = unlimited")->capture_default_str();
  scan_cmd->add_option("--min-leaf", scan_args.min_leaf, "Minimum samples per leaf")->capture_default_str();
  scan_cmd->add_option("--features", scan_args.features, "Features per split: sqrt, all or a count")
      ->capture_default_str();
  scan_cmd->add_option("--from-manifest", scan_args.from_manifest, "Re-run the configuration stored in a manifest");
  scan_cmd->add_flag("--quiet", scan_args.quiet, "No progress on stderr");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic two-mechanism data set and its truth file");
  synth_cmd->add_option("--out", synth_args.out, "Output directory")->required();
  synth_cmd->add_option("--per-series", synth_args.per_series)->capture_default_str();
  synth_cmd->add_option("--n-series", synth_args.n_series)->capture_default_str();
  synth_cmd->add_option("--rules", synth_args.rules, "Per series: required or forbidden, comma separated");
  synth_cmd->add_option("--mechanisms", synth_args.mechanisms, "Hidden mechanism label per series");
  synth_cmd->add_option("--active-range", synth_args.active_range, "lo,hi in nM")->capture_default_str();
  synth_cmd->add_option("--inactive-range", synth_args.inactive_range, "lo,hi in nM")->capture_default_str();
  synth_cmd->add_option("--noise", synth_args.noise, "Label flip probability")->capture_default_str();
  synth_cmd->add_option("--seed", synth_args.seed)->capture_default_str();

  std::string scm_path, builtin, dump;
  auto* causal_cmd = app.add_subcommand("causal-verify", "Compare the front-door estimate with the true P(a|do(s))");
  causal_cmd->add_option("--scm", scm_path, "SCM specification (JSON)");
  causal_cmd->add_option("--builtin", builtin, "Built-in model: thought-experiment");
  causal_cmd->add_option("--dump-scm", dump, "Write the model as JSON");

  std::string smiles_a, smiles_b;
  int radius = 2;
  std::size_t bits = 2048;
  auto* fp_cmd = app.add_subcommand("fp", "Print the fingerprint of a SMILES as hex");
  fp_cmd->add_option("smiles", smiles_a)->required();
  fp_cmd->add_option("--radius", radius)->capture_default_str();
  fp_cmd->add_option("--bits", bits)->capture_default_str();
  auto* sim_cmd = app.add_subcommand("sim", "Print the Tanimoto similarity of two SMILES");
  sim_cmd->add_option("smiles_a", smiles_a)->required();
  sim_cmd->add_option("smiles_b", smiles_b)->required();
  sim_cmd->add_option("--radius", radius)->capture_default_str();
  sim_cmd->add_option("--bits", bits)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    out << sub->help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << SARFOCUS_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return kExitConfig;
  }

  try {
    if (scan_cmd->parsed()) {
      if (scan_args.from_manifest.empty() && (scan_args.data.empty() || scan_args.series.empty())) {
        err << "error: --data and --series are required\n\n" << scan_cmd->help();
        return kExitConfig;
      }
      return cmd_scan(scan_args, out, err);
    }
    if (synth_cmd->parsed()) return cmd_synth(synth_args, out);
    if (causal_cmd->parsed()) return cmd_causal_verify(scm_path, builtin, dump, out, err);
    if (fp_cmd->parsed()) {
      out << fingerprint_of(smiles_a, fp_params(radius, bits), err).to_hex() << "\n";
      return kExitOk;
    }
    if (sim_cmd->parsed()) {
      const auto p = fp_params(radius, bits);
      out << format_double(tanimoto(fingerprint_of(smiles_a, p, err), fingerprint_of(smiles_b, p, err))) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DatasetError& e) {
    err << "error: " << file_error(e) << "\n";
    return kExitData;
  } catch (const SmilesError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const FocusError& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == FocusErrorKind::invalid_config ? kExitConfig : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace sarfocus
