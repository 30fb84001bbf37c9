#include "sra/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <thread>

#include "sra/error.hpp"
#include "sra/experiment.hpp"
#include "sra/random.hpp"
#include "sra/report.hpp"

namespace sra::cli {

namespace {

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct CommonFlags {
  std::string real;
  std::string label_col = "label";
  std::string models = "all";
  double split = 0.8;
  std::uint64_t seed = 0;
  double tie_epsilon = 0.0;
  std::string output = "-";
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());

  void add_to(CLI::App& app) {
    app.add_option("--real", real, "Real dataset CSV")->required();
    app.add_option("--label-col", label_col, "Name of the label column")->capture_default_str();
    app.add_option("--models", models, "Comma-separated model kinds, or 'all'")
        ->capture_default_str();
    app.add_option("--split", split, "Train fraction of each stratified split")
        ->capture_default_str();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
    app.add_option("--tie-epsilon", tie_epsilon, "Performance differences <= this are ties")
        ->capture_default_str();
    app.add_option("--output", output, "Report path, '-' for stdout")->capture_default_str();
    app.add_option("--workers", workers, "Maximum concurrent training tasks (results unaffected)")
        ->check(CLI::PositiveNumber);
  }

  EvalConfig config() const {
    EvalConfig cfg;
    cfg.split_ratio = split;
    cfg.master_seed = seed;
    cfg.model_pool = parse_pool(models);
    cfg.tie_epsilon = tie_epsilon;
    cfg.workers = workers;
    cfg.validate();
    return cfg;
  }

  // --workers is left out: it cannot change the report.
  void record(RunManifest& m) const {
    m.master_seed = seed;
    m.flags["--real"] = real;
    m.flags["--label-col"] = label_col;
    m.flags["--models"] = models;
    m.flags["--split"] = num(split);
    m.flags["--seed"] = std::to_string(seed);
    m.flags["--tie-epsilon"] = num(tie_epsilon);
    m.flags["--output"] = output;
  }
};

Dataset load_input(const std::string& path, const std::string& label_col, const char* role,
                   RunManifest& manifest) {
  Dataset ds = load_csv(path, label_col);
  manifest.inputs.push_back({role, path, sha256_file(path)});
  return ds;
}

void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output == "-") {
    out << text;
    return;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) throw InputError("cannot write '" + output + "'");
  f << text;
  if (!f) throw InputError("write failed for '" + output + "'");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(',', start);
    if (pos == std::string::npos) pos = text.size();
    const std::string item = text.substr(start, pos - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) {
      throw ConfigError("cannot parse p-grid entry '" + item + "'");
    }
    if (!(v >= 0.0 && v < 0.5)) {
      throw ConfigError("p-grid entry " + item + " is outside [0, 0.5)");
    }
    grid.push_back(v);
    start = pos + 1;
  }
  return grid;
}

std::string default_grid_string() {
  std::string s;
  for (double p : default_p_grid()) {
    if (!s.empty()) s += ',';
    s += num(p);
  }
  return s;
}

std::string synthetic_path_for(const std::string& out) {
  std::filesystem::path p(out);
  const auto ext = p.extension().string();
  return (p.parent_path() / (p.stem().string() + ".synthetic" + (ext.empty() ? ".csv" : ext)))
      .string();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ranking-agreement benchmark for synthetic classification data", "srabench"};
  app.require_subcommand(1);

  CommonFlags eval_flags;
  std::string synthetic;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Compute SRA, TSTR and TRTR for a pair");
  eval_flags.add_to(*evaluate_cmd);
  evaluate_cmd->add_option("--synthetic", synthetic, "Synthetic dataset CSV")->required();

  CommonFlags sweep_flags;
  std::string p_grid = default_grid_string();
  std::size_t reps = 10;
  std::string format = "json";
  auto* sweep_cmd = app.add_subcommand("sweep", "Label-flip noise sweep over p");
  sweep_flags.add_to(*sweep_cmd);
  sweep_cmd->add_option("--p-grid", p_grid, "Comma-separated flip probabilities in [0, 0.5)")
      ->capture_default_str();
  sweep_cmd->add_option("--reps", reps, "Repetitions per p")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--format", format, "json or csv")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv"}));

  CommonFlags sim_flags;
  std::string sim_synthetic;
  std::size_t steps = 20, runs = 200;
  auto* sim_cmd = app.add_subcommand("simulate", "Champion/challenger selection walk");
  sim_flags.add_to(*sim_cmd);
  sim_cmd->add_option("--synthetic", sim_synthetic, "Synthetic dataset CSV")->required();
  sim_cmd->add_option("--steps", steps, "Challengers per run")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--runs", runs, "Independent runs")->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string gen_out, gen_synth_out;
  std::size_t gen_n = 1000, gen_d = 5;
  double gen_sep = 3.0;
  std::uint64_t gen_seed = 0;
  double gen_flip = -1.0;
  std::string gen_label = "label";
  auto* gen_cmd = app.add_subcommand("gen", "Write a Gaussian-mixture demo dataset");
  gen_cmd->add_option("--out", gen_out, "Output CSV")->required();
  gen_cmd->add_option("--n", gen_n, "Rows")->capture_default_str();
  gen_cmd->add_option("--d", gen_d, "Features")->capture_default_str();
  gen_cmd->add_option("--separation", gen_sep, "Distance between class means")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--flip", gen_flip, "Also write a copy with labels flipped at this rate");
  gen_cmd->add_option("--synthetic-out", gen_synth_out,
                      "Path of the flipped copy (default: <out stem>.synthetic.csv)");
  gen_cmd->add_option("--label-col", gen_label, "Label column name")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (evaluate_cmd->parsed()) {
      RunManifest manifest;
      manifest.command = "evaluate";
      eval_flags.record(manifest);
      manifest.flags["--synthetic"] = synthetic;
      const EvalConfig cfg = eval_flags.config();
      const Dataset real = load_input(eval_flags.real, eval_flags.label_col, "real", manifest);
      const Dataset syn = load_input(synthetic, eval_flags.label_col, "synthetic", manifest);
      const auto rep = evaluate(real, syn, cfg);
      emit(report_json(rep, manifest).dump(2) + "\n", eval_flags.output, out);
    } else if (sweep_cmd->parsed()) {
      RunManifest manifest;
      manifest.command = "sweep";
      sweep_flags.record(manifest);
      manifest.flags["--p-grid"] = p_grid;
      manifest.flags["--reps"] = std::to_string(reps);
      manifest.flags["--format"] = format;
      const auto grid = parse_grid(p_grid);
      const EvalConfig cfg = sweep_flags.config();
      const Dataset real = load_input(sweep_flags.real, sweep_flags.label_col, "real", manifest);
      const auto result = noise_sweep(real, grid, reps, cfg);
      emit(format == "csv" ? sweep_csv(result, manifest, cfg)
                           : sweep_json(result, manifest, cfg).dump(2) + "\n",
           sweep_flags.output, out);
    } else if (sim_cmd->parsed()) {
      RunManifest manifest;
      manifest.command = "simulate";
      sim_flags.record(manifest);
      manifest.flags["--synthetic"] = sim_synthetic;
      manifest.flags["--steps"] = std::to_string(steps);
      manifest.flags["--runs"] = std::to_string(runs);
      const EvalConfig cfg = sim_flags.config();
      const Dataset real = load_input(sim_flags.real, sim_flags.label_col, "real", manifest);
      const Dataset syn = load_input(sim_synthetic, sim_flags.label_col, "synthetic", manifest);
      const auto sel = simulate_selection(real, syn, cfg, steps, runs);
      emit(selection_json(sel, manifest, cfg).dump(2) + "\n", sim_flags.output, out);
    } else if (gen_cmd->parsed()) {
      const Dataset ds = gen_gaussian_mixture(gen_n, gen_d, gen_sep, gen_seed);
      write_csv(ds, gen_out, gen_label);
      if (gen_cmd->count("--flip") > 0) {
        if (!(gen_flip >= 0.0 && gen_flip <= 1.0)) {
          throw ConfigError("--flip must be in [0,1], got " + num(gen_flip));
        }
        const std::string path = gen_synth_out.empty() ? synthetic_path_for(gen_out) : gen_synth_out;
        write_csv(flip_labels(ds, gen_flip, derive_seed(gen_seed, "gen-flip")), path, gen_label);
      } else if (!gen_synth_out.empty()) {
        throw ConfigError("--synthetic-out requires --flip");
      }
    }
  } catch (const DegenerateDataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace sra::cli
