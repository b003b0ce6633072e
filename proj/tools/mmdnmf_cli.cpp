// Command-line front end: synth, fit, eval, compare.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "mmdnmf/mmdnmf.hpp"

namespace {

struct SolverFlags {
  mmdnmf::SolverConfig config;
  std::string slack_mode = "direct";

  void attach(CLI::App* app) {
    app->add_option("--rank", config.rank, "Factorization rank m")->capture_default_str();
    app->add_option("--a", config.a, "Weight on the largest within-class distance")->capture_default_str();
    app->add_option("--b", config.b, "Weight on the smallest between-class distance")->capture_default_str();
    app->add_option("--max-iter", config.max_iter, "Iteration cap")->capture_default_str();
    app->add_option("--tol", config.tol, "Relative objective-change stopping threshold")->capture_default_str();
    app->add_option("--seed", config.seed, "Initialization seed")->capture_default_str();
    app->add_option("--slack-mode", slack_mode, "Slack update rule")
        ->check(CLI::IsMember({"paper", "direct"}))
        ->capture_default_str();
  }

  [[nodiscard]] mmdnmf::SolverConfig resolved() const {
    auto c = config;
    c.slack_mode = mmdnmf::parse_slack_mode(slack_mode);
    return c;
  }
};

struct InputFlags {
  std::string path;
  std::string label_col = "label";
  char delimiter = ',';

  void attach(CLI::App* app, const char* help = "Delimited text file, one sample per row") {
    app->add_option("--input", path, help)->required();
    app->add_option("--label-col", label_col, "Name of the label column")->capture_default_str();
    app->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();
  }

  [[nodiscard]] mmdnmf::Dataset load() const { return mmdnmf::load_dataset(path, label_col, delimiter); }
};

// Writes to `path`, or standard output when it is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw mmdnmf::IoError("cannot write '" + path + "'");
  write(out);
  if (!out) throw mmdnmf::IoError("write to '" + path + "' failed");
}

int exit_code_for(const mmdnmf::Error& e) {
  if (dynamic_cast<const mmdnmf::ConfigError*>(&e)) return 2;
  if (dynamic_cast<const mmdnmf::IoError*>(&e)) return 3;
  if (dynamic_cast<const mmdnmf::ValidationError*>(&e) || dynamic_cast<const mmdnmf::SchemaError*>(&e)) return 4;
  if (dynamic_cast<const mmdnmf::InfeasibleError*>(&e)) return 5;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-min distance nonnegative matrix factorization"};
  app.set_version_flag("--version", std::string(mmdnmf::kVersion));
  app.require_subcommand(1);

  std::string output;
  bool quiet = false;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic dataset");
  std::size_t classes = 3, per_class = 20, dim = 20;
  double separation = 6.0;
  std::uint64_t synth_seed = 0;
  synth->add_option("--classes", classes)->capture_default_str();
  synth->add_option("--per-class", per_class)->capture_default_str();
  synth->add_option("--dim", dim)->capture_default_str();
  synth->add_option("--separation", separation)->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--output", output, "Output CSV (default: stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "Factorize a dataset and write the fitted model");
  InputFlags fit_input;
  SolverFlags fit_solver;
  std::string method = "mmdnmf";
  fit_input.attach(fit);
  fit_solver.attach(fit);
  fit->add_option("--method", method)->check(CLI::IsMember({"mmdnmf", "baseline"}))->capture_default_str();
  fit->add_option("--output", output, "Output report (default: stdout)");
  fit->add_flag("--quiet", quiet, "Omit the per-iteration trace");

  // eval
  auto* eval = app.add_subcommand("eval", "Score held-out samples against a fitted model");
  std::string model_path;
  InputFlags eval_input;
  std::size_t k = 1;
  std::size_t projection_iters = mmdnmf::kDefaultProjectionIters;
  eval->add_option("--model", model_path, "Report written by 'fit'")->required();
  eval_input.attach(eval, "Held-out samples in the training file layout");
  eval->add_option("--k", k, "Neighbours in the k-NN vote")->capture_default_str();
  eval->add_option("--projection-iters", projection_iters)->capture_default_str();
  eval->add_option("--output", output, "Output report (default: stdout)");

  // compare
  auto* compare = app.add_subcommand("compare", "Split, fit baseline and supervised models, and compare them");
  InputFlags cmp_input;
  SolverFlags cmp_solver;
  double test_fraction = 0.25;
  std::uint64_t split_seed = 0;
  cmp_input.attach(compare);
  cmp_solver.attach(compare);
  compare->add_option("--test-fraction", test_fraction)->capture_default_str();
  compare->add_option("--split-seed", split_seed)->capture_default_str();
  compare->add_option("--k", k)->capture_default_str();
  compare->add_option("--projection-iters", projection_iters)->capture_default_str();
  compare->add_option("--output", output, "Output report (default: stdout)");
  compare->add_flag("--quiet", quiet, "Omit the per-iteration traces");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const auto data = mmdnmf::generate_synthetic(classes, per_class, dim, separation, synth_seed);
      emit(output, [&](std::ostream& out) { mmdnmf::write_dataset(out, data); });
    } else if (*fit) {
      const auto data = fit_input.load();
      const auto model = mmdnmf::fit_model(data, fit_solver.resolved(), method);
      emit(output, [&](std::ostream& out) { mmdnmf::write_model(out, model, !quiet); });
    } else if (*eval) {
      std::ifstream in(model_path);
      if (!in) throw mmdnmf::IoError("cannot open '" + model_path + "'");
      const auto model = mmdnmf::read_model(in);
      const auto test = eval_input.load();
      const auto result = mmdnmf::evaluate_model(model, test, projection_iters, k);
      emit(output, [&](std::ostream& out) {
        mmdnmf::json doc{{"kind", "eval"}, {"version", std::string(mmdnmf::kVersion)},
                         {"method", model.method}, {"test_count", test.matrix.cols()}, {"eval", result}};
        out << doc.dump(2) << '\n';
      });
    } else if (*compare) {
      const auto data = cmp_input.load();
      const auto report =
          mmdnmf::run_experiment(data, cmp_solver.resolved(), test_fraction, split_seed, projection_iters, k);
      emit(output, [&](std::ostream& out) { mmdnmf::write_report(out, report, !quiet); });
    }
  } catch (const mmdnmf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
