#include <CLI11.hpp>

#include "rcm/cli.hpp"

namespace {

void add_family_flags(CLI::App* cmd, rcm::cli::RunConfig& cfg) {
  cmd->add_option("--family", cfg.family,
                  "uncertainty-set family: ch|rch|ellipsoid|fda")
      ->check(CLI::IsMember({"ch", "rch", "ellipsoid", "fda"}))
      ->capture_default_str();
  cmd->add_option("--param", cfg.param,
                  "family-native parameter (nu / kappa / zeta) or 'auto'")
      ->capture_default_str();
  cmd->add_option("--kappa-plus", cfg.kappa_plus,
                  "positive-class radius (ellipsoid family)");
  cmd->add_option("--kappa-minus", cfg.kappa_minus,
                  "negative-class radius (ellipsoid family)");
  cmd->add_option("--rate-plus", cfg.rate_plus,
                  "acceptable error rate, converted to kappa-plus");
  cmd->add_option("--rate-minus", cfg.rate_minus,
                  "acceptable error rate, converted to kappa-minus");
  cmd->add_option("--ridge", cfg.ridge, "relative covariance ridge")
      ->capture_default_str();
}

void add_solver_flags(CLI::App* cmd, rcm::cli::RunConfig& cfg) {
  cmd->add_option("--tol", cfg.tol, "nearest-point gap tolerance")
      ->capture_default_str();
  cmd->add_option("--eps", cfg.eps,
                  "local-search stopping threshold / bisection tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "outer iteration cap")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust worst-case-separation classifiers: train, predict and "
               "verify over convex-hull, reduced-hull and ellipsoidal "
               "uncertainty sets"};
  app.require_subcommand(1);
  rcm::cli::RunConfig cfg;

  auto* train = app.add_subcommand("train", "train a classifier from CSV");
  train->add_option("--data", cfg.data_path, "training CSV")->required();
  add_family_flags(train, cfg);
  add_solver_flags(train, cfg);
  train->add_option("--bias", cfg.bias, "bias rule: midpoint|threshold")
      ->check(CLI::IsMember({"midpoint", "threshold"}))
      ->capture_default_str();
  train->add_option("--out", cfg.out_path, "model output path [model.json]");
  train->add_option("--trace", cfg.trace_path, "iteration trace output path");

  auto* predict = app.add_subcommand("predict", "predict labels with a model");
  predict->add_option("--data", cfg.data_path, "input CSV")->required();
  predict->add_option("--model", cfg.model_path, "model file")
      ->capture_default_str();
  predict->add_option("--out", cfg.out_path,
                      "predictions output path [predictions.csv]");

  auto* etamax = app.add_subcommand(
      "eta-max", "critical parameter (nu_min / kappa_max / zeta_max)");
  etamax->add_option("--data", cfg.data_path, "training CSV")->required();
  add_family_flags(etamax, cfg);
  add_solver_flags(etamax, cfg);

  auto* sweep = app.add_subcommand(
      "sweep", "optimal value across the parameter range, as CSV");
  sweep->add_option("--data", cfg.data_path, "training CSV")->required();
  add_family_flags(sweep, cfg);
  add_solver_flags(sweep, cfg);
  sweep->add_option("--grid", cfg.grid, "number of grid points")
      ->capture_default_str();
  sweep->add_option("--out", cfg.out_path, "sweep output path [sweep.csv]");

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--seed", cfg.seed, "random seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return rcm::cli::run_train(cfg);
  if (predict->parsed()) return rcm::cli::run_predict(cfg);
  if (etamax->parsed()) return rcm::cli::run_eta_max(cfg);
  if (sweep->parsed()) return rcm::cli::run_sweep(cfg);
  if (verify->parsed()) return rcm::cli::run_verify(cfg);
  return rcm::cli::kUsageError;
}
