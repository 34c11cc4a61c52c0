#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rcm::cli {

// Exit codes shared by all commands.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kFileError = 2;     // missing/unreadable/malformed files
inline constexpr int kParamError = 3;    // invalid or infeasible parameters
inline constexpr int kDimensionError = 4;
inline constexpr int kSolverError = 5;
inline constexpr int kVerifyFailed = 6;

struct RunConfig {
  std::string data_path;
  std::string model_path = "model.json";
  std::string out_path;
  std::string trace_path;
  std::string family = "ellipsoid";
  std::string param = "auto";
  std::optional<double> kappa_plus, kappa_minus;
  std::optional<double> rate_plus, rate_minus;
  std::string bias = "midpoint";
  double ridge = 1e-6;
  double tol = 1e-8;
  double eps = 1e-6;
  int max_iter = 10000;
  std::uint64_t seed = 0;
  int grid = 11;
};

int run_train(const RunConfig& cfg);
int run_predict(const RunConfig& cfg);
int run_eta_max(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);
int run_verify(const RunConfig& cfg);

}  // namespace rcm::cli
