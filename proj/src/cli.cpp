#include "rcm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>

#include "rcm/io.hpp"
#include "rcm/model.hpp"
#include "rcm/oracle.hpp"
#include "rcm/verify.hpp"

namespace rcm::cli {

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFileError;
  } catch (const LabelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFileError;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDimensionError;
  } catch (const InfeasibleRCH& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParamError;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParamError;
  } catch (const InvalidRate& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParamError;
  } catch (const InvalidBracket& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParamError;
  } catch (const EmptyClass& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParamError;
  } catch (const NotSeparated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  } catch (const SubproblemUnbounded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFileError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

struct FamilyParams {
  Family family;
  ParamSpec param;
  double shape_plus = 1.0, shape_minus = 1.0;
};

FamilyParams resolve_family_params(const RunConfig& cfg) {
  FamilyParams fp;
  fp.family = family_from_name(cfg.family);

  const bool has_kappas = cfg.kappa_plus || cfg.kappa_minus;
  const bool has_rates = cfg.rate_plus || cfg.rate_minus;
  const bool has_param = cfg.param != "auto";

  if (fp.family != Family::Ellipsoid && (has_kappas || has_rates))
    throw InvalidParameter("kappa/rate flags apply to the ellipsoid family");
  if (has_kappas && has_rates)
    throw InvalidParameter("give either kappa or rate overrides, not both");
  if ((has_kappas || has_rates) && has_param)
    throw InvalidParameter(
        "give either --param or per-class overrides, not both");
  if (has_kappas && (!cfg.kappa_plus || !cfg.kappa_minus))
    throw InvalidParameter("both --kappa-plus and --kappa-minus are required");
  if (has_rates && (!cfg.rate_plus || !cfg.rate_minus))
    throw InvalidParameter("both --rate-plus and --rate-minus are required");

  if (has_kappas || has_rates) {
    const double kp =
        has_kappas ? *cfg.kappa_plus : kappa_from_rate(*cfg.rate_plus);
    const double km =
        has_kappas ? *cfg.kappa_minus : kappa_from_rate(*cfg.rate_minus);
    if (kp < 0 || km < 0)
      throw InvalidParameter("radii must be >= 0");
    fp.shape_plus = kp;
    fp.shape_minus = km;
    fp.param = ParamSpec::native(std::max(kp, km));
    return fp;
  }

  if (!has_param) {
    fp.param = ParamSpec::automatic();
    return fp;
  }
  if (fp.family == Family::ConvexHull)
    throw InvalidParameter("family ch takes no parameter");
  char* end = nullptr;
  const double v = std::strtod(cfg.param.c_str(), &end);
  if (end != cfg.param.c_str() + cfg.param.size())
    throw InvalidParameter("--param must be a number or 'auto'");
  fp.param = ParamSpec::native(v);
  return fp;
}

TrainConfig train_config(const RunConfig& cfg) {
  TrainConfig tc;
  tc.ridge_factor = cfg.ridge;
  tc.np_tol = cfg.tol;
  tc.eta_cfg.np_tol = cfg.tol;
  tc.eta_cfg.tol = cfg.eps;
  tc.search.epsilon = cfg.eps;
  tc.search.max_outer = cfg.max_iter;
  tc.search.seed = cfg.seed;
  tc.bias = bias_method_from_name(cfg.bias);
  return tc;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string native_param_label(Family f) {
  switch (f) {
    case Family::ReducedConvexHull: return "nu_min";
    case Family::Ellipsoid: return "kappa_max";
    case Family::Fda: return "zeta_max";
    default: return "eta_max";
  }
}

std::string eta_max_text(const TrainedModel& m) {
  if (m.eta_max_native) return fmt(*m.eta_max_native);
  return eta_max_status_name(m.eta_max_status);
}

PairBuilder builder_from_config(const RunConfig& cfg, const Dataset& data,
                                const FamilyParams& fp) {
  double ridge = 0.0;
  if (fp.family == Family::Ellipsoid || fp.family == Family::Fda) {
    const ClassMoments raw_p = estimate_moments(data, +1, 0.0);
    const ClassMoments raw_m = estimate_moments(data, -1, 0.0);
    ridge = std::max(relative_ridge(raw_p.cov, cfg.ridge),
                     relative_ridge(raw_m.cov, cfg.ridge));
    if (ridge <= 0) ridge = cfg.ridge;
  }
  return PairBuilder::from_dataset(data, fp.family, ridge, fp.shape_plus,
                                   fp.shape_minus);
}

}  // namespace

int run_train(const RunConfig& cfg) {
  return guarded([&] {
    const FamilyParams fp = resolve_family_params(cfg);
    const Dataset data = ingest_csv(cfg.data_path);
    const TrainConfig tc = train_config(cfg);
    const TrainedModel model = train(data, fp.family, fp.param, tc,
                                     fp.shape_plus, fp.shape_minus);
    const std::string out =
        cfg.out_path.empty() ? std::string("model.json") : cfg.out_path;
    save_model(out, model);
    if (!cfg.trace_path.empty()) save_trace(cfg.trace_path, model.trace);
    const Metrics m = evaluate(model, data);
    std::cout << "family=" << family_name(model.family)
              << " param=" << (std::isnan(model.param) ? "n/a" : fmt(model.param))
              << " eta_max=" << eta_max_text(model)
              << " regime=" << regime_name(model.regime)
              << " g_value=" << fmt(model.g_value)
              << " train_error=" << fmt(m.error_rate) << "\n";
    return kOk;
  });
}

int run_predict(const RunConfig& cfg) {
  return guarded([&] {
    const TrainedModel model = load_model(cfg.model_path);
    const auto rows = ingest_features(cfg.data_path, model.w.size());
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (const auto& x : rows) labels.push_back(predict(model, x));
    const std::string out =
        cfg.out_path.empty() ? std::string("predictions.csv") : cfg.out_path;
    write_predictions(out, labels);
    std::cout << "predicted " << labels.size() << " rows -> " << out << "\n";
    return kOk;
  });
}

int run_eta_max(const RunConfig& cfg) {
  return guarded([&] {
    const FamilyParams fp = resolve_family_params(cfg);
    if (fp.family == Family::ConvexHull)
      throw InvalidParameter("family ch has no growth parameter");
    const Dataset data = ingest_csv(cfg.data_path);
    const PairBuilder builder = builder_from_config(cfg, data, fp);
    EtaMaxConfig ec;
    ec.tol = cfg.eps;
    ec.np_tol = cfg.tol;
    const EtaMaxResult em = eta_max_auto(builder, ec);
    if (em.status == EtaMaxStatus::Found ||
        em.status == EtaMaxStatus::AlwaysIntersects) {
      std::cout << native_param_label(fp.family) << " = "
                << fmt(builder.native_from_eta(em.eta_max)) << "\n";
    } else {
      std::cout << native_param_label(fp.family) << " = "
                << eta_max_status_name(em.status) << "\n";
    }
    return kOk;
  });
}

int run_sweep(const RunConfig& cfg) {
  return guarded([&] {
    const FamilyParams fp = resolve_family_params(cfg);
    if (fp.family == Family::ConvexHull)
      throw InvalidParameter("family ch has no growth parameter to sweep");
    if (cfg.grid < 2) throw InvalidParameter("--grid must be >= 2");
    const Dataset data = ingest_csv(cfg.data_path);
    const PairBuilder builder = builder_from_config(cfg, data, fp);

    SweepConfig sc;
    sc.eta_cfg.tol = cfg.eps;
    sc.eta_cfg.np_tol = cfg.tol;
    double hi;
    if (fp.family == Family::ReducedConvexHull) {
      hi = builder.eta_hi();
    } else {
      const EtaMaxResult em = eta_max_auto(builder, sc.eta_cfg);
      if (em.status != EtaMaxStatus::Found)
        throw InvalidParameter(
            "sweep range undefined: sets " +
            std::string(eta_max_status_name(em.status)));
      hi = 2.0 * em.eta_max;
    }
    std::vector<double> grid;
    for (int i = 0; i < cfg.grid; ++i)
      grid.push_back(hi * i / (cfg.grid - 1));
    const auto sweep = eta_sweep(builder, grid, sc);

    std::vector<std::pair<double, double>> rows;
    rows.reserve(sweep.size());
    for (const auto& p : sweep)
      rows.emplace_back(builder.native_from_eta(p.eta), p.value);
    const std::string out =
        cfg.out_path.empty() ? std::string("sweep.csv") : cfg.out_path;
    write_sweep_csv(out, rows);
    std::cout << "wrote " << rows.size() << " rows -> " << out << "\n";
    return kOk;
  });
}

int run_verify(const RunConfig& cfg) {
  return guarded([&] {
    const auto suites = verify::run_all_suites(cfg.seed);
    int failed = 0;
    for (const auto& s : suites) {
      std::cout << s.name << ": " << (s.passed() ? "PASS" : "FAIL") << " ("
                << s.checks << " checks";
      if (!s.passed()) std::cout << ", " << s.failures << " failures";
      std::cout << ")\n";
      for (const auto& msg : s.messages) std::cout << "  - " << msg << "\n";
      if (!s.passed()) ++failed;
    }
    return failed == 0 ? kOk : kVerifyFailed;
  });
}

}  // namespace rcm::cli
