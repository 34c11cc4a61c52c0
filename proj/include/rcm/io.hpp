#pragma once

#include <string>
#include <vector>

#include "rcm/dataset.hpp"
#include "rcm/model.hpp"

namespace rcm {

/// CSV dataset reader: first column label (+1 / 1 / -1), remaining columns
/// numeric features; a first row whose first token is non-numeric is treated
/// as a header and skipped. Throws FormatError / LabelError with the 1-based
/// line number, EmptyClass when a class is missing.
Dataset ingest_csv(const std::string& path);

/// Feature rows for prediction: rows with d fields are raw features, rows
/// with d+1 fields carry a leading label that is ignored.
std::vector<Vector> ingest_features(const std::string& path, Eigen::Index d);

/// Flat JSON model document with numbers at 17 significant digits; identical
/// models serialize byte-identically.
void save_model(const std::string& path, const TrainedModel& model);
TrainedModel load_model(const std::string& path);
std::string model_to_json(const TrainedModel& model);

/// JSON array of per-iteration records of the non-convex search.
void save_trace(const std::string& path, const SolveTrace& trace);

void write_predictions(const std::string& path, const std::vector<int>& labels);

/// CSV of (family-native parameter, optimal value) rows in grid order.
void write_sweep_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& rows);

}  // namespace rcm
