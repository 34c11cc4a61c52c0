#include "rcm/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace rcm {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

int parse_label(const std::string& s, int line_no) {
  if (s == "+1" || s == "1") return +1;
  if (s == "-1") return -1;
  throw LabelError(line_no, "label '" + s + "' is not +1/1/-1");
}

}  // namespace

Dataset ingest_csv(const std::string& path) {
  const auto lines = read_lines(path);
  Dataset data;
  std::size_t expected_fields = 0;
  bool first_content_row = true;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    if (lines[li].empty()) continue;
    const auto fields = split_fields(lines[li]);
    if (first_content_row) {
      double tmp;
      if (!parse_double(fields[0], tmp)) {
        first_content_row = false;  // header row
        continue;
      }
    }
    first_content_row = false;
    if (fields.size() < 2)
      throw FormatError(line_no, "need a label and at least one feature");
    if (expected_fields == 0) expected_fields = fields.size();
    if (fields.size() != expected_fields)
      throw FormatError(line_no,
                        "expected " + std::to_string(expected_fields) +
                            " fields, got " + std::to_string(fields.size()));
    const int label = parse_label(fields[0], line_no);
    Vector x(static_cast<Eigen::Index>(fields.size()) - 1);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v;
      if (!parse_double(fields[j], v))
        throw FormatError(line_no, "field '" + fields[j] + "' is not numeric");
      x[static_cast<Eigen::Index>(j) - 1] = v;
    }
    data.add(std::move(x), label);
  }
  data.require_both_classes();
  return data;
}

std::vector<Vector> ingest_features(const std::string& path, Eigen::Index d) {
  const auto lines = read_lines(path);
  std::vector<Vector> rows;
  bool first_content_row = true;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    if (lines[li].empty()) continue;
    const auto fields = split_fields(lines[li]);
    if (first_content_row) {
      double tmp;
      if (!parse_double(fields[0], tmp)) {
        first_content_row = false;
        continue;
      }
    }
    first_content_row = false;
    std::size_t start;
    if (fields.size() == static_cast<std::size_t>(d))
      start = 0;
    else if (fields.size() == static_cast<std::size_t>(d) + 1)
      start = 1;  // labeled row; label ignored
    else
      throw FormatError(line_no, "expected " + std::to_string(d) + " or " +
                                     std::to_string(d + 1) + " fields");
    Vector x(d);
    for (std::size_t j = start; j < fields.size(); ++j) {
      double v;
      if (!parse_double(fields[j], v))
        throw FormatError(line_no, "field '" + fields[j] + "' is not numeric");
      x[static_cast<Eigen::Index>(j - start)] = v;
    }
    rows.push_back(std::move(x));
  }
  return rows;
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "null";
  if (v == 0.0) return "0";  // normalize the sign of zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_vector(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt_double(v[i]);
  }
  return s + "]";
}

}  // namespace

std::string model_to_json(const TrainedModel& m) {
  std::string s = "{\n";
  s += "  \"schema_version\": 1,\n";
  s += "  \"family\": \"" + family_name(m.family) + "\",\n";
  if (m.family == Family::Ellipsoid && m.kappa_plus != m.kappa_minus)
    s += "  \"param\": [" + fmt_double(m.kappa_plus) + ", " +
         fmt_double(m.kappa_minus) + "],\n";
  else
    s += "  \"param\": " + fmt_double(m.param) + ",\n";
  if (m.eta_max_native)
    s += "  \"eta_max\": " + fmt_double(*m.eta_max_native) + ",\n";
  else
    s += "  \"eta_max\": \"" +
         std::string(eta_max_status_name(m.eta_max_status)) + "\",\n";
  s += "  \"regime\": \"" + std::string(regime_name(m.regime)) + "\",\n";
  s += "  \"w\": " + fmt_vector(m.w) + ",\n";
  s += "  \"b\": " + fmt_double(m.b) + ",\n";
  s += "  \"g_value\": " + fmt_double(m.g_value) + ",\n";
  s += "  \"bias_method\": \"" + std::string(bias_method_name(m.bias_method)) +
       "\",\n";
  s += "  \"d\": " + std::to_string(m.w.size()) + "\n";
  s += "}\n";
  return s;
}

void save_model(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << model_to_json(model);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("model file '" + path + "': " + e.what());
  }
  TrainedModel m;
  m.family = family_from_name(j.at("family").get<std::string>());
  const auto& param = j.at("param");
  if (param.is_array()) {
    m.kappa_plus = param.at(0).get<double>();
    m.kappa_minus = param.at(1).get<double>();
    m.param = std::max(m.kappa_plus, m.kappa_minus);
  } else if (param.is_null()) {
    m.param = std::numeric_limits<double>::quiet_NaN();
  } else {
    m.param = param.get<double>();
    if (m.family == Family::Ellipsoid) m.kappa_plus = m.kappa_minus = m.param;
  }
  const auto& em = j.at("eta_max");
  if (em.is_number()) {
    m.eta_max_native = em.get<double>();
    m.eta_max_status = EtaMaxStatus::Found;
  } else {
    const std::string s = em.get<std::string>();
    m.eta_max_status = s == "never_intersects" ? EtaMaxStatus::NeverIntersects
                       : s == "always_intersects"
                           ? EtaMaxStatus::AlwaysIntersects
                           : EtaMaxStatus::NotApplicable;
  }
  const std::string regime = j.at("regime").get<std::string>();
  m.regime = regime == "strictly_separated" ? Regime::StrictlySeparated
             : regime == "touching"         ? Regime::Touching
                                            : Regime::Overlapping;
  const auto wj = j.at("w");
  m.w = Vector(wj.size());
  for (std::size_t i = 0; i < wj.size(); ++i)
    m.w[static_cast<Eigen::Index>(i)] = wj.at(i).get<double>();
  m.b = j.at("b").get<double>();
  m.g_value = j.at("g_value").get<double>();
  m.bias_method = bias_method_from_name(j.at("bias_method").get<std::string>());
  if (j.at("d").get<Eigen::Index>() != m.w.size())
    throw Error("model file '" + path + "': d does not match w");
  return m;
}

void save_trace(const std::string& path, const SolveTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "[\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    out << "  {\"t\": " << r.t << ", \"w_tilde\": " << fmt_vector(r.w_tilde)
        << ", \"w_hat\": " << fmt_vector(r.w_hat)
        << ", \"g\": " << fmt_double(r.g_tilde)
        << ", \"step_norm\": " << fmt_double(r.step_norm)
        << ", \"inner_iterations\": " << r.inner_iterations << "}"
        << (i + 1 < trace.records.size() ? "," : "") << "\n";
  }
  out << "]\n";
}

void write_predictions(const std::string& path,
                       const std::vector<int>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  for (int y : labels) out << (y > 0 ? "+1" : "-1") << "\n";
}

void write_sweep_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "param,value\n";
  for (const auto& [p, v] : rows)
    out << fmt_double(p) << "," << fmt_double(v) << "\n";
}

}  // namespace rcm
