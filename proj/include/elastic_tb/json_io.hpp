#pragma once

// Versioned JSON documents for alignments, models, bands, factors, scores,
// surfaces and coverage reports. Every document carries a "schema" string of
// the form "elastic_tb.<kind>/<version>"; readers reject other kinds and
// versions. Keys are written in a fixed order, so equal inputs give equal bytes.

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include "elastic_tb/bootstrap.hpp"
#include "elastic_tb/errors.hpp"
#include "elastic_tb/groupwise.hpp"
#include "elastic_tb/joint_fpca.hpp"
#include "elastic_tb/simulate.hpp"
#include "elastic_tb/tolerance_region.hpp"

namespace elastic_tb {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string schema_name(const std::string& kind) {
  return "elastic_tb." + kind + "/" + std::to_string(kSchemaVersion);
}

namespace detail {

inline Json header(const std::string& kind) {
  Json j;
  j["schema"] = schema_name(kind);
  return j;
}

inline void expect_schema(const Json& j, const std::string& kind) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
    throw ConfigError("json: document has no schema field");
  const std::string got = j["schema"].get<std::string>();
  if (got != schema_name(kind)) throw ConfigError("json: expected schema " + schema_name(kind) + ", found " + got);
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("json: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("json: bad field '") + key + "': " + e.what());
  }
}

inline std::vector<Vec> rows(const Json& j, const char* key) { return field<std::vector<Vec>>(j, key); }

}  // namespace detail

/// Parses text, mapping syntax errors to ParseError with the line number.
inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw ParseError(std::string("json: ") + e.what(), line);
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Dataset -----------------------------------------------------------------

inline Json to_json(const DatasetTable& t) {
  t.validate();
  Json j = detail::header("dataset");
  j["grid"] = t.grid;
  j["labels"] = t.labels;
  j["functions"] = t.functions;
  return j;
}

inline DatasetTable dataset_from_json(const Json& j) {
  detail::expect_schema(j, "dataset");
  DatasetTable t;
  t.grid = detail::field<Vec>(j, "grid");
  t.labels = detail::field<std::vector<std::string>>(j, "labels");
  t.functions = detail::rows(j, "functions");
  try {
    t.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("json: ") + e.what());
  }
  return t;
}

// Alignment ---------------------------------------------------------------

inline Json to_json(const AlignmentResult& ar) {
  Json j = detail::header("alignment");
  std::vector<Vec> f, fa, qa, g, v;
  for (std::size_t i = 0; i < ar.size(); ++i) {
    f.push_back(ar.functions[i].values);
    fa.push_back(ar.aligned_functions[i].values);
    qa.push_back(ar.aligned_srsfs[i].q);
    g.push_back(ar.warps[i].gamma);
    v.push_back(ar.shooting_vectors[i].v);
  }
  j["n"] = ar.size();
  j["converged"] = ar.converged;
  j["iterations"] = ar.iterations;
  j["grid"] = ar.grid;
  j["functions"] = f;
  j["aligned_functions"] = fa;
  j["aligned_srsfs"] = qa;
  j["warps"] = g;
  j["amplitude_mean"] = ar.amplitude_mean.q;
  j["warp_mean"] = ar.warp_mean.gamma;
  j["warp_mean_psi"] = ar.warp_mean_psi.psi;
  j["shooting_vectors"] = v;
  return j;
}

inline AlignmentResult alignment_from_json(const Json& j) {
  detail::expect_schema(j, "alignment");
  AlignmentResult ar;
  ar.grid = detail::field<Vec>(j, "grid");
  ar.converged = detail::field<bool>(j, "converged");
  ar.iterations = detail::field<std::size_t>(j, "iterations");
  const auto f = detail::rows(j, "functions");
  const auto fa = detail::rows(j, "aligned_functions");
  const auto qa = detail::rows(j, "aligned_srsfs");
  const auto g = detail::rows(j, "warps");
  const auto v = detail::rows(j, "shooting_vectors");
  const std::size_t n = f.size();
  if (fa.size() != n || qa.size() != n || g.size() != n || v.size() != n)
    throw ConfigError("json: alignment arrays differ in length");
  ar.amplitude_mean = {ar.grid, detail::field<Vec>(j, "amplitude_mean")};
  ar.warp_mean = {ar.grid, detail::field<Vec>(j, "warp_mean")};
  ar.warp_mean_psi = {ar.grid, detail::field<Vec>(j, "warp_mean_psi")};
  for (std::size_t i = 0; i < n; ++i) {
    ar.functions.push_back({ar.grid, f[i]});
    ar.aligned_functions.push_back({ar.grid, fa[i]});
    ar.aligned_srsfs.push_back({ar.grid, qa[i]});
    ar.warps.push_back({ar.grid, g[i]});
    ar.shooting_vectors.push_back({ar.grid, v[i], ar.warp_mean_psi});
  }
  for (const auto& row : {f, fa, qa, g, v})
    for (const auto& r : row)
      if (r.size() != ar.grid.size()) throw ConfigError("json: alignment row length does not match the grid");
  validate_grid(ar.grid, "alignment");
  return ar;
}

// Model -------------------------------------------------------------------

inline Json to_json(const JointFpcaModel& m) {
  Json j = detail::header("model");
  j["sample_size_n"] = m.sample_size_n;
  j["retained_k"] = m.retained_k;
  j["scale_c"] = m.scale_c;
  j["degenerate"] = m.degenerate;
  j["initial_value"] = m.initial_value;
  j["explained_fraction"] = m.explained_fraction();
  j["variances"] = m.variances;
  j["spectrum"] = m.spectrum;
  j["grid"] = m.grid;
  j["mean"] = m.mean;
  j["warp_mean_psi"] = m.warp_mean_psi.psi;
  j["basis"] = m.basis;
  return j;
}

inline JointFpcaModel model_from_json(const Json& j) {
  detail::expect_schema(j, "model");
  JointFpcaModel m;
  m.sample_size_n = detail::field<std::size_t>(j, "sample_size_n");
  m.retained_k = detail::field<std::size_t>(j, "retained_k");
  m.scale_c = detail::field<double>(j, "scale_c");
  m.degenerate = detail::field<bool>(j, "degenerate");
  m.initial_value = detail::field<double>(j, "initial_value");
  m.variances = detail::field<Vec>(j, "variances");
  m.spectrum = detail::field<Vec>(j, "spectrum");
  m.grid = detail::field<Vec>(j, "grid");
  m.mean = detail::field<Vec>(j, "mean");
  m.warp_mean_psi = {m.grid, detail::field<Vec>(j, "warp_mean_psi")};
  m.basis = detail::rows(j, "basis");
  validate_grid(m.grid, "model");
  const std::size_t dim = 2 * m.grid.size();
  if (m.mean.size() != dim || m.warp_mean_psi.psi.size() != m.grid.size())
    throw ConfigError("json: model vectors do not match the grid");
  if (m.basis.size() != m.retained_k || m.variances.size() != m.retained_k)
    throw ConfigError("json: model basis does not match retained_k");
  for (const auto& u : m.basis)
    if (u.size() != dim) throw ConfigError("json: model basis vector has the wrong length");
  if (!(m.scale_c > 0.0)) throw ConfigError("json: model scale_c must be positive");
  return m;
}

// Band --------------------------------------------------------------------

inline Json to_json(const ToleranceBand& b) {
  Json j = detail::header("band");
  j["coverage"] = b.coverage;
  j["confidence"] = b.confidence;
  j["replicates"] = b.replicates;
  j["per_replicate_n"] = b.per_replicate_n;
  j["aggregation"] = to_string(b.aggregation);
  j["seed"] = b.seed;
  j["degenerate"] = b.degenerate;
  j["clamped"] = b.clamped;
  j["grid"] = b.grid;
  j["amplitude"] = {{"lower", b.amplitude_lower.values},
                    {"median", b.amplitude_median.values},
                    {"upper", b.amplitude_upper.values},
                    {"lower_srsf", b.amplitude_lower_srsf.q},
                    {"median_srsf", b.amplitude_median_srsf.q},
                    {"upper_srsf", b.amplitude_upper_srsf.q}};
  j["phase"] = {{"lower", b.phase_lower.gamma},
                {"median", b.phase_median.gamma},
                {"upper", b.phase_upper.gamma},
                {"lower_psi", b.phase_lower_psi.psi},
                {"median_psi", b.phase_median_psi.psi},
                {"upper_psi", b.phase_upper_psi.psi}};
  return j;
}

inline ToleranceBand band_from_json(const Json& j) {
  detail::expect_schema(j, "band");
  ToleranceBand b;
  b.coverage = detail::field<double>(j, "coverage");
  b.confidence = detail::field<double>(j, "confidence");
  b.replicates = detail::field<std::size_t>(j, "replicates");
  b.per_replicate_n = detail::field<std::size_t>(j, "per_replicate_n");
  b.aggregation = parse_aggregation(detail::field<std::string>(j, "aggregation"));
  b.seed = detail::field<std::uint64_t>(j, "seed");
  b.degenerate = detail::field<bool>(j, "degenerate");
  b.clamped = detail::field<std::size_t>(j, "clamped");
  b.grid = detail::field<Vec>(j, "grid");
  validate_grid(b.grid, "band");
  const Json& a = j.at("amplitude");
  const Json& p = j.at("phase");
  auto vec = [&](const Json& o, const char* key) {
    Vec v = detail::field<Vec>(o, key);
    if (v.size() != b.grid.size()) throw ConfigError(std::string("json: band curve '") + key + "' has the wrong length");
    return v;
  };
  b.amplitude_lower = {b.grid, vec(a, "lower")};
  b.amplitude_median = {b.grid, vec(a, "median")};
  b.amplitude_upper = {b.grid, vec(a, "upper")};
  b.amplitude_lower_srsf = {b.grid, vec(a, "lower_srsf")};
  b.amplitude_median_srsf = {b.grid, vec(a, "median_srsf")};
  b.amplitude_upper_srsf = {b.grid, vec(a, "upper_srsf")};
  b.phase_lower = {b.grid, vec(p, "lower")};
  b.phase_median = {b.grid, vec(p, "median")};
  b.phase_upper = {b.grid, vec(p, "upper")};
  b.phase_lower_psi = {b.grid, vec(p, "lower_psi")};
  b.phase_median_psi = {b.grid, vec(p, "median_psi")};
  b.phase_upper_psi = {b.grid, vec(p, "upper_psi")};
  return b;
}

// Factor ------------------------------------------------------------------

inline Json to_json(const ToleranceFactor& f) {
  Json j = detail::header("factor");
  j["b"] = f.b;
  j["dim_k"] = f.dim_k;
  j["sample_n"] = f.sample_n;
  j["coverage_p"] = f.coverage_p;
  j["confidence_beta"] = f.confidence_beta;
  j["mc_iterations"] = f.mc_iterations;
  j["seed"] = f.seed;
  return j;
}

inline ToleranceFactor factor_from_json(const Json& j) {
  detail::expect_schema(j, "factor");
  ToleranceFactor f;
  f.b = detail::field<double>(j, "b");
  f.dim_k = detail::field<std::size_t>(j, "dim_k");
  f.sample_n = detail::field<std::size_t>(j, "sample_n");
  f.coverage_p = detail::field<double>(j, "coverage_p");
  f.confidence_beta = detail::field<double>(j, "confidence_beta");
  f.mc_iterations = detail::field<std::size_t>(j, "mc_iterations");
  f.seed = detail::field<std::uint64_t>(j, "seed");
  if (!(f.b > 0.0)) throw ConfigError("json: factor b must be positive");
  return f;
}

// Scores ------------------------------------------------------------------

struct ScoreReport {
  std::vector<std::string> labels;
  Vec scores;
  double factor_b = 0.0;  ///< 0 when scored without a factor
  bool has_factor = false;
};

inline Json to_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

inline Json to_json(const ScoreReport& r) {
  Json j = detail::header("scores");
  if (r.has_factor) j["factor_b"] = r.factor_b;
  else j["factor_b"] = nullptr;
  Json entries = Json::array();
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    Json e;
    e["label"] = i < r.labels.size() ? r.labels[i] : "f" + std::to_string(i + 1);
    e["score"] = r.scores[i];
    if (r.has_factor) e["inside"] = r.scores[i] <= r.factor_b;
    entries.push_back(e);
  }
  j["functions"] = entries;
  if (!r.scores.empty()) {
    const ScoreSummary s = summarize_scores(r.scores);
    j["summary"] = {{"mean", s.mean}, {"sd", s.sd}, {"histogram", to_json(s.histogram)}};
  }
  return j;
}

// Surface -----------------------------------------------------------------

inline Json to_json(const SurfacePlotData& s) {
  Json j = detail::header("surface");
  j["mode"] = to_string(s.mode);
  j["positions"] = s.positions;
  j["grid"] = s.grid;
  j["curves"] = {{"lower", s.curves[0]}, {"median", s.curves[1]}, {"upper", s.curves[2]}};
  return j;
}

// Coverage ----------------------------------------------------------------

inline Json to_json(const BandCoverageReport& r) {
  Json j = detail::header("band_coverage");
  j["coverage"] = r.options.coverage;
  j["replicates"] = r.options.replicates;
  j["functions_per_replicate"] = r.options.functions_per_replicate;
  j["band_replicates"] = r.options.band_replicates;
  j["per_replicate_n"] = r.options.per_replicate_n;
  j["aggregation"] = to_string(r.options.aggregation);
  j["inclusion"] = to_string(r.options.inclusion);
  j["seed"] = r.options.seed;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"confidence", row.confidence},
                    {"amplitude", row.amplitude},
                    {"phase", row.phase},
                    {"joint", row.joint},
                    {"mean_inside_amplitude", row.mean_inside_amplitude},
                    {"mean_inside_phase", row.mean_inside_phase}});
  j["rows"] = rows;
  return j;
}

inline Json to_json(const RegionCoverageReport& r) {
  Json j = detail::header("region_coverage");
  j["coverage"] = r.options.coverage;
  j["replicates"] = r.options.replicates;
  j["functions_per_replicate"] = r.options.functions_per_replicate;
  j["mc_iterations"] = r.options.factor.iterations;
  j["seed"] = r.options.seed;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(
        {{"confidence", row.confidence}, {"b", row.b}, {"rate", row.rate}, {"mean_inside", row.mean_inside}});
  j["rows"] = rows;
  return j;
}

}  // namespace elastic_tb
