#pragma once

// Bootstrapped geometric tolerance bands for amplitude and phase.
//
// Each replicate samples functions from the joint model, splits them into
// aligned SRSFs and warps, and takes geometric quantiles of both. The band
// bounds are confidence quantiles of the replicate bounds.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "elastic_tb/align.hpp"
#include "elastic_tb/errors.hpp"
#include "elastic_tb/joint_fpca.hpp"
#include "elastic_tb/parallel.hpp"
#include "elastic_tb/phase.hpp"
#include "elastic_tb/quantiles.hpp"
#include "elastic_tb/random.hpp"
#include "elastic_tb/srsf.hpp"

namespace elastic_tb {

/// How replicate bounds are combined into band bounds.
enum class Aggregation {
  /// Pointwise quantiles of the replicate curves: SRSF values for amplitude,
  /// psi values for phase (renormalized and integrated afterwards).
  pointwise,
  /// The replicate bound whose distance to the band median is the confidence
  /// quantile of those distances; bounds stay sample elements.
  geometric,
};

inline const char* to_string(Aggregation a) { return a == Aggregation::pointwise ? "pointwise" : "geometric"; }

inline Aggregation parse_aggregation(const std::string& s) {
  if (s == "pointwise") return Aggregation::pointwise;
  if (s == "geometric") return Aggregation::geometric;
  throw ConfigError("unknown aggregation rule '" + s + "'");
}

struct BandOptions {
  double coverage = 0.99;    ///< content 1 - p of the band
  double confidence = 0.95;  ///< 1 - alpha
  std::size_t replicates = 500;
  std::size_t per_replicate_n = 30;
  std::uint64_t seed = 0;
  Aggregation aggregation = Aggregation::geometric;
  QuantileOptions quantiles{};

  [[nodiscard]] double tail_p() const { return 1.0 - coverage; }
  [[nodiscard]] double alpha() const { return 1.0 - confidence; }

  void validate() const {
    if (!(coverage > 0.0 && coverage < 1.0)) throw ConfigError("band: coverage must lie in (0, 1)");
    if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("band: confidence must lie in (0, 1)");
    if (replicates < 1) throw ConfigError("band: need at least one replicate");
    if (per_replicate_n < 3) throw ConfigError("band: need at least 3 functions per replicate");
  }
};

/// Quantiles of one bootstrap replicate.
struct ReplicateQuantiles {
  Srsf amplitude_lower, amplitude_median, amplitude_upper;
  SqrtDensity phase_lower, phase_median, phase_upper;
  std::size_t clamped = 0;  ///< sampled warps projected back onto the orthant
};

struct ToleranceBand {
  Vec grid;
  Srsf amplitude_lower_srsf, amplitude_median_srsf, amplitude_upper_srsf;
  SampledFunction amplitude_lower, amplitude_median, amplitude_upper;
  SqrtDensity phase_lower_psi, phase_median_psi, phase_upper_psi;
  WarpingFunction phase_lower, phase_median, phase_upper;
  double coverage = 0.0;
  double confidence = 0.0;
  std::size_t replicates = 0;
  std::size_t per_replicate_n = 0;
  Aggregation aggregation = Aggregation::geometric;
  std::uint64_t seed = 0;
  bool degenerate = false;
  std::size_t clamped = 0;
};

/// Quantiles of one replicate drawn from stream `index` of the band family.
inline ReplicateQuantiles run_replicate(const JointFpcaModel& m, const BandOptions& options, std::size_t index) {
  Rng rng(options.seed, stream_id(StreamFamily::band_replicate, index));
  const std::vector<JointVector> gs = sample_model(m, options.per_replicate_n, rng);
  std::vector<Srsf> qs;
  std::vector<WarpingFunction> warps;
  ReplicateQuantiles out;
  for (const auto& g : gs) {
    Decomposed d = decompose_sample(m, g);
    out.clamped += d.clamped ? 1 : 0;
    qs.push_back(std::move(d.amplitude));
    warps.push_back(std::move(d.warp));
  }
  const AmplitudeQuantiles aq = geometric_quantiles_amplitude(qs, options.tail_p(), options.quantiles);
  const PhaseQuantiles pq = geometric_quantiles_phase(warps, options.tail_p(), options.quantiles);
  out.amplitude_lower = aq.lower;
  out.amplitude_median = aq.median;
  out.amplitude_upper = aq.upper;
  out.phase_lower = pq.lower_psi;
  out.phase_median = pq.median_psi;
  out.phase_upper = pq.upper_psi;
  return out;
}

inline std::vector<ReplicateQuantiles> run_replicates(const JointFpcaModel& m, const BandOptions& options) {
  options.validate();
  std::vector<ReplicateQuantiles> out(options.replicates);
  parallel_for(options.replicates, [&](std::size_t r) { out[r] = run_replicate(m, options, r); });
  return out;
}

namespace detail {

inline Vec pointwise_quantile(const std::vector<const Vec*>& curves, double level) {
  const std::size_t T = curves.front()->size();
  Vec out(T);
  Vec column(curves.size());
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < curves.size(); ++i) column[i] = (*curves[i])[t];
    out[t] = quantile(column, level);
  }
  return out;
}

/// Index of the candidate at confidence depth alpha/2 counted from the one
/// farthest from the median: rank ceil((alpha/2) S), 1-based.
inline std::size_t outward_pick(const std::vector<double>& distances, double alpha) {
  std::vector<std::size_t> order(distances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return distances[a] > distances[b]; });
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.5 * alpha * static_cast<double>(distances.size()) - 1e-12));
  return order[std::clamp<std::size_t>(rank, 1, order.size()) - 1];
}

inline SqrtDensity psi_from_values(const Vec& grid, Vec values) {
  SqrtDensity p{grid, std::move(values)};
  project_to_orthant(p);
  return normalized(std::move(p));
}

}  // namespace detail

/// Combines replicate quantiles into a band at the given coverage and confidence.
inline ToleranceBand aggregate_band(const JointFpcaModel& m, const std::vector<ReplicateQuantiles>& reps,
                                    const BandOptions& options) {
  options.validate();
  if (reps.empty()) throw SizeError("aggregate_band: no replicates");
  ToleranceBand band;
  band.grid = m.grid;
  band.coverage = options.coverage;
  band.confidence = options.confidence;
  band.replicates = reps.size();
  band.per_replicate_n = options.per_replicate_n;
  band.aggregation = options.aggregation;
  band.seed = options.seed;
  band.degenerate = m.degenerate;
  for (const auto& r : reps) band.clamped += r.clamped;

  const std::size_t S = reps.size();
  const double alpha = options.alpha();

  // Amplitude: median of replicate medians, then replicate bounds aligned to it.
  std::vector<Srsf> medians;
  for (const auto& r : reps) medians.push_back(r.amplitude_median);
  Srsf med = amplitude_median(medians, options.quantiles).first;
  std::vector<Srsf> lowers(S), uppers(S);
  parallel_for(S, [&](std::size_t i) {
    lowers[i] = warp_srsf(reps[i].amplitude_lower, pairwise_align(med, reps[i].amplitude_lower).warp);
    uppers[i] = warp_srsf(reps[i].amplitude_upper, pairwise_align(med, reps[i].amplitude_upper).warp);
  });
  if (S == 1) {
    lowers[0] = reps[0].amplitude_lower;
    uppers[0] = reps[0].amplitude_upper;
    med = reps[0].amplitude_median;
  }

  // Phase: sphere median of replicate medians.
  std::vector<SqrtDensity> ph_medians;
  for (const auto& r : reps) ph_medians.push_back(r.phase_median);
  const SqrtDensity ph_med =
      karcher_median_psi(ph_medians, {options.quantiles.median_tolerance, options.quantiles.median_max_iterations});

  band.amplitude_median_srsf = med;
  band.phase_median_psi = ph_med;
  if (S == 1) {
    band.amplitude_lower_srsf = lowers[0];
    band.amplitude_upper_srsf = uppers[0];
    band.phase_lower_psi = reps[0].phase_lower;
    band.phase_upper_psi = reps[0].phase_upper;
    band.phase_median_psi = reps[0].phase_median;
  } else if (options.aggregation == Aggregation::pointwise) {
    std::vector<const Vec*> lo, up, plo, pup;
    for (std::size_t i = 0; i < S; ++i) {
      lo.push_back(&lowers[i].q);
      up.push_back(&uppers[i].q);
      plo.push_back(&reps[i].phase_lower.psi);
      pup.push_back(&reps[i].phase_upper.psi);
    }
    band.amplitude_lower_srsf = {m.grid, detail::pointwise_quantile(lo, 0.5 * alpha)};
    band.amplitude_upper_srsf = {m.grid, detail::pointwise_quantile(up, 1.0 - 0.5 * alpha)};
    band.phase_lower_psi = detail::psi_from_values(m.grid, detail::pointwise_quantile(plo, 0.5 * alpha));
    band.phase_upper_psi = detail::psi_from_values(m.grid, detail::pointwise_quantile(pup, 1.0 - 0.5 * alpha));
  } else {
    std::vector<double> dlo(S), dup(S), plo(S), pup(S);
    for (std::size_t i = 0; i < S; ++i) {
      dlo[i] = l2_distance(m.grid, lowers[i].q, med.q);
      dup[i] = l2_distance(m.grid, uppers[i].q, med.q);
      plo[i] = sphere_angle(reps[i].phase_lower, ph_med);
      pup[i] = sphere_angle(reps[i].phase_upper, ph_med);
    }
    band.amplitude_lower_srsf = lowers[detail::outward_pick(dlo, alpha)];
    band.amplitude_upper_srsf = uppers[detail::outward_pick(dup, alpha)];
    band.phase_lower_psi = reps[detail::outward_pick(plo, alpha)].phase_lower;
    band.phase_upper_psi = reps[detail::outward_pick(pup, alpha)].phase_upper;
  }

  band.amplitude_lower = from_srsf(band.amplitude_lower_srsf, m.initial_value);
  band.amplitude_median = from_srsf(band.amplitude_median_srsf, m.initial_value);
  band.amplitude_upper = from_srsf(band.amplitude_upper_srsf, m.initial_value);
  band.phase_lower = from_psi(band.phase_lower_psi);
  band.phase_median = from_psi(band.phase_median_psi);
  band.phase_upper = from_psi(band.phase_upper_psi);
  return band;
}

/// Band of a model with no variance: every curve is the mean.
inline ToleranceBand degenerate_band(const JointFpcaModel& m, const BandOptions& options) {
  ToleranceBand band;
  band.grid = m.grid;
  band.coverage = options.coverage;
  band.confidence = options.confidence;
  band.replicates = options.replicates;
  band.per_replicate_n = options.per_replicate_n;
  band.aggregation = options.aggregation;
  band.seed = options.seed;
  band.degenerate = true;
  band.amplitude_lower_srsf = band.amplitude_median_srsf = band.amplitude_upper_srsf = m.amplitude_mean();
  band.amplitude_lower = band.amplitude_median = band.amplitude_upper = from_srsf(m.amplitude_mean(), m.initial_value);
  band.phase_lower_psi = band.phase_median_psi = band.phase_upper_psi = m.warp_mean_psi;
  band.phase_lower = band.phase_median = band.phase_upper = from_psi(m.warp_mean_psi);
  return band;
}

inline bool has_variance(const JointFpcaModel& m) {
  if (m.degenerate) return false;
  for (double v : m.variances)
    if (v > 0.0) return true;
  return false;
}

/// Method 1 end to end.
inline ToleranceBand bootstrap_bands(const JointFpcaModel& m, const BandOptions& options) {
  options.validate();
  if (!has_variance(m)) return degenerate_band(m, options);
  return aggregate_band(m, run_replicates(m, options), options);
}

/// What it means for a whole function to lie within a band.
enum class InclusionRule {
  /// The aligned function lies pointwise between the lower and upper
  /// amplitude curves, and its warp pointwise between the phase bounds.
  envelope,
  /// The residual from the band median is assigned to the side whose bound it
  /// leans towards and is inside when no farther from the median than that
  /// bound (d_a for amplitude, d_p for phase).
  distance,
};

inline const char* to_string(InclusionRule r) { return r == InclusionRule::envelope ? "envelope" : "distance"; }

inline InclusionRule parse_inclusion(const std::string& s) {
  if (s == "envelope") return InclusionRule::envelope;
  if (s == "distance") return InclusionRule::distance;
  throw ConfigError("unknown inclusion rule '" + s + "'");
}

/// Whole-function membership of a band.
class BandTester {
public:
  explicit BandTester(const ToleranceBand& band, InclusionRule rule = InclusionRule::distance)
      : band_(band), rule_(rule) {
    const Vec& t = band.grid;
    amp_lo_ = residual(band.amplitude_lower_srsf.q, band.amplitude_median_srsf.q);
    amp_up_ = residual(band.amplitude_upper_srsf.q, band.amplitude_median_srsf.q);
    amp_axis_ = residual(amp_up_, amp_lo_);
    amp_lo_radius_ = l2_norm(t, amp_lo_);
    amp_up_radius_ = l2_norm(t, amp_up_);
    ph_lo_ = inv_exp_map(band.phase_median_psi, band.phase_lower_psi).v;
    ph_up_ = inv_exp_map(band.phase_median_psi, band.phase_upper_psi).v;
    ph_axis_ = residual(ph_up_, ph_lo_);
    ph_lo_radius_ = l2_norm(t, ph_lo_);
    ph_up_radius_ = l2_norm(t, ph_up_);
    envelope(band.amplitude_lower.values, band.amplitude_upper.values, amp_min_, amp_max_);
    envelope(band.phase_lower.gamma, band.phase_upper.gamma, ph_min_, ph_max_);
    // the median always belongs to the band
    for (std::size_t i = 0; i < t.size(); ++i) {
      amp_min_[i] = std::min(amp_min_[i], band.amplitude_median.values[i]);
      amp_max_[i] = std::max(amp_max_[i], band.amplitude_median.values[i]);
      ph_min_[i] = std::min(ph_min_[i], band.phase_median.gamma[i]);
      ph_max_[i] = std::max(ph_max_[i], band.phase_median.gamma[i]);
    }
  }

  [[nodiscard]] InclusionRule rule() const { return rule_; }

  /// `f` and its SRSF `q`, both already aligned to the band's amplitude median.
  [[nodiscard]] bool amplitude_contains_aligned(const SampledFunction& f, const Srsf& q) const {
    if (rule_ == InclusionRule::envelope) return between(f.values, amp_min_, amp_max_);
    const Vec r = residual(q.q, band_.amplitude_median_srsf.q);
    const bool upper = inner(band_.grid, r, amp_axis_) >= 0.0;
    return within(l2_norm(band_.grid, r), upper ? amp_up_radius_ : amp_lo_radius_);
  }

  /// Aligns `f` to the band's amplitude median, then tests it.
  [[nodiscard]] bool amplitude_contains(const SampledFunction& f, const SrsfOptions& srsf = {}) const {
    const SampledFunction g = f.grid == band_.grid ? f : resample(f, band_.grid);
    const Srsf q = to_srsf(g, srsf);
    const WarpingFunction w = pairwise_align(band_.amplitude_median_srsf, q).warp;
    return amplitude_contains_aligned(apply_warp(g, w), warp_srsf(q, w));
  }

  [[nodiscard]] bool phase_contains(const WarpingFunction& g) const {
    if (rule_ == InclusionRule::envelope) return between(g.gamma, ph_min_, ph_max_);
    const Vec v = inv_exp_map(band_.phase_median_psi, to_psi(g)).v;
    const bool upper = inner(band_.grid, v, ph_axis_) >= 0.0;
    return within(l2_norm(band_.grid, v), upper ? ph_up_radius_ : ph_lo_radius_);
  }

private:
  static Vec residual(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
    return r;
  }
  static void envelope(const Vec& a, const Vec& b, Vec& lo, Vec& hi) {
    lo.resize(a.size());
    hi.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      lo[i] = std::min(a[i], b[i]);
      hi[i] = std::max(a[i], b[i]);
    }
  }
  static bool within(double d, double radius) { return d <= radius * (1.0 + 1e-12) + 1e-12; }
  static bool between(const Vec& y, const Vec& lo, const Vec& hi) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double slack = 1e-9 * (1.0 + std::abs(lo[i]) + std::abs(hi[i]));
      if (y[i] < lo[i] - slack || y[i] > hi[i] + slack) return false;
    }
    return true;
  }

  const ToleranceBand& band_;
  InclusionRule rule_;
  Vec amp_lo_, amp_up_, amp_axis_, ph_lo_, ph_up_, ph_axis_;
  double amp_lo_radius_ = 0.0, amp_up_radius_ = 0.0, ph_lo_radius_ = 0.0, ph_up_radius_ = 0.0;
  Vec amp_min_, amp_max_, ph_min_, ph_max_;
};

/// A function drawn from the model and registered again as new data would be.
struct TestFunction {
  SampledFunction function;
  Srsf srsf;
  WarpingFunction warp;  ///< alignment of the function to the model's amplitude mean
  Srsf aligned;          ///< srsf under that alignment
};

inline TestFunction make_test_function(const JointFpcaModel& m, const JointVector& g, const SrsfOptions& srsf = {}) {
  TestFunction tf;
  tf.function = synthesize_function(m, decompose_sample(m, g));
  tf.srsf = to_srsf(tf.function, srsf);
  tf.warp = pairwise_align(m.amplitude_mean(), tf.srsf).warp;
  tf.aligned = warp_srsf(tf.srsf, tf.warp);
  return tf;
}

inline std::vector<TestFunction> draw_test_functions(const JointFpcaModel& m, std::size_t count, Rng& rng) {
  const std::vector<JointVector> gs = sample_model(m, count, rng);
  std::vector<TestFunction> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = make_test_function(m, gs[i]);
  return out;
}

struct CoverageOptions {
  double coverage = 0.90;
  std::vector<double> confidences{0.99, 0.95, 0.90};
  std::size_t replicates = 500;           ///< coverage replicates
  std::size_t functions_per_replicate = 100;
  std::size_t band_replicates = 500;      ///< bootstrap size S of each band
  std::size_t per_replicate_n = 30;
  std::uint64_t seed = 0;
  Aggregation aggregation = Aggregation::geometric;
  InclusionRule inclusion = InclusionRule::distance;
  QuantileOptions quantiles{};
};

struct CoverageRow {
  double confidence = 0.0;
  double amplitude = 0.0;  ///< fraction of replicates with at least `coverage` of functions inside
  double phase = 0.0;
  double joint = 0.0;
  double mean_inside_amplitude = 0.0;  ///< average fraction of functions inside
  double mean_inside_phase = 0.0;
};

struct BandCoverageReport {
  CoverageOptions options;
  std::vector<CoverageRow> rows;
  std::vector<ToleranceBand> bands;  ///< one per confidence, same order as rows
};

/// Estimates the confidence actually achieved by bands of each requested
/// confidence. Bands share one set of bootstrap replicates; every coverage
/// replicate tests the same fresh functions against all bands.
inline BandCoverageReport coverage_experiment(const JointFpcaModel& m, const CoverageOptions& options) {
  if (options.replicates < 1 || options.functions_per_replicate < 1)
    throw ConfigError("coverage: replicate and function counts must be positive");
  BandCoverageReport report;
  report.options = options;
  BandOptions bo;
  bo.coverage = options.coverage;
  bo.replicates = options.band_replicates;
  bo.per_replicate_n = options.per_replicate_n;
  bo.seed = options.seed;
  bo.aggregation = options.aggregation;
  bo.quantiles = options.quantiles;
  bo.validate();

  const bool variance = has_variance(m);
  std::vector<ReplicateQuantiles> reps;
  if (variance) reps = run_replicates(m, bo);
  for (double conf : options.confidences) {
    bo.confidence = conf;
    report.bands.push_back(variance ? aggregate_band(m, reps, bo) : degenerate_band(m, bo));
  }
  if (!variance) {
    for (double conf : options.confidences) report.rows.push_back({conf, 1.0, 1.0, 1.0, 1.0, 1.0});
    return report;
  }

  // All bands share one median, so each function is aligned to it once.
  const ToleranceBand& first = report.bands.front();
  std::vector<BandTester> testers;
  for (const auto& b : report.bands) testers.emplace_back(b, options.inclusion);
  const std::size_t nb = report.bands.size();
  std::vector<std::array<std::size_t, 3>> inside(options.replicates * nb);
  parallel_for(options.replicates, [&](std::size_t r) {
    Rng rng(options.seed, stream_id(StreamFamily::band_coverage, r));
    const std::vector<JointVector> gs = sample_model(m, options.functions_per_replicate, rng);
    for (const auto& g : gs) {
      const TestFunction tf = make_test_function(m, g);
      const WarpingFunction w = pairwise_align(first.amplitude_median_srsf, tf.srsf).warp;
      const SampledFunction f_at_median = apply_warp(tf.function, w);
      const Srsf q_at_median = warp_srsf(tf.srsf, w);
      for (std::size_t b = 0; b < nb; ++b) {
        const bool a = testers[b].amplitude_contains_aligned(f_at_median, q_at_median);
        const bool p = testers[b].phase_contains(tf.warp);
        auto& cell = inside[r * nb + b];
        cell[0] += a;
        cell[1] += p;
        cell[2] += a && p;
      }
    }
  });

  const double need = options.coverage * static_cast<double>(options.functions_per_replicate) - 1e-9;
  for (std::size_t b = 0; b < nb; ++b) {
    CoverageRow row{options.confidences[b]};
    for (std::size_t r = 0; r < options.replicates; ++r) {
      const auto& cell = inside[r * nb + b];
      row.mean_inside_amplitude += static_cast<double>(cell[0]);
      row.mean_inside_phase += static_cast<double>(cell[1]);
      row.amplitude += static_cast<double>(cell[0]) >= need;
      row.phase += static_cast<double>(cell[1]) >= need;
      row.joint += static_cast<double>(cell[2]) >= need;
    }
    const auto reps_d = static_cast<double>(options.replicates);
    row.amplitude /= reps_d;
    row.phase /= reps_d;
    row.joint /= reps_d;
    const double tested = reps_d * static_cast<double>(options.functions_per_replicate);
    row.mean_inside_amplitude /= tested;
    row.mean_inside_phase /= tested;
    report.rows.push_back(row);
  }
  return report;
}

enum class SurfaceMode { amplitude, phase };

inline const char* to_string(SurfaceMode m) { return m == SurfaceMode::amplitude ? "amplitude" : "phase"; }

inline SurfaceMode parse_surface_mode(const std::string& s) {
  if (s == "amplitude") return SurfaceMode::amplitude;
  if (s == "phase") return SurfaceMode::phase;
  throw ConfigError("unknown surface mode '" + s + "'");
}

/// Lower, median and upper curves laid out along an axis by their distances.
struct SurfacePlotData {
  SurfaceMode mode = SurfaceMode::amplitude;
  Vec grid;
  std::array<double, 3> positions{};
  std::array<Vec, 3> curves;  ///< lower, median, upper; phase curves are gamma(t) - t
};

inline SurfacePlotData surface_coords(const ToleranceBand& band, SurfaceMode mode) {
  SurfacePlotData s;
  s.mode = mode;
  s.grid = band.grid;
  if (mode == SurfaceMode::amplitude) {
    const double d1 = pairwise_align(band.amplitude_median_srsf, band.amplitude_lower_srsf).distance;
    const double d2 = pairwise_align(band.amplitude_median_srsf, band.amplitude_upper_srsf).distance;
    s.positions = {0.0, d1, d1 + d2};
    s.curves = {band.amplitude_lower.values, band.amplitude_median.values, band.amplitude_upper.values};
  } else {
    const double d1 = sphere_angle(band.phase_lower_psi, band.phase_median_psi);
    const double d2 = sphere_angle(band.phase_median_psi, band.phase_upper_psi);
    s.positions = {0.0, d1, d1 + d2};
    const WarpingFunction* ws[3] = {&band.phase_lower, &band.phase_median, &band.phase_upper};
    for (std::size_t c = 0; c < 3; ++c) {
      s.curves[c] = ws[c]->gamma;
      for (std::size_t i = 0; i < s.grid.size(); ++i) s.curves[c][i] -= s.grid[i];
    }
  }
  return s;
}

}  // namespace elastic_tb
