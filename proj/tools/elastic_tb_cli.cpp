// elastic-tb: tolerance bounds for functional data with amplitude and phase
// variability. Every subcommand reads from --input (or stdin) and writes to
// --output (or stdout). The resolved configuration is logged to stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "elastic_tb/elastic_tb.hpp"

namespace etb = elastic_tb;

namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid_size;
  std::optional<double> coverage;
  std::vector<double> confidence;
  std::optional<std::size_t> components;
  std::optional<double> variance_threshold;
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> per_replicate_n;
  std::optional<double> scale_c;
  std::string output;
  std::optional<std::string> format;
  std::string input;

  // Subcommand-specific.
  std::size_t n = 21;
  std::string generator = "two-bump";
  std::size_t points = 301;
  std::size_t max_iterations = 20;
  double tolerance = 1e-4;
  std::string model;
  std::string factor;
  std::string band;
  std::size_t iterations = 100000;
  std::optional<std::size_t> dim_k;
  std::optional<std::size_t> sample_n;
  std::string method = "band";
  std::size_t functions_per_replicate = 100;
  std::optional<std::size_t> band_replicates;
  std::string aggregation = "geometric";
  std::string inclusion = "distance";
  std::string mode = "amplitude";
  bool quiet = false;
};

std::string read_input(const std::string& path) {
  if (!path.empty() && path != "-") return etb::read_file(path);
  return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    return c == '{';
  }
  return false;
}

std::string schema_of(const etb::Json& j) {
  return j.is_object() && j.contains("schema") && j["schema"].is_string() ? j["schema"].get<std::string>() : "";
}

void emit(const Flags& f, const std::string& text) {
  if (f.output.empty() || f.output == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    etb::write_file_atomic(f.output, text);
  }
}

void unsupported(const std::string& command, const std::string& format) {
  throw etb::ConfigError(command + ": --format " + format + " is not supported");
}

class Runner {
public:
  explicit Runner(Flags flags) : f_(std::move(flags)) {}

  int run(const std::string& command) {
    config_.command = command;
    resolve(command);
    config_.validate();
    if (!f_.quiet) std::cerr << "elastic-tb: config " << etb::to_json(config_).dump() << "\n";
    if (command == "simulate") simulate();
    else if (command == "align") align();
    else if (command == "fpca") fpca();
    else if (command == "band") band();
    else if (command == "factor") factor();
    else if (command == "score") score();
    else if (command == "coverage") coverage();
    else if (command == "surface") surface();
    return 0;
  }

private:
  void resolve(const std::string& command) {
    config_.seed = f_.seed.value_or(0);
    config_.n_functions = f_.n;
    config_.grid_size = f_.grid_size.value_or(command == "simulate" ? f_.points : 101);
    const bool coverage_cmd = command == "coverage";
    config_.coverage_p = f_.coverage.value_or(coverage_cmd ? 0.90 : 0.99);
    if (!f_.confidence.empty()) config_.confidences = f_.confidence;
    else config_.confidences = coverage_cmd ? std::vector<double>{0.99, 0.95, 0.90} : std::vector<double>{0.95};
    if (!coverage_cmd && config_.confidences.size() != 1)
      throw etb::ConfigError(command + ": --confidence takes a single value");
    config_.bootstrap_s = f_.replicates.value_or(500);
    config_.per_replicate_n = f_.per_replicate_n.value_or(30);
    config_.components = f_.components;
    config_.variance_threshold = f_.variance_threshold;
    config_.scale_c = f_.scale_c;
    config_.format = f_.format.value_or(command == "simulate" ? "csv" : "json");
  }

  etb::AlignmentOptions alignment_options() const {
    etb::AlignmentOptions o;
    o.grid_size = config_.grid_size;
    o.max_iterations = f_.max_iterations;
    o.tolerance = f_.tolerance;
    return o;
  }

  etb::AlignmentResult align_table(const etb::DatasetTable& t) const {
    etb::AlignmentResult ar = etb::align_sample(t.to_functions(), alignment_options());
    if (!ar.converged)
      throw etb::ConvergenceError("align: amplitude mean did not converge in " + std::to_string(ar.iterations) +
                                      " iterations",
                                  0.0);
    return ar;
  }

  etb::DatasetTable read_table(const std::string& path) const {
    const std::string text = read_input(path);
    if (looks_like_json(text)) return etb::dataset_from_json(etb::parse_json(text));
    return etb::read_csv_string(text);
  }

  etb::JointFpcaModel read_model() const {
    if (f_.model.empty()) throw etb::ConfigError(config_.command + ": --model is required");
    return etb::model_from_json(etb::parse_json(etb::read_file(f_.model)));
  }

  void simulate() {
    etb::DatasetTable t;
    if (f_.generator == "two-bump") {
      etb::TwoBumpOptions o;
      o.points = config_.grid_size;
      t = etb::simulate_two_bump(config_.n_functions, config_.seed, o);
    } else if (f_.generator == "unimodal") {
      etb::UnimodalOptions o;
      o.points = config_.grid_size;
      t = etb::simulate_unimodal_toy(config_.n_functions, config_.seed, o);
    } else {
      throw etb::ConfigError("simulate: unknown generator '" + f_.generator + "'");
    }
    if (config_.format == "csv") emit(f_, etb::write_csv(t));
    else if (config_.format == "json") emit(f_, etb::dump(etb::to_json(t)));
    else unsupported("simulate", config_.format);
  }

  void align() {
    const etb::AlignmentResult ar = align_table(read_table(f_.input));
    if (config_.format == "json") {
      emit(f_, etb::dump(etb::to_json(ar)));
    } else if (config_.format == "csv") {
      etb::DatasetTable out;
      out.grid = ar.grid;
      for (const auto& g : ar.aligned_functions) out.functions.push_back(g.values);
      emit(f_, etb::write_csv(out));
    } else {
      unsupported("align", config_.format);
    }
  }

  void fpca() {
    const std::string text = read_input(f_.input);
    etb::AlignmentResult ar;
    if (looks_like_json(text)) {
      const etb::Json j = etb::parse_json(text);
      if (schema_of(j) == etb::schema_name("dataset")) ar = align_table(etb::dataset_from_json(j));
      else ar = etb::alignment_from_json(j);
    } else {
      ar = align_table(etb::read_csv_string(text));
    }
    etb::FitOptions o;
    if (config_.components) o.components.components = config_.components;
    if (config_.variance_threshold) o.components.threshold = *config_.variance_threshold;
    o.scale_c = config_.scale_c;
    const etb::JointFpcaModel m = etb::fit_model(ar, o);
    if (config_.format == "json") {
      emit(f_, etb::dump(etb::to_json(m)));
    } else if (config_.format == "csv") {
      etb::Vec index, retained;
      for (std::size_t j = 0; j < m.spectrum.size(); ++j) {
        index.push_back(static_cast<double>(j + 1));
        retained.push_back(j < m.retained_k ? 1.0 : 0.0);
      }
      emit(f_, etb::write_columns({"component", "variance", "retained"}, {index, m.spectrum, retained}));
    } else {
      unsupported("fpca", config_.format);
    }
  }

  etb::BandOptions band_options() const {
    etb::BandOptions o;
    o.coverage = config_.coverage_p;
    o.confidence = config_.confidences.front();
    o.replicates = config_.bootstrap_s;
    o.per_replicate_n = config_.per_replicate_n;
    o.seed = config_.seed;
    o.aggregation = etb::parse_aggregation(f_.aggregation);
    return o;
  }

  static std::string band_csv(const etb::ToleranceBand& b) {
    return etb::write_columns({"t", "amplitude_lower", "amplitude_median", "amplitude_upper", "warp_lower",
                               "warp_median", "warp_upper"},
                              {b.grid, b.amplitude_lower.values, b.amplitude_median.values, b.amplitude_upper.values,
                               b.phase_lower.gamma, b.phase_median.gamma, b.phase_upper.gamma});
  }

  void band() {
    const etb::ToleranceBand b = etb::bootstrap_bands(read_model(), band_options());
    if (config_.format == "json") emit(f_, etb::dump(etb::to_json(b)));
    else if (config_.format == "csv") emit(f_, band_csv(b));
    else emit(f_, etb::band_svg(b));
  }

  void factor() {
    std::size_t k = 0, n = 0;
    if (!f_.model.empty()) {
      const etb::JointFpcaModel m = read_model();
      k = m.retained_k;
      n = m.sample_size_n;
    }
    if (f_.dim_k) k = *f_.dim_k;
    if (f_.sample_n) n = *f_.sample_n;
    if (k == 0 || n == 0) throw etb::ConfigError("factor: give --model or both --k and --n");
    const etb::ToleranceFactor tf = etb::tolerance_factor(n, k, config_.coverage_p, config_.confidences.front(),
                                                          {f_.iterations, config_.seed});
    if (config_.format == "json") {
      emit(f_, etb::dump(etb::to_json(tf)));
    } else if (config_.format == "csv") {
      emit(f_, etb::write_columns({"b", "k", "n", "p", "beta", "iterations", "seed"},
                                  {{tf.b},
                                   {static_cast<double>(tf.dim_k)},
                                   {static_cast<double>(tf.sample_n)},
                                   {tf.coverage_p},
                                   {tf.confidence_beta},
                                   {static_cast<double>(tf.mc_iterations)},
                                   {static_cast<double>(tf.seed)}}));
    } else {
      unsupported("factor", config_.format);
    }
  }

  void score() {
    const etb::JointFpcaModel m = read_model();
    const etb::DatasetTable t = read_table(f_.input);
    etb::ScoreReport r;
    r.labels = t.labels;
    r.scores = etb::score_functions(m, t.to_functions());
    if (!f_.factor.empty()) {
      r.factor_b = etb::factor_from_json(etb::parse_json(etb::read_file(f_.factor))).b;
      r.has_factor = true;
    }
    if (config_.format == "json") {
      emit(f_, etb::dump(etb::to_json(r)));
    } else if (config_.format == "csv") {
      std::string out = r.has_factor ? "label,score,inside\n" : "label,score\n";
      for (std::size_t i = 0; i < r.scores.size(); ++i) {
        out += (r.labels.empty() ? "f" + std::to_string(i + 1) : r.labels[i]) + "," +
               etb::detail::format_double(r.scores[i]);
        if (r.has_factor) out += r.scores[i] <= r.factor_b ? ",1" : ",0";
        out += "\n";
      }
      emit(f_, out);
    } else {
      const etb::Histogram h = r.scores.empty() ? etb::Histogram{} : etb::histogram(r.scores);
      emit(f_, etb::histogram_svg(h, r.has_factor ? r.factor_b : -1.0));
    }
  }

  void coverage() {
    const etb::JointFpcaModel m = read_model();
    const std::size_t replicates = config_.bootstrap_s;
    if (config_.format == "svg") unsupported("coverage", "svg");
    if (f_.method == "band") {
      etb::CoverageOptions o;
      o.coverage = config_.coverage_p;
      o.confidences = config_.confidences;
      o.replicates = replicates;
      o.functions_per_replicate = f_.functions_per_replicate;
      o.band_replicates = f_.band_replicates.value_or(500);
      o.per_replicate_n = config_.per_replicate_n;
      o.seed = config_.seed;
      o.aggregation = etb::parse_aggregation(f_.aggregation);
      o.inclusion = etb::parse_inclusion(f_.inclusion);
      const etb::BandCoverageReport r = etb::coverage_experiment(m, o);
      if (config_.format == "json") {
        emit(f_, etb::dump(etb::to_json(r)));
      } else {
        etb::Vec conf, amp, ph, joint, ia, ip;
        for (const auto& row : r.rows) {
          conf.push_back(row.confidence);
          amp.push_back(row.amplitude);
          ph.push_back(row.phase);
          joint.push_back(row.joint);
          ia.push_back(row.mean_inside_amplitude);
          ip.push_back(row.mean_inside_phase);
        }
        emit(f_, etb::write_columns({"confidence", "amplitude", "phase", "joint", "mean_inside_amplitude",
                                     "mean_inside_phase"},
                                    {conf, amp, ph, joint, ia, ip}));
      }
    } else if (f_.method == "region") {
      etb::RegionCoverageOptions o;
      o.coverage = config_.coverage_p;
      o.confidences = config_.confidences;
      o.replicates = replicates;
      o.functions_per_replicate = f_.functions_per_replicate;
      o.factor = {f_.iterations, config_.seed};
      o.seed = config_.seed;
      const etb::RegionCoverageReport r = etb::coverage_experiment_fpca(m, o);
      if (config_.format == "json") {
        emit(f_, etb::dump(etb::to_json(r)));
      } else {
        etb::Vec conf, b, rate, inside;
        for (const auto& row : r.rows) {
          conf.push_back(row.confidence);
          b.push_back(row.b);
          rate.push_back(row.rate);
          inside.push_back(row.mean_inside);
        }
        emit(f_, etb::write_columns({"confidence", "b", "rate", "mean_inside"}, {conf, b, rate, inside}));
      }
    } else {
      throw etb::ConfigError("coverage: --method must be band or region");
    }
  }

  void surface() {
    const etb::SurfaceMode mode = etb::parse_surface_mode(f_.mode);
    etb::ToleranceBand b;
    if (!f_.band.empty()) b = etb::band_from_json(etb::parse_json(etb::read_file(f_.band)));
    else b = etb::bootstrap_bands(read_model(), band_options());
    const etb::SurfacePlotData s = etb::surface_coords(b, mode);
    if (config_.format == "json") {
      emit(f_, etb::dump(etb::to_json(s)));
    } else if (config_.format == "csv") {
      emit(f_, etb::write_columns({"t", "lower", "median", "upper"}, {s.grid, s.curves[0], s.curves[1], s.curves[2]}));
    } else {
      emit(f_, etb::surface_svg(s));
    }
  }

  Flags f_;
  etb::ExperimentConfig config_;
};

void add_common(CLI::App& app, Flags& f) {
  app.add_option("--seed", f.seed, "Random seed (default 0)");
  app.add_option("--grid-size", f.grid_size, "Grid points (default 101; simulate renders 301)");
  app.add_option("--coverage", f.coverage, "Content 1 - p (default 0.99; coverage experiments 0.90)");
  app.add_option("--confidence", f.confidence, "Confidence level; coverage accepts a comma-separated list")
      ->delimiter(',');
  app.add_option("--components", f.components, "Retain exactly this many principal directions");
  app.add_option("--variance-threshold", f.variance_threshold, "Retain directions up to this variance fraction");
  app.add_option("--replicates", f.replicates, "Bootstrap or coverage replicates (default 500)");
  app.add_option("--per-replicate-n", f.per_replicate_n, "Functions sampled per bootstrap replicate (default 30)");
  app.add_option("--scale-c", f.scale_c, "Phase scale C (default: variance balancing)");
  app.add_option("--output,-o", f.output, "Output path (default stdout); written atomically");
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_flag("--quiet,-q", f.quiet, "Do not log the resolved configuration");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tolerance bounds for functional data with amplitude and phase variability", "elastic-tb"};
  app.require_subcommand(1);
  Flags f;

  auto* sim = app.add_subcommand("simulate", "Generate a simulated dataset");
  sim->add_option("--n", f.n, "Number of functions")->capture_default_str();
  sim->add_option("--generator", f.generator, "two-bump or unimodal")->capture_default_str();

  auto* al = app.add_subcommand("align", "Separate phase and amplitude of a dataset");
  auto* fp = app.add_subcommand("fpca", "Fit the joint amplitude-phase model");
  for (auto* c : {al, fp}) {
    c->add_option("--max-iterations", f.max_iterations, "Amplitude mean iterations")->capture_default_str();
    c->add_option("--tolerance", f.tolerance, "Amplitude mean tolerance")->capture_default_str();
  }

  auto* bd = app.add_subcommand("band", "Bootstrapped tolerance band from a model");
  auto* fc = app.add_subcommand("factor", "Monte Carlo tolerance factor");
  fc->add_option("--k", f.dim_k, "Dimension (default: model's retained k)");
  fc->add_option("--n", f.sample_n, "Sample size (default: model's n)");

  auto* sc = app.add_subcommand("score", "Score functions against a model");
  sc->add_option("--factor", f.factor, "Factor JSON; marks each function inside or outside");

  auto* cv = app.add_subcommand("coverage", "Coverage experiment on a model");
  cv->add_option("--method", f.method, "band or region")->capture_default_str();
  cv->add_option("--functions-per-replicate", f.functions_per_replicate)->capture_default_str();
  cv->add_option("--band-replicates", f.band_replicates, "Bootstrap size of each band (default 500)");

  auto* sf = app.add_subcommand("surface", "Surface plot data of a band");
  sf->add_option("--band", f.band, "Band JSON (otherwise computed from --model)");
  sf->add_option("--mode", f.mode, "amplitude or phase")->capture_default_str();

  for (auto* c : {fc, cv}) c->add_option("--iterations", f.iterations, "Factor Monte Carlo draws")->capture_default_str();
  for (auto* c : {bd, cv, sf}) {
    c->add_option("--aggregation", f.aggregation, "geometric or pointwise")->capture_default_str();
  }
  cv->add_option("--inclusion", f.inclusion, "distance or envelope")->capture_default_str();
  for (auto* c : {bd, fc, sc, cv, sf}) c->add_option("--model", f.model, "Model JSON");
  for (auto* c : {al, fp, sc}) c->add_option("--input,-i", f.input, "Input CSV or JSON (default stdin)");
  for (auto* c : {sim, al, fp, bd, fc, sc, cv, sf}) add_common(*c, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "elastic-tb: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return Runner(f).run(command);
  } catch (const etb::Error& e) {
    std::cerr << "elastic-tb " << command << ": " << e.what() << "\n";
    return etb::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "elastic-tb " << command << ": " << e.what() << "\n";
    return 2;
  }
}
