#pragma once

// Resolved run configuration shared by the command-line tool and the
// acceptance suite. Unset optional fields are written as null.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elastic_tb/errors.hpp"
#include "elastic_tb/json_io.hpp"
#include "elastic_tb/parallel.hpp"

namespace elastic_tb {

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::size_t n_functions = 21;
  std::size_t grid_size = 101;
  std::size_t bootstrap_s = 500;
  std::size_t per_replicate_n = 30;
  double coverage_p = 0.99;
  std::vector<double> confidences{0.95};
  std::optional<double> variance_threshold;
  std::optional<std::size_t> components;
  std::optional<double> scale_c;
  std::string format = "json";

  void validate() const {
    auto fraction = [](double v, const char* what) {
      if (!(v > 0.0 && v < 1.0)) throw ConfigError(std::string(what) + " must lie in (0, 1)");
    };
    fraction(coverage_p, "--coverage");
    if (confidences.empty()) throw ConfigError("--confidence needs at least one value");
    for (double c : confidences) fraction(c, "--confidence");
    if (variance_threshold) {
      if (!(*variance_threshold > 0.0 && *variance_threshold <= 1.0))
        throw ConfigError("--variance-threshold must lie in (0, 1]");
    }
    if (components && *components < 1) throw ConfigError("--components must be positive");
    if (variance_threshold && components) throw ConfigError("--components and --variance-threshold are exclusive");
    if (scale_c && !(*scale_c > 0.0)) throw ConfigError("--scale-c must be positive");
    if (n_functions < 1) throw ConfigError("--n must be positive");
    if (grid_size < 3) throw ConfigError("--grid-size must be at least 3");
    if (bootstrap_s < 1) throw ConfigError("--replicates must be positive");
    if (per_replicate_n < 3) throw ConfigError("--per-replicate-n must be at least 3");
    if (format != "json" && format != "csv" && format != "svg") throw ConfigError("--format must be json, csv or svg");
  }
};

inline Json to_json(const ExperimentConfig& c) {
  Json j = detail::header("config");
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["n_functions"] = c.n_functions;
  j["grid_size"] = c.grid_size;
  j["bootstrap_s"] = c.bootstrap_s;
  j["per_replicate_n"] = c.per_replicate_n;
  j["coverage_p"] = c.coverage_p;
  j["confidences"] = c.confidences;
  j["variance_threshold"] = c.variance_threshold ? Json(*c.variance_threshold) : Json(nullptr);
  j["components"] = c.components ? Json(*c.components) : Json(nullptr);
  j["scale_c"] = c.scale_c ? Json(*c.scale_c) : Json(nullptr);
  j["format"] = c.format;
  j["threads"] = worker_count();
  return j;
}

}  // namespace elastic_tb
