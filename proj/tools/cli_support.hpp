#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilbert/modforms.hpp"

namespace hilbert::cli {

struct RunConfig {
  int m = 5;
  long prec = 192;
  std::int64_t trace_bound = 40;
  std::int64_t max_norm = 200;
  std::int64_t cmax = 100;
  int eps_window = 3;
  double tol = 1e-10;
  std::string format = "json";
  std::string cache_dir;
  bool no_cache = false;
  std::uint64_t rng_seed = 20240601;
};

/// Fields that determine results; cache_dir and no_cache are excluded.
nlohmann::json config_to_json(const RunConfig& c);
std::string config_hash(const RunConfig& c);
void validate(const RunConfig& c);
TruncationPolicy policy_of(const RunConfig& c);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Result {
  nlohmann::json doc;
  Table table;
  bool pass = true;
};

std::string render(const Result& r, const std::string& format);

/// Rendered output and exit code, through the cache when one is configured.
struct Emitted {
  std::string text;
  int exit_code = 0;
  std::string cache_status = "off";
};

Emitted emit(const RunConfig& cfg, const std::string& op, const nlohmann::json& params,
             const std::function<Result()>& compute);

Point parse_point(const std::string& text);
Ideal parse_ideal(const FieldContext& F, const std::string& text);
OElem parse_oelem(const FieldContext& F, const std::string& text);
std::array<int, 2> parse_pair(const std::string& text);

std::string num(double x);
std::string complex_str(Complex z);

}  // namespace hilbert::cli
