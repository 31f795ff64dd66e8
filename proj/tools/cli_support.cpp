#include "cli_support.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "hilbert/cache.hpp"
#include "hilbert/error.hpp"

namespace hilbert::cli {

nlohmann::json config_to_json(const RunConfig& c) {
  return {{"m", c.m},
          {"prec", c.prec},
          {"trace_bound", c.trace_bound},
          {"max_norm", c.max_norm},
          {"cmax", c.cmax},
          {"eps_window", c.eps_window},
          {"tol", c.tol},
          {"format", c.format},
          {"rng_seed", c.rng_seed}};
}

std::string config_hash(const RunConfig& c) { return sha256_hex(config_to_json(c).dump()); }

void validate(const RunConfig& c) {
  if (c.prec <= 0 || c.trace_bound <= 0 || c.max_norm <= 0 || c.cmax <= 0 || c.eps_window <= 0 || !(c.tol > 0))
    throw Error(ErrorCode::Usage, "bounds must be positive");
  if (c.format != "json" && c.format != "csv") throw Error(ErrorCode::Usage, "format must be json or csv");
  make_field(c.m);
}

TruncationPolicy policy_of(const RunConfig& c) {
  TruncationPolicy p;
  p.cmax = c.cmax;
  p.eps_window = c.eps_window;
  p.prec = c.prec;
  p.tol = c.tol;
  p.cmax_limit = std::max(p.cmax_limit, c.cmax);
  p.eps_window_limit = std::max(p.eps_window_limit, c.eps_window);
  return p;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::string render(const Result& r, const std::string& format) {
  if (format == "json") return r.doc.dump(2) + "\n";
  Table t = r.table;
  if (t.columns.empty()) {
    t.columns = {"key", "value"};
    for (const auto& [k, v] : r.doc.items()) t.rows.push_back({k, csv_scalar(v)});
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
  return out.str();
}

Emitted emit(const RunConfig& cfg, const std::string& op, const nlohmann::json& params,
             const std::function<Result()>& compute) {
  auto run = [&] {
    const Result r = compute();
    return nlohmann::json{{"exit", r.pass ? 0 : 1}, {"output", render(r, cfg.format)}}.dump();
  };
  std::string dir = cfg.cache_dir;
  if (dir.empty())
    if (const char* env = std::getenv("HILBERT_CACHE_DIR")) dir = env;
  Emitted e;
  std::string payload;
  if (dir.empty() || cfg.no_cache) {
    payload = run();
  } else {
    DiskCache cache(dir);
    DiskCache::Outcome o;
    payload = cache.get_or_compute(config_hash(cfg) + "\n" + op + "\n" + params.dump(), run, &o);
    e.cache_status = o == DiskCache::Outcome::Hit ? "hit" : o == DiskCache::Outcome::Miss ? "miss" : "recovered";
  }
  const auto j = nlohmann::json::parse(payload);
  e.text = j.at("output").get<std::string>();
  e.exit_code = j.at("exit").get<int>();
  return e;
}

namespace {

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(ErrorCode::Usage, "not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Point parse_point(const std::string& text) {
  const auto parts = split(text, ';');
  if (parts.size() != 2) throw Error(ErrorCode::Usage, "point must be 're1,im1;re2,im2'");
  Point z;
  for (int i = 0; i < 2; ++i) {
    const auto c = split(parts[i], ',');
    if (c.size() != 2) throw Error(ErrorCode::Usage, "point coordinate must be 're,im'");
    z[i] = Complex(parse_double(c[0]), parse_double(c[1]));
  }
  check_upper_half_plane(z);
  return z;
}

Ideal parse_ideal(const FieldContext& F, const std::string& text) {
  const IdealArith A(F);
  if (text.rfind("gen:", 0) == 0) {
    const FieldElem x = parse_elem(text.substr(4));
    if (!x.is_integral()) throw Error(ErrorCode::Usage, "ideal generator must be integral");
    return A.from_generator(x);
  }
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw Error(ErrorCode::Usage, "ideal must be 'g:a:b' or 'gen:x,y'");
  nlohmann::json j;
  try {
    j = {{"g", std::stoll(parts[0])}, {"a", std::stoll(parts[1])}, {"b", std::stoll(parts[2])}};
  } catch (const std::exception&) {
    throw Error(ErrorCode::Usage, "ideal entries must be integers");
  }
  return ideal_from_json(F, j);
}

OElem parse_oelem(const FieldContext& F, const std::string& text) {
  const FieldElem x = parse_elem(text);
  if (!x.is_integral()) throw Error(ErrorCode::Usage, "element must be integral");
  return F.to_int(x);
}

std::array<int, 2> parse_pair(const std::string& text) {
  const auto c = split(text, ',');
  try {
    if (c.size() == 1) return {std::stoi(c[0]), std::stoi(c[0])};
    if (c.size() == 2) return {std::stoi(c[0]), std::stoi(c[1])};
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::Usage, "expected 'n' or 'n1,n2'");
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string complex_str(Complex z) { return num(z.real()) + (z.imag() < 0 ? "" : "+") + num(z.imag()) + "i"; }

}  // namespace hilbert::cli
