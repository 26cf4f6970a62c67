#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace cgl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("expected a number, got '" + std::string(s) + "'");
  return v;
}

long parse_integer(std::string_view s) {
  s = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("expected an unsigned 64-bit integer, got '" + std::string(s) + "'");
  return v;
}

int parse_int(std::string_view s) {
  const long v = parse_integer(s);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError("integer out of range");
  return static_cast<int>(v);
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view s, Parse parse) {
  std::vector<T> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(static_cast<T>(parse(s.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class Access>
Field real_field(std::string key, Access access) {
  return {std::move(key), [access](RunConfig& c, std::string_view v) { access(c) = parse_real(v); },
          [access](const RunConfig& c) -> std::optional<std::string> {
            return format_double(access(c));
          }};
}

template <class Access>
Field int_field(std::string key, Access access) {
  return {std::move(key),
          [access](RunConfig& c, std::string_view v) { access(c) = parse_int(v); },
          [access](const RunConfig& c) -> std::optional<std::string> {
            return std::to_string(access(c));
          }};
}

template <class Access>
Field long_field(std::string key, Access access) {
  return {std::move(key),
          [access](RunConfig& c, std::string_view v) { access(c) = parse_integer(v); },
          [access](const RunConfig& c) -> std::optional<std::string> {
            return std::to_string(access(c));
          }};
}

template <class Access>
Field optional_int_field(std::string key, Access access) {
  return {std::move(key),
          [access](RunConfig& c, std::string_view v) { access(c) = parse_int(v); },
          [access](const RunConfig& c) -> std::optional<std::string> {
            if (!access(c)) return std::nullopt;
            return std::to_string(*access(c));
          }};
}

template <class Access>
Field string_field(std::string key, Access access) {
  return {std::move(key), [access](RunConfig& c, std::string_view v) { access(c) = std::string(trim(v)); },
          [access](const RunConfig& c) -> std::optional<std::string> { return access(c); }};
}

template <class Access>
Field real_list_field(std::string key, Access access) {
  return {std::move(key),
          [access](RunConfig& c, std::string_view v) { access(c) = parse_list<double>(v, parse_real); },
          [access](const RunConfig& c) -> std::optional<std::string> { return join(access(c)); }};
}

template <class Access>
Field int_list_field(std::string key, Access access) {
  return {std::move(key),
          [access](RunConfig& c, std::string_view v) { access(c) = parse_list<int>(v, parse_int); },
          [access](const RunConfig& c) -> std::optional<std::string> { return join(access(c)); }};
}

void add_recipe_fields(std::vector<Field>& fields, const std::string& prefix,
                       RecipeKnobs RunConfig::*member) {
  fields.push_back(int_field(prefix + ".n_init", [member](auto& c) -> auto& { return (c.*member).n_init; }));
  fields.push_back(int_field(prefix + ".collect", [member](auto& c) -> auto& { return (c.*member).collect; }));
  fields.push_back(int_field(prefix + ".stride", [member](auto& c) -> auto& { return (c.*member).stride; }));
  fields.push_back(optional_int_field(prefix + ".burn_in", [member](auto& c) -> auto& { return (c.*member).burn_in; }));
  fields.push_back(real_field(prefix + ".burn_target", [member](auto& c) -> auto& { return (c.*member).burn_target; }));
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(real_field("lambda", [](auto& c) -> auto& { return c.model.lambda; }));
    f.push_back(real_field("mu", [](auto& c) -> auto& { return c.model.mu; }));
    f.push_back(real_field("gamma", [](auto& c) -> auto& { return c.model.gamma; }));
    f.push_back(real_field("beta", [](auto& c) -> auto& { return c.model.beta; }));
    f.push_back(real_field("k", [](auto& c) -> auto& { return c.model.k; }));
    f.push_back(real_field("nu", [](auto& c) -> auto& { return c.model.nu; }));
    f.push_back(real_field("p", [](auto& c) -> auto& { return c.model.p; }));
    f.push_back(real_field("eta", [](auto& c) -> auto& { return c.model.eta; }));
    // window is applied before any g entry; see parse_config.
    f.push_back({"window", [](RunConfig& c, std::string_view v) { c.model.resize_window(parse_int(v)); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return std::to_string(c.model.window);
                 }});
    f.push_back({"seed", [](RunConfig& c, std::string_view v) { c.seed = parse_u64(v); },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.seed); }});
    f.push_back({"eps", [](RunConfig& c, std::string_view v) { c.eps = parse_real(v); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (!c.eps) return std::nullopt;
                   return format_double(*c.eps);
                 }});
    f.push_back(real_field("eps_fraction", [](auto& c) -> auto& { return c.eps_fraction; }));
    f.push_back(real_field("fp_tol", [](auto& c) -> auto& { return c.fp_tol; }));
    f.push_back(int_field("fp_max_iter", [](auto& c) -> auto& { return c.fp_max_iter; }));
    f.push_back(int_field("substeps", [](auto& c) -> auto& { return c.substeps; }));
    f.push_back(real_field("T", [](auto& c) -> auto& { return c.T; }));
    f.push_back(string_field("u0", [](auto& c) -> auto& { return c.u0; }));
    f.push_back(int_list_field("error.k", [](auto& c) -> auto& { return c.error_k; }));
    f.push_back(int_field("error.samples", [](auto& c) -> auto& { return c.error_samples; }));
    f.push_back(int_field("invariance.samples", [](auto& c) -> auto& { return c.invariance_samples; }));
    f.push_back(int_field("invariance.steps", [](auto& c) -> auto& { return c.invariance_steps; }));
    add_recipe_fields(f, "attractor", &RunConfig::attractor);
    f.push_back(real_field("attractor.slack", [](auto& c) -> auto& { return c.attractor_slack; }));
    f.push_back(real_field("attractor.zero_tol", [](auto& c) -> auto& { return c.zero_tol; }));
    f.push_back(int_field("tail.from", [](auto& c) -> auto& { return c.tail_from; }));
    f.push_back(real_field("tail.bound", [](auto& c) -> auto& { return c.tail_bound; }));
    add_recipe_fields(f, "sweep", &RunConfig::sweep);
    f.push_back(real_field("sweep.m.burn_target", [](auto& c) -> auto& { return c.sweep_m_burn_target; }));
    f.push_back(int_list_field("sweep.eps.k", [](auto& c) -> auto& { return c.sweep_eps_k; }));
    f.push_back(int_list_field("sweep.m", [](auto& c) -> auto& { return c.sweep_m; }));
    f.push_back(real_list_field("sweep.a", [](auto& c) -> auto& { return c.sweep_a; }));
    f.push_back(real_field("sweep.slack", [](auto& c) -> auto& { return c.slack; }));
    f.push_back(real_field("sweep.m.final", [](auto& c) -> auto& { return c.m_final_bound; }));
    f.push_back(int_field("noise.m", [](auto& c) -> auto& { return c.noise_m; }));
    f.push_back(real_field("noise.a_star", [](auto& c) -> auto& { return c.a_star; }));
    f.push_back(real_field("noise.zero_tol", [](auto& c) -> auto& { return c.a_zero_tol; }));
    f.push_back(long_field("ou.samples", [](auto& c) -> auto& { return c.ou_samples; }));
    f.push_back(real_field("ou.dt", [](auto& c) -> auto& { return c.ou_dt; }));
    f.push_back(real_list_field("ou.horizons", [](auto& c) -> auto& { return c.ou_horizons; }));
    f.push_back(real_field("ou.tol", [](auto& c) -> auto& { return c.ou_tol; }));
    f.push_back(int_field("radius.paths", [](auto& c) -> auto& { return c.radius_paths; }));
    f.push_back(real_list_field("radius.a", [](auto& c) -> auto& { return c.radius_a; }));
    f.push_back(real_field("radius.dt", [](auto& c) -> auto& { return c.radius_dt; }));
    f.push_back(real_field("radius.mc_dt", [](auto& c) -> auto& { return c.radius_mc_dt; }));
    f.push_back(real_field("radius.rel_tol", [](auto& c) -> auto& { return c.radius_rel_tol; }));
    f.push_back(real_field("radius.exact_tol", [](auto& c) -> auto& { return c.radius_exact_tol; }));
    f.push_back(string_field("output.prefix", [](auto& c) -> auto& { return c.output_prefix; }));
    f.push_back(string_field("output.format", [](auto& c) -> auto& { return c.output_format; }));
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

struct Entry {
  std::string key;
  std::string value;
  int line;
};

[[noreturn]] void fail_at(int line, const std::string& key, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + " (" + key + "): " + msg);
}

void load_force_file(RunConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open force file '" + path.string() + "'");
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = trim(raw);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    const auto split = s.find_first_of(" \t,");
    if (split == std::string_view::npos)
      throw ConfigError(path.string() + ":" + std::to_string(line) + ": expected '<index> <complex>'");
    try {
      c.model.set_force(parse_int(s.substr(0, split)), parse_complex(trim(s.substr(split + 1))));
    } catch (const Error& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Complex parse_complex(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ConfigError("empty complex value");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  s.remove_suffix(1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_real(s)};
  return {parse_real(s.substr(0, split)), parse_real(s.substr(split))};
}

std::string format_complex(Complex value) {
  const std::string im = format_double(value.imag());
  const bool signed_im = !im.empty() && (im.front() == '-');
  return format_double(value.real()) + (signed_im ? "" : "+") + im + "i";
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<Entry> entries;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(trim(raw.substr(0, eq)));
    std::string value(trim(raw.substr(eq + 1)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (auto [it, fresh] = seen.emplace(key, line_no); !fresh)
      fail_at(line_no, key, "duplicate key (first set on line " + std::to_string(it->second) + ")");
    entries.push_back({std::move(key), std::move(value), line_no});
  }

  RunConfig c;
  auto is_force = [](const Entry& e) { return e.key.rfind("g.", 0) == 0; };
  auto apply = [&](const Entry& e) {
    try {
      if (e.key == "g.file") {
        std::filesystem::path p(e.value);
        load_force_file(c, p.is_relative() ? base_dir / p : p);
      } else if (is_force(e)) {
        c.model.set_force(parse_int(e.key.substr(2)), parse_complex(e.value));
      } else if (const Field* f = find_field(e.key)) {
        f->set(c, e.value);
      } else {
        throw ConfigError("unknown key");
      }
    } catch (const Error& err) {
      fail_at(e.line, e.key, err.what());
    }
  };

  // Precedence: window, then scalar keys, then g.file, then inline g.<j>.
  for (const auto& e : entries)
    if (e.key == "window") apply(e);
  const bool has_force = std::any_of(entries.begin(), entries.end(), is_force);
  if (has_force) c.model.g.assign(c.model.g.size(), Complex{});
  for (const auto& e : entries)
    if (e.key != "window" && !is_force(e)) apply(e);
  for (const auto& e : entries)
    if (e.key == "g.file") apply(e);
  for (const auto& e : entries)
    if (is_force(e) && e.key != "g.file") apply(e);

  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  for (const auto& f : fields()) {
    if (auto v = f.get(c)) out += f.key + " = " + *v + "\n";
    if (f.key == "window") {
      for (int j = -c.model.window; j <= c.model.window; ++j)
        if (c.model.force(j) != Complex{})
          out += "g." + std::to_string(j) + " = " + format_complex(c.model.force(j)) + "\n";
    }
  }
  return out;
}

namespace {

template <class T, class Cmp>
void require_sorted(const std::vector<T>& v, const char* key, Cmp cmp, const char* order) {
  if (v.empty()) throw ConfigError(std::string(key) + ": grid must be nonempty");
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (!cmp(v[i], v[i + 1]))
      throw ConfigError(std::string(key) + ": grid must be strictly " + order);
}

}  // namespace

void validate_config(const RunConfig& c) {
  try {
    c.model.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("invalid model parameters: ") + e.what());
  }
  auto less = [](auto a, auto b) { return a < b; };
  auto greater = [](auto a, auto b) { return a > b; };
  if (c.eps && !(*c.eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(c.eps_fraction > 0.0)) throw ConfigError("eps_fraction must be positive");
  if (!(c.fp_tol > 0.0)) throw ConfigError("fp_tol must be positive");
  if (c.fp_max_iter < 1) throw ConfigError("fp_max_iter must be >= 1");
  if (c.substeps < 1) throw ConfigError("substeps must be >= 1");
  if (!(c.T > 0.0)) throw ConfigError("T must be positive");
  if (c.u0 != "random" && c.u0 != "zero") throw ConfigError("u0 must be 'random' or 'zero'");
  if (c.error_samples < 1) throw ConfigError("error.samples must be >= 1");
  require_sorted(c.error_k, "error.k", less, "increasing");
  if (c.error_k.size() < 2) throw ConfigError("error.k: a slope fit needs two grid points");
  require_sorted(c.sweep_eps_k, "sweep.eps.k", less, "increasing");
  require_sorted(c.sweep_m, "sweep.m", less, "increasing");
  for (int m : c.sweep_m)
    if (m < 1) throw ConfigError("sweep.m: entries must be >= 1");
  require_sorted(c.sweep_a, "sweep.a", greater, "decreasing");
  for (double a : c.sweep_a)
    if (!(a > 0.0) || a > c.a_star) throw ConfigError("sweep.a: entries must lie in (0, a_star]");
  if (c.noise_m < 0) throw ConfigError("noise.m must be >= 0");
  for (const auto* r : {&c.attractor, &c.sweep}) {
    if (r->n_init < 1 || r->collect < 1 || r->stride < 1)
      throw ConfigError("recipe n_init, collect and stride must be >= 1");
    if (r->burn_in && *r->burn_in < 0) throw ConfigError("recipe burn_in must be >= 0");
    if (!(r->burn_target > 0.0 && r->burn_target < 1.0))
      throw ConfigError("recipe burn_target must lie in (0, 1)");
  }
  if (!(c.sweep_m_burn_target > 0.0 && c.sweep_m_burn_target < 1.0))
    throw ConfigError("sweep.m.burn_target must lie in (0, 1)");
  if (!(c.slack >= 0.0)) throw ConfigError("sweep.slack must be nonnegative");
  if (c.tail_from < 1) throw ConfigError("tail.from must be >= 1");
  if (c.ou_samples < 2) throw ConfigError("ou.samples must be >= 2");
  if (!(c.ou_dt > 0.0)) throw ConfigError("ou.dt must be positive");
  require_sorted(c.ou_horizons, "ou.horizons", less, "increasing");
  if (c.radius_paths < 2 || c.radius_paths % 2 != 0)
    throw ConfigError("radius.paths must be a positive even number (antithetic pairs)");
  require_sorted(c.radius_a, "radius.a", less, "increasing");
  if (!(c.radius_dt > 0.0) || !(c.radius_mc_dt > 0.0))
    throw ConfigError("radius.dt and radius.mc_dt must be positive");
  if (c.invariance_samples < 1 || c.invariance_steps < 1)
    throw ConfigError("invariance.samples and invariance.steps must be >= 1");
  if (c.output_format != "csv") throw ConfigError("output.format: only 'csv' is supported");
}

double resolved_eps(const RunConfig& c) {
  if (c.eps) return *c.eps;
  return c.eps_fraction * compute_constants(c.model).eps_star;
}

}  // namespace cgl
