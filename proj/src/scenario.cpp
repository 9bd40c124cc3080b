#include "gbm/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gbm/errors.hpp"
#include "gbm/parallel.hpp"
#include "gbm/rng.hpp"

namespace gbm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct RawValue {
  std::string text;
  int line = 0;
};

using Section = std::map<std::string, RawValue>;
using Document = std::map<std::string, Section>;

Document tokenize(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      doc.try_emplace(section);
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    if (!doc[section].emplace(key, RawValue{value, line_no}).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return doc;
}

/// Pulls typed values out of a tokenized document and remembers what was
/// consumed, so leftovers can be reported as unknown keys.
class Extractor {
 public:
  explicit Extractor(Document doc) : doc_(std::move(doc)) {}

  bool has(const std::string& section, const std::string& key) {
    auto s = doc_.find(section);
    return s != doc_.end() && s->second.count(key) > 0;
  }

  double number(const std::string& section, const std::string& key, double fallback) {
    const RawValue* raw = take(section, key);
    if (!raw) return fallback;
    return parse_double(*raw, section, key);
  }

  double required_number(const std::string& section, const std::string& key) {
    const RawValue* raw = take(section, key);
    if (!raw)
      throw ConfigError("missing required key '" + key + "' in section [" + section + "]");
    return parse_double(*raw, section, key);
  }

  long integer(const std::string& section, const std::string& key, long fallback) {
    const double v = number(section, key, static_cast<double>(fallback));
    const double rounded = std::nearbyint(v);
    if (v != rounded)
      throw ConfigError("key '" + key + "' in [" + section + "] must be an integer");
    return static_cast<long>(rounded);
  }

  std::uint64_t seed(const std::string& section, const std::string& key,
                     std::uint64_t fallback, bool* was_set = nullptr) {
    const RawValue* raw = take(section, key);
    if (was_set) *was_set = raw != nullptr;
    if (!raw) return fallback;
    std::uint64_t v = 0;
    const char* first = raw->text.data();
    const char* last = first + raw->text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
      throw ConfigError("line " + std::to_string(raw->line) + ": key '" + key +
                        "' must be an unsigned integer");
    return v;
  }

  std::string word(const std::string& section, const std::string& key,
                   const std::string& fallback) {
    const RawValue* raw = take(section, key);
    return raw ? raw->text : fallback;
  }

  std::vector<double> number_list(const std::string& section, const std::string& key) {
    const RawValue* raw = take(section, key);
    std::vector<double> out;
    if (!raw) return out;
    std::stringstream ss(raw->text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      out.push_back(parse_double(RawValue{t, raw->line}, section, key));
    }
    return out;
  }

  void finish() const {
    static const std::map<std::string, int> known = {
        {"domain", 0}, {"time", 0},          {"params", 0},
        {"tumor_ic", 0}, {"vasculature_ic", 0}, {"output", 0}};
    for (const auto& [section, keys] : doc_) {
      if (known.count(section) == 0) {
        throw ConfigError("unknown section [" + section + "]");
      }
      for (const auto& [key, raw] : keys)
        if (!consumed_.count(section + "\n" + key))
          throw ConfigError("line " + std::to_string(raw.line) + ": unknown key '" + key +
                            "' in section [" + section + "]");
    }
  }

 private:
  const RawValue* take(const std::string& section, const std::string& key) {
    auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    consumed_.insert(section + "\n" + key);
    return &k->second;
  }

  static double parse_double(const RawValue& raw, const std::string& section,
                             const std::string& key) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(raw.text, &pos);
      if (pos != raw.text.size()) throw std::invalid_argument("trailing characters");
      if (!std::isfinite(v)) throw std::invalid_argument("not finite");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(raw.line) + ": key '" + key + "' in [" +
                        section + "] is not a valid number: '" + raw.text + "'");
    }
  }

  Document doc_;
  std::set<std::string> consumed_;
};

void range_check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  Extractor ex(tokenize(text));
  ScenarioConfig c;

  c.domain.xmin = ex.number("domain", "xmin", c.domain.xmin);
  c.domain.xmax = ex.number("domain", "xmax", c.domain.xmax);
  c.domain.ymin = ex.number("domain", "ymin", c.domain.ymin);
  c.domain.ymax = ex.number("domain", "ymax", c.domain.ymax);
  c.cells_per_axis = static_cast<int>(ex.integer("domain", "cells", c.cells_per_axis));
  range_check(c.domain.width() > 0.0 && c.domain.height() > 0.0,
              "[domain] bounds are degenerate");
  range_check(c.cells_per_axis >= 1, "[domain] cells must be >= 1");

  c.dt = ex.number("time", "dt", c.dt);
  c.t_final = ex.number("time", "t_final", c.t_final);
  range_check(c.dt > 0.0, "[time] dt must be > 0");
  range_check(c.t_final >= 0.0, "[time] t_final must be >= 0");

  const double kappa = ex.required_number("params", "kappa");
  const double alpha = ex.required_number("params", "alpha");
  const double gamma = ex.required_number("params", "gamma");
  const double delta = ex.required_number("params", "delta");
  range_check(kappa >= 0.0 && alpha >= 0.0 && gamma >= 0.0 && delta >= 0.0,
              "[params] values must be nonnegative");
  c.params = make_params(kappa, alpha, gamma, delta);

  const std::string tumor_kind = ex.word("tumor_ic", "kind", "gaussian");
  if (tumor_kind == "gaussian") {
    c.tumor_ic.kind = TumorIcKind::kGaussian;
  } else if (tumor_kind == "uniform") {
    c.tumor_ic.kind = TumorIcKind::kUniform;
  } else {
    throw ConfigError("[tumor_ic] kind must be 'gaussian' or 'uniform'");
  }
  c.tumor_ic.center_x = ex.number("tumor_ic", "center_x", c.tumor_ic.center_x);
  c.tumor_ic.center_y = ex.number("tumor_ic", "center_y", c.tumor_ic.center_y);
  c.tumor_ic.amplitude = ex.number("tumor_ic", "amplitude", c.tumor_ic.amplitude);
  c.tumor_ic.width = ex.number("tumor_ic", "width", c.tumor_ic.width);
  c.tumor_ic.uniform_value = ex.number("tumor_ic", "value", c.tumor_ic.uniform_value);
  c.tumor_ic.necrosis = ex.number("tumor_ic", "necrosis", c.tumor_ic.necrosis);
  range_check(c.tumor_ic.amplitude > 0.0 && c.tumor_ic.amplitude <= 1.0,
              "[tumor_ic] amplitude must lie in (0, 1]");
  range_check(c.tumor_ic.width > 0.0, "[tumor_ic] width must be > 0");
  range_check(c.tumor_ic.uniform_value >= 0.0 && c.tumor_ic.uniform_value <= 1.0,
              "[tumor_ic] value must lie in [0, 1]");
  range_check(c.tumor_ic.necrosis >= 0.0 && c.tumor_ic.necrosis <= 1.0,
              "[tumor_ic] necrosis must lie in [0, 1]");

  const std::string vasc_kind = ex.word("vasculature_ic", "kind", "uniform");
  if (vasc_kind == "uniform") {
    c.vasculature_ic.kind = VasculatureIcKind::kUniform;
  } else if (vasc_kind == "blobs") {
    c.vasculature_ic.kind = VasculatureIcKind::kBlobs;
  } else {
    throw ConfigError("[vasculature_ic] kind must be 'uniform' or 'blobs'");
  }
  c.vasculature_ic.uniform_value =
      ex.number("vasculature_ic", "value", c.vasculature_ic.uniform_value);
  c.vasculature_ic.blob_count =
      static_cast<int>(ex.integer("vasculature_ic", "count", c.vasculature_ic.blob_count));
  c.vasculature_ic.blob_amplitude =
      ex.number("vasculature_ic", "amplitude", c.vasculature_ic.blob_amplitude);
  c.vasculature_ic.blob_width =
      ex.number("vasculature_ic", "width", c.vasculature_ic.blob_width);
  c.vasculature_ic.seed =
      ex.seed("vasculature_ic", "seed", 0, &c.vasculature_ic.seed_set);
  range_check(c.vasculature_ic.uniform_value >= 0.0 && c.vasculature_ic.uniform_value <= 1.0,
              "[vasculature_ic] value must lie in [0, 1]");
  range_check(c.vasculature_ic.blob_count >= 0, "[vasculature_ic] count must be >= 0");
  range_check(c.vasculature_ic.blob_amplitude >= 0.0,
              "[vasculature_ic] amplitude must be >= 0");
  range_check(c.vasculature_ic.blob_width > 0.0, "[vasculature_ic] width must be > 0");

  c.output_every = static_cast<int>(ex.integer("output", "every", c.output_every));
  c.snapshot_times = ex.number_list("output", "snapshots");
  c.rng_seed = ex.seed("output", "seed", c.rng_seed);
  range_check(c.output_every >= 1, "[output] every must be >= 1");
  for (double t : c.snapshot_times)
    range_check(t >= 0.0, "[output] snapshot times must be >= 0");

  ex.finish();
  return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "[domain]\n";
  out << "xmin = " << fmt(c.domain.xmin) << "\n";
  out << "xmax = " << fmt(c.domain.xmax) << "\n";
  out << "ymin = " << fmt(c.domain.ymin) << "\n";
  out << "ymax = " << fmt(c.domain.ymax) << "\n";
  out << "cells = " << c.cells_per_axis << "\n\n";
  out << "[time]\n";
  out << "dt = " << fmt(c.dt) << "\n";
  out << "t_final = " << fmt(c.t_final) << "\n\n";
  out << "[params]\n";
  out << "kappa = " << fmt(c.params.kappa) << "\n";
  out << "alpha = " << fmt(c.params.alpha) << "\n";
  out << "gamma = " << fmt(c.params.gamma) << "\n";
  out << "delta = " << fmt(c.params.delta) << "\n\n";
  out << "[tumor_ic]\n";
  out << "kind = " << (c.tumor_ic.kind == TumorIcKind::kGaussian ? "gaussian" : "uniform")
      << "\n";
  out << "center_x = " << fmt(c.tumor_ic.center_x) << "\n";
  out << "center_y = " << fmt(c.tumor_ic.center_y) << "\n";
  out << "amplitude = " << fmt(c.tumor_ic.amplitude) << "\n";
  out << "width = " << fmt(c.tumor_ic.width) << "\n";
  out << "value = " << fmt(c.tumor_ic.uniform_value) << "\n";
  out << "necrosis = " << fmt(c.tumor_ic.necrosis) << "\n\n";
  out << "[vasculature_ic]\n";
  out << "kind = "
      << (c.vasculature_ic.kind == VasculatureIcKind::kUniform ? "uniform" : "blobs") << "\n";
  out << "value = " << fmt(c.vasculature_ic.uniform_value) << "\n";
  out << "count = " << c.vasculature_ic.blob_count << "\n";
  out << "amplitude = " << fmt(c.vasculature_ic.blob_amplitude) << "\n";
  out << "width = " << fmt(c.vasculature_ic.blob_width) << "\n";
  if (c.vasculature_ic.seed_set) out << "seed = " << c.vasculature_ic.seed << "\n";
  out << "\n[output]\n";
  out << "every = " << c.output_every << "\n";
  if (!c.snapshot_times.empty()) {
    out << "snapshots = ";
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i)
      out << (i ? "," : "") << fmt(c.snapshot_times[i]);
    out << "\n";
  }
  out << "seed = " << c.rng_seed << "\n";
  return out.str();
}

void set_parameter(ScenarioConfig& config, const std::string& name, double value) {
  if (!(value >= 0.0))
    throw ConfigError("parameter '" + name + "' must be nonnegative, got " + fmt(value));
  DimensionlessParams p = config.params;
  if (name == "kappa") {
    p.kappa = value;
    p.chi = value;
  } else if (name == "alpha") {
    p.alpha = value;
  } else if (name == "gamma") {
    p.gamma = value;
  } else if (name == "delta") {
    p.delta = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + name +
                      "' (expected kappa, alpha, gamma or delta)");
  }
  config.params = p;
}

InitialFields generate_initial_fields(const ScenarioConfig& config,
                                      const StructuredTriMesh& mesh) {
  const int n = mesh.node_count();
  InitialFields fields;
  fields.u.resize(n);
  fields.n_field.assign(n, config.tumor_ic.necrosis);
  fields.phi.resize(n);

  NodalField tumor(n);
  if (config.tumor_ic.kind == TumorIcKind::kUniform) {
    std::fill(tumor.begin(), tumor.end(), config.tumor_ic.uniform_value);
  } else {
    const double cx = config.tumor_ic.center_x;
    const double cy = config.tumor_ic.center_y;
    const double inv_w2 = 1.0 / (config.tumor_ic.width * config.tumor_ic.width);
    const double amp = config.tumor_ic.amplitude;
    par::parallel_for(
        n,
        [&](std::ptrdiff_t a) {
          const double dx = mesh.nodes[a].x - cx;
          const double dy = mesh.nodes[a].y - cy;
          tumor[a] = std::clamp(amp * std::exp(-(dx * dx + dy * dy) * inv_w2), 0.0, 1.0);
        },
        par::kHeavyGrain);
  }

  if (config.vasculature_ic.kind == VasculatureIcKind::kUniform) {
    std::fill(fields.phi.begin(), fields.phi.end(), config.vasculature_ic.uniform_value);
  } else {
    const std::uint64_t seed =
        config.vasculature_ic.seed_set ? config.vasculature_ic.seed : config.rng_seed;
    SplitMix64 rng(seed);
    std::vector<Vec2> centers(config.vasculature_ic.blob_count);
    for (auto& center : centers) {
      center.x = rng.next_double(config.domain.xmin, config.domain.xmax);
      center.y = rng.next_double(config.domain.ymin, config.domain.ymax);
    }
    const double inv_w2 =
        1.0 / (config.vasculature_ic.blob_width * config.vasculature_ic.blob_width);
    const double amp = config.vasculature_ic.blob_amplitude;
    par::parallel_for(
        n,
        [&](std::ptrdiff_t a) {
          double v = 0.0;
          for (const Vec2& center : centers) {
            const double dx = mesh.nodes[a].x - center.x;
            const double dy = mesh.nodes[a].y - center.y;
            v += amp * std::exp(-(dx * dx + dy * dy) * inv_w2);
          }
          fields.phi[a] = std::clamp(v, 0.0, 1.0);
        },
        par::kHeavyGrain);
  }

  const double chi = config.params.chi;
  par::parallel_for(
      n, [&](std::ptrdiff_t a) { fields.u[a] = std::exp(-chi * fields.phi[a]) * tumor[a]; },
      par::kHeavyGrain);
  return fields;
}

namespace {

void open_for_write(std::ofstream& out, const std::string& path) {
  out.open(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
}

}  // namespace

void write_snapshot(const SnapshotRecord& record, const std::string& path) {
  std::ofstream out;
  open_for_write(out, path);
  out << "x,y,T,N,Phi,u\n";
  const std::size_t n = record.x.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << fmt(record.x[i]) << ',' << fmt(record.y[i]) << ',' << fmt(record.t_field[i]) << ','
        << fmt(record.n_field[i]) << ',' << fmt(record.phi[i]) << ',' << fmt(record.u[i])
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_timeseries(const std::vector<TimeseriesRow>& rows, const std::string& path) {
  std::ofstream out;
  open_for_write(out, path);
  out << "t,RQ,SQ,int_T,int_N,int_total,area,r_max,min_u,min_N,min_Phi,max_Phi,cg_iters\n";
  for (const TimeseriesRow& r : rows) {
    out << fmt(r.time) << ',' << fmt(r.rq) << ',' << fmt(r.sq) << ',' << fmt(r.int_t) << ','
        << fmt(r.int_n) << ',' << fmt(r.int_total) << ',' << fmt(r.area) << ','
        << fmt(r.r_max) << ',' << fmt(r.min_u) << ',' << fmt(r.min_n) << ','
        << fmt(r.min_phi) << ',' << fmt(r.max_phi) << ',' << r.cg_iterations << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

SnapshotRecord read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  SnapshotRecord rec;
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y,T,N,Phi,u")
    throw std::runtime_error("bad snapshot header in " + path);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double vals[6];
    for (double& val : vals) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short row in " + path);
      char* end = nullptr;
      val = std::strtod(cell.c_str(), &end);  // strtod also accepts subnormals
      if (end != cell.c_str() + cell.size())
        throw std::runtime_error("bad number '" + cell + "' in " + path);
    }
    rec.x.push_back(vals[0]);
    rec.y.push_back(vals[1]);
    rec.t_field.push_back(vals[2]);
    rec.n_field.push_back(vals[3]);
    rec.phi.push_back(vals[4]);
    rec.u.push_back(vals[5]);
  }
  return rec;
}

}  // namespace gbm
