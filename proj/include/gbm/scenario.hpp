#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbm/mesh.hpp"
#include "gbm/params.hpp"

namespace gbm {

enum class TumorIcKind { kGaussian, kUniform };
enum class VasculatureIcKind { kUniform, kBlobs };

struct TumorIc {
  TumorIcKind kind = TumorIcKind::kGaussian;
  double center_x = 0.0;
  double center_y = 0.0;
  double amplitude = 0.5;
  double width = 1.0;
  double uniform_value = 0.0;  // kind = uniform only
  double necrosis = 0.0;       // constant initial necrosis

  bool operator==(const TumorIc&) const = default;
};

struct VasculatureIc {
  VasculatureIcKind kind = VasculatureIcKind::kUniform;
  double uniform_value = 0.5;
  int blob_count = 8;
  double blob_amplitude = 0.8;
  double blob_width = 1.5;
  std::uint64_t seed = 0;  // 0: fall back to the run seed
  bool seed_set = false;

  bool operator==(const VasculatureIc&) const = default;
};

/// Parsed scenario: domain, discretization, model parameters, initial
/// conditions and output cadence. Parsing applies the documented defaults;
/// see README for the full key list.
struct ScenarioConfig {
  Rect domain{-9.0, 9.0, -9.0, 9.0};
  int cells_per_axis = 45;
  double dt = 1e-3;
  double t_final = 10.0;
  int output_every = 100;
  std::vector<double> snapshot_times;
  DimensionlessParams params;
  TumorIc tumor_ic;
  VasculatureIc vasculature_ic;
  std::uint64_t rng_seed = 12345;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses the line-oriented "key = value" format with sections [domain],
/// [time], [params], [tumor_ic], [vasculature_ic], [output]. '#' starts a
/// comment. Unknown sections or keys, missing required keys ([params] must
/// define kappa, alpha, gamma, delta) and out-of-range values raise
/// ConfigError with the line or key named.
ScenarioConfig parse_config(const std::string& text);

/// Reads and parses a config file; I/O failures raise ConfigError naming the
/// path.
ScenarioConfig parse_config_file(const std::string& path);

/// Serializes every field in canonical order; the result re-parses to an
/// equal config.
std::string format_config(const ScenarioConfig& config);

/// Overrides one sweepable parameter by name (kappa, alpha, gamma, delta),
/// keeping chi tied to kappa.
void set_parameter(ScenarioConfig& config, const std::string& name, double value);

struct InitialFields {
  NodalField u;
  NodalField n_field;
  NodalField phi;
};

/// Samples the configured initial conditions on the mesh nodes: a Gaussian
/// (or uniform) tumor clamped to [0,1], uniform or blob vasculature, constant
/// necrosis, and u0 = e^{-chi phi0} T0. Blob layouts come from a SplitMix64
/// stream, so a seed pins them bit-for-bit on every platform.
InitialFields generate_initial_fields(const ScenarioConfig& config,
                                      const StructuredTriMesh& mesh);

/// Per-node dump of one state.
struct SnapshotRecord {
  double time = 0.0;
  std::vector<double> x, y, t_field, n_field, phi, u;
};

/// One time-series CSV row: morphology metrics plus the per-step bound
/// monitors.
struct TimeseriesRow {
  double time = 0.0;
  double rq = 0.0, sq = 0.0;
  double int_t = 0.0, int_n = 0.0, int_total = 0.0;
  double area = 0.0, r_max = 0.0;
  double min_u = 0.0, min_n = 0.0, min_phi = 0.0, max_phi = 0.0;
  int cg_iterations = 0;
};

/// CSV with header "x,y,T,N,Phi,u", LF endings, 17 significant digits (which
/// round-trips doubles bit-exactly).
void write_snapshot(const SnapshotRecord& record, const std::string& path);

/// CSV with header
/// "t,RQ,SQ,int_T,int_N,int_total,area,r_max,min_u,min_N,min_Phi,max_Phi,cg_iters".
void write_timeseries(const std::vector<TimeseriesRow>& rows, const std::string& path);

/// Reads back a snapshot CSV (testing aid; the format round-trips exactly).
SnapshotRecord read_snapshot(const std::string& path);

}  // namespace gbm
