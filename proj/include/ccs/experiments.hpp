#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccs/types.hpp"

namespace ccs {

enum class SweepAxis { N, R, Qstar };

SweepAxis sweep_axis_from_string(const std::string& s);
std::string to_string(SweepAxis axis);

struct SweepConfig {
  SweepAxis axis = SweepAxis::N;
  std::vector<double> axis_values;
  int fixed_n = 100;
  double fixed_r = 0.5;
  double fixed_qstar = 1.0;
  int instances_per_point = 1000;
  std::uint64_t master_seed = 0;
  std::vector<std::string> algorithms = {"gcs", "equal"};
  int workers = 1;
  // Fraction of GCS threshold equilibria cross-checked by verify_pne.
  double verify_fraction = 0.01;
};

struct ExperimentRecord {
  double axis_value = 0.0;
  int seed_index = 0;
  std::string algorithm;
  double sw = 0.0;
  int active_count = 0;
  double elapsed_sec = 0.0;
};

struct AggregateRow {
  double axis_value = 0.0;
  std::string algorithm;
  double mean_sw = 0.0;
  double sd_sw = 0.0;
  double mean_active = 0.0;
  double sd_active = 0.0;
  double theory_sw = 0.0;
  double theory_active = 0.0;
};

// One record per (axis value, seed, algorithm), sorted by that key. The
// record set is identical for any worker count: instance seeds are derived
// per (axis, seed) substream and results land in preassigned slots.
std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg);

// Per-(axis value, algorithm) means and sample standard deviations, with the
// closed-form overlays n(qstar*r)^3/2 and r*qstar*n.
std::vector<AggregateRow> aggregate(const SweepConfig& cfg,
                                    const std::vector<ExperimentRecord>& records);

void emit_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

// Columns, byte-for-byte:
// axis,algorithm,mean_sw,sd_sw,mean_active,sd_active,theory_sw,theory_active
void emit_csv(const std::vector<AggregateRow>& table, const std::string& path);

// Self-contained SVG with two panels (welfare, active players): mean lines,
// 3-sd shaded bands, theory markers.
void emit_plot(const std::vector<AggregateRow>& table, const std::string& path);

std::vector<AggregateRow> parse_aggregate_csv(const std::string& path);

}  // namespace ccs
