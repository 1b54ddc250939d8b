#include "ccs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ccs/equilibrium.hpp"
#include "ccs/instance_gen.hpp"
#include "ccs/model.hpp"
#include "ccs/optimizers.hpp"
#include "ccs/rng.hpp"

namespace ccs {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct PointParams {
  int n;
  double r;
  double qstar;
};

PointParams resolve_point(const SweepConfig& cfg, double axis_value) {
  PointParams p{cfg.fixed_n, cfg.fixed_r, cfg.fixed_qstar};
  switch (cfg.axis) {
    case SweepAxis::N: p.n = static_cast<int>(std::llround(axis_value)); break;
    case SweepAxis::R: p.r = axis_value; break;
    case SweepAxis::Qstar: p.qstar = axis_value; break;
  }
  return p;
}

}  // namespace

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "n" || s == "N") return SweepAxis::N;
  if (s == "r" || s == "R") return SweepAxis::R;
  if (s == "qstar" || s == "q" || s == "Qstar") return SweepAxis::Qstar;
  throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::N: return "n";
    case SweepAxis::R: return "r";
    case SweepAxis::Qstar: return "qstar";
  }
  return "?";
}

std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg) {
  if (cfg.axis_values.empty()) throw std::invalid_argument("run_sweep: no axis values");
  if (cfg.instances_per_point < 1)
    throw std::invalid_argument("run_sweep: instances_per_point must be positive");

  const auto n_axis = cfg.axis_values.size();
  const auto n_algos = cfg.algorithms.size();
  const std::size_t tasks = n_axis * static_cast<std::size_t>(cfg.instances_per_point);
  std::vector<ExperimentRecord> records(tasks * n_algos);

  const int verify_every =
      cfg.verify_fraction > 0.0 ? std::max(1, static_cast<int>(std::llround(1.0 / cfg.verify_fraction)))
                                : 0;

  auto run_task = [&](std::size_t task) {
    const std::size_t ai = task / cfg.instances_per_point;
    const int si = static_cast<int>(task % cfg.instances_per_point);
    const double axis_value = cfg.axis_values[ai];
    const PointParams pt = resolve_point(cfg, axis_value);

    RandomGraphParams params;
    params.n = pt.n;
    params.r = pt.r;
    params.qstar = pt.qstar;
    params.seed = derive_seed(cfg.master_seed, ai, static_cast<std::uint64_t>(si));
    const Instance inst = random_graph_instance(params);

    for (std::size_t alg = 0; alg < n_algos; ++alg) {
      ExperimentRecord rec;
      rec.axis_value = axis_value;
      rec.seed_index = si;
      rec.algorithm = cfg.algorithms[alg];
      const double t0 = now_seconds();

      if (rec.algorithm == "gcs") {
        const SolveOutcome out = gcs(inst);
        // Equilibrium efforts follow the portion thresholds directly.
        Vec x = Vec::Zero(inst.n);
        int active = 0;
        for (int i = 0; i < inst.n; ++i)
          if (out.p[i] > 0.0) {
            x[i] = 1.0;
            ++active;
          }
        rec.sw = social_welfare(inst, x);
        rec.active_count = active;
        if (verify_every > 0 && si % verify_every == 0) {
          SolverConfig vcfg;
          if (!verify_pne(inst, MechanismSpec{Pra{out.p}}, x, vcfg))
            std::fprintf(stderr, "warning: gcs threshold profile failed verify_pne (seed %d)\n",
                         si);
        }
      } else if (rec.algorithm == "equal") {
        SolverConfig cfg2;
        cfg2.verify = false;
        const EquilibriumResult eq = greatest_equilibrium(inst, equal_allocation(inst.n), cfg2);
        rec.sw = eq.sw;
        rec.active_count = active_count(eq.profile);
      } else {
        throw std::invalid_argument("run_sweep: unknown algorithm '" + rec.algorithm + "'");
      }

      rec.elapsed_sec = now_seconds() - t0;
      records[task * n_algos + alg] = std::move(rec);
    }
  };

  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) run_task(t);
      });
    for (auto& th : pool) th.join();
  }

  std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    if (a.axis_value != b.axis_value) return a.axis_value < b.axis_value;
    if (a.seed_index != b.seed_index) return a.seed_index < b.seed_index;
    return a.algorithm < b.algorithm;
  });
  return records;
}

std::vector<AggregateRow> aggregate(const SweepConfig& cfg,
                                    const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: empty record set");

  std::map<std::pair<double, std::string>, std::vector<const ExperimentRecord*>> groups;
  for (const auto& rec : records) groups[{rec.axis_value, rec.algorithm}].push_back(&rec);

  std::vector<AggregateRow> table;
  table.reserve(groups.size());
  for (const auto& [key, recs] : groups) {
    AggregateRow row;
    row.axis_value = key.first;
    row.algorithm = key.second;
    const double count = static_cast<double>(recs.size());
    for (const auto* r : recs) {
      row.mean_sw += r->sw;
      row.mean_active += r->active_count;
    }
    row.mean_sw /= count;
    row.mean_active /= count;
    if (recs.size() > 1) {
      double ss_sw = 0.0, ss_active = 0.0;
      for (const auto* r : recs) {
        ss_sw += (r->sw - row.mean_sw) * (r->sw - row.mean_sw);
        ss_active += (r->active_count - row.mean_active) * (r->active_count - row.mean_active);
      }
      row.sd_sw = std::sqrt(ss_sw / (count - 1.0));
      row.sd_active = std::sqrt(ss_active / (count - 1.0));
    }
    const PointParams pt = resolve_point(cfg, key.first);
    const double qr = pt.qstar * pt.r;
    row.theory_sw = pt.n * qr * qr * qr / 2.0;
    row.theory_active = pt.r * pt.qstar * pt.n;
    table.push_back(std::move(row));
  }
  return table;
}

void emit_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "axis,seed,algorithm,sw,active\n";
  for (const auto& r : records)
    out << fmt(r.axis_value) << ',' << r.seed_index << ',' << r.algorithm << ',' << fmt(r.sw)
        << ',' << r.active_count << '\n';
}

void emit_csv(const std::vector<AggregateRow>& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "axis,algorithm,mean_sw,sd_sw,mean_active,sd_active,theory_sw,theory_active\n";
  for (const auto& row : table)
    out << fmt(row.axis_value) << ',' << row.algorithm << ',' << fmt(row.mean_sw) << ','
        << fmt(row.sd_sw) << ',' << fmt(row.mean_active) << ',' << fmt(row.sd_active) << ','
        << fmt(row.theory_sw) << ',' << fmt(row.theory_active) << '\n';
}

std::vector<AggregateRow> parse_aggregate_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "axis,algorithm,mean_sw,sd_sw,mean_active,sd_active,theory_sw,theory_active")
    throw std::runtime_error("unexpected aggregate CSV header in " + path);

  std::vector<AggregateRow> table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    AggregateRow row;
    std::getline(ss, cell, ',');
    row.axis_value = std::stod(cell);
    std::getline(ss, row.algorithm, ',');
    std::getline(ss, cell, ',');
    row.mean_sw = std::stod(cell);
    std::getline(ss, cell, ',');
    row.sd_sw = std::stod(cell);
    std::getline(ss, cell, ',');
    row.mean_active = std::stod(cell);
    std::getline(ss, cell, ',');
    row.sd_active = std::stod(cell);
    std::getline(ss, cell, ',');
    row.theory_sw = std::stod(cell);
    std::getline(ss, cell, ',');
    row.theory_active = std::stod(cell);
    table.push_back(std::move(row));
  }
  return table;
}

namespace {

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x, mean, sd;
};

void draw_panel(std::ostringstream& svg, double x0, double y0, double w, double h,
                const std::string& title, const std::vector<Series>& series,
                const std::vector<double>& theory_x, const std::vector<double>& theory_y) {
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymax = std::max(ymax, s.mean[i] + 3.0 * s.sd[i]);
      ymin = std::min(ymin, s.mean[i] - 3.0 * s.sd[i]);
    }
  for (std::size_t i = 0; i < theory_x.size(); ++i) {
    xmin = std::min(xmin, theory_x[i]);
    xmax = std::max(xmax, theory_x[i]);
    ymax = std::max(ymax, theory_y[i]);
    ymin = std::min(ymin, theory_y[i]);
  }
  if (xmax <= xmin) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double v) { return x0 + (v - xmin) / (xmax - xmin) * w; };
  auto py = [&](double v) { return y0 + h - (v - ymin) / (ymax - ymin) * h; };
  char buf[160];

  svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                x0 + w / 2, y0 - 8.0, title.c_str());
  svg << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\">%.3g</text>\n", x0 - 4.0,
                y0 + h + 12.0, xmin);
  svg << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n",
                x0 + w, y0 + h + 12.0, xmax);
  svg << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n",
                x0 - 4.0, y0 + h, ymin + pad);
  svg << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n",
                x0 - 4.0, y0 + 10.0, ymax - pad);
  svg << buf;

  for (const auto& s : series) {
    // 3-sd band: top edge forward, bottom edge back.
    svg << "<path class=\"band\" d=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%c%.2f %.2f ", i == 0 ? 'M' : 'L', px(s.x[i]),
                    py(s.mean[i] + 3.0 * s.sd[i]));
      svg << buf;
    }
    for (std::size_t i = s.x.size(); i-- > 0;) {
      std::snprintf(buf, sizeof buf, "L%.2f %.2f ", px(s.x[i]), py(s.mean[i] - 3.0 * s.sd[i]));
      svg << buf;
    }
    svg << "Z\" fill=\"" << s.color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";

    svg << "<polyline class=\"mean\" fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.mean[i]));
      svg << buf;
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.2\" fill=\"%s\"/>\n",
                    px(s.x[i]), py(s.mean[i]), s.color.c_str());
      svg << buf;
    }
  }

  for (std::size_t i = 0; i < theory_x.size(); ++i) {
    const double cx = px(theory_x[i]), cy = py(theory_y[i]);
    std::snprintf(buf, sizeof buf,
                  "<path class=\"theory\" d=\"M%.2f %.2fL%.2f %.2fM%.2f %.2fL%.2f %.2f\" "
                  "stroke=\"#000\" stroke-width=\"1.2\"/>\n",
                  cx - 3.5, cy - 3.5, cx + 3.5, cy + 3.5, cx - 3.5, cy + 3.5, cx + 3.5, cy - 3.5);
    svg << buf;
  }
}

}  // namespace

void emit_plot(const std::vector<AggregateRow>& table, const std::string& path) {
  if (table.empty()) throw std::invalid_argument("emit_plot: empty table");
  const std::vector<std::string> palette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::vector<std::string> algos;
  for (const auto& row : table)
    if (std::find(algos.begin(), algos.end(), row.algorithm) == algos.end())
      algos.push_back(row.algorithm);

  std::vector<Series> sw_series, active_series;
  for (std::size_t a = 0; a < algos.size(); ++a) {
    Series sw{algos[a], palette[a % palette.size()], {}, {}, {}};
    Series act = sw;
    for (const auto& row : table) {
      if (row.algorithm != algos[a]) continue;
      sw.x.push_back(row.axis_value);
      sw.mean.push_back(row.mean_sw);
      sw.sd.push_back(row.sd_sw);
      act.x.push_back(row.axis_value);
      act.mean.push_back(row.mean_active);
      act.sd.push_back(row.sd_active);
    }
    sw_series.push_back(std::move(sw));
    active_series.push_back(std::move(act));
  }

  std::vector<double> tx, tsw, tactive;
  for (const auto& row : table) {
    if (row.algorithm != algos.front()) continue;
    tx.push_back(row.axis_value);
    tsw.push_back(row.theory_sw);
    tactive.push_back(row.theory_active);
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"420\" "
         "viewBox=\"0 0 960 420\">\n<rect width=\"960\" height=\"420\" fill=\"white\"/>\n";
  draw_panel(svg, 60, 40, 380, 320, "social welfare", sw_series, tx, tsw);
  draw_panel(svg, 540, 40, 380, 320, "active players", active_series, tx, tactive);

  double ly = 395.0;
  double lx = 60.0;
  for (std::size_t a = 0; a < algos.size(); ++a) {
    svg << "<rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"14\" height=\"8\" fill=\""
        << palette[a % palette.size()] << "\"/>\n";
    svg << "<text x=\"" << lx + 18 << "\" y=\"" << ly << "\" font-size=\"11\">" << algos[a]
        << "</text>\n";
    lx += 110.0;
  }
  svg << "<text x=\"" << lx + 18 << "\" y=\"" << ly
      << "\" font-size=\"11\">x marks: closed-form prediction</text>\n";
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg.str();
}

}  // namespace ccs
