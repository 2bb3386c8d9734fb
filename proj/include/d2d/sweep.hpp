#ifndef D2D_SWEEP_HPP
#define D2D_SWEEP_HPP

#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "d2d/montecarlo.hpp"
#include "d2d/scenario.hpp"

namespace d2d {

struct SweepRow {
  double payload_bytes = 0.0;
  Scheme scheme = Scheme::underlay;
  double rho_a = 0.0;
  double gamma_a = 0.0;
  double cutoff = 0.0;
  double inversion_constant_w = 0.0;
  std::optional<AnalyticReport> analytic;
  std::optional<EmpiricalReport> empirical;
  std::optional<double> empirical_energy_per_bit_j;
};

/// A sweep row failed; wraps the module error with the payload and scheme.
class SweepError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::string_view, 21> kCsvColumns = {
    "payload_bytes",      "scheme",          "rho_a_bps_per_hz",   "gamma_a",
    "cutoff_mu",          "k_w",             "power_analytic_w",   "power_analytic_dbm",
    "power_mc_w",         "power_mc_se_w",   "outage_analytic",    "outage_mc",
    "outage_mc_se",       "announcer_decode_prob", "announcer_decode_mc", "sum_rate_bps",
    "energy_per_bit_j",   "energy_per_bit_mc_j", "decode_failures", "announcer_rule_mismatches",
    "trials"};

/// One row per payload point per requested scheme, ordered by payload then
/// scheme (underlay first).
inline std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, unsigned threads = 1) {
  cfg.validate();
  std::vector<SweepRow> rows;
  const bool want_u = std::find(cfg.schemes.begin(), cfg.schemes.end(), Scheme::underlay) != cfg.schemes.end();
  const bool want_o = std::find(cfg.schemes.begin(), cfg.schemes.end(), Scheme::orthogonal) != cfg.schemes.end();
  for (double payload : cfg.payload_bytes) {
    try {
      const OperatingPoint point = make_operating_point(cfg, payload);
      std::optional<EmpiricalReport> emp_u;
      std::optional<EmpiricalReport> emp_o;
      if (cfg.monte_carlo) {
        const TrialBatch batch{point, cfg.seed, cfg.trials, threads};
        if (want_u && want_o) {
          auto paired = run_paired(batch);
          emp_u = std::move(paired.underlay);
          emp_o = std::move(paired.orthogonal);
        } else if (want_u) {
          emp_u = run_underlay(batch);
        } else {
          emp_o = run_orthogonal(batch);
        }
      }
      for (Scheme s : {Scheme::underlay, Scheme::orthogonal}) {
        if ((s == Scheme::underlay && !want_u) || (s == Scheme::orthogonal && !want_o)) continue;
        SweepRow row;
        row.payload_bytes = payload;
        row.scheme = s;
        row.rho_a = point.rho_a.value();
        row.gamma_a = point.target_a.value();
        row.cutoff = point.policy(s).cutoff;
        row.inversion_constant_w = point.policy(s).inversion_constant_w;
        if (cfg.analytic) row.analytic = evaluate_analytic(point, s);
        row.empirical = s == Scheme::underlay ? emp_u : emp_o;
        if (row.empirical) {
          const auto& e = *row.empirical;
          const double s_mc = sum_rate(point.rho_b, point.rho_a, point.budget.bandwidth_hz, 1.0 - e.outage.value,
                                       e.announcer_decode_rate.value, s);
          if (s_mc > 0.0) row.empirical_energy_per_bit_j = energy_per_bit(e.mean_power_w.value, s_mc);
        }
        rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      throw SweepError("sweep point " + format_double(payload) + " B failed: " + e.what());
    }
  }
  return rows;
}

namespace detail {
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
template <class T, class F>
std::string opt(const std::optional<T>& o, F f) {
  return o ? f(*o) : std::string();
}
}  // namespace detail

/// CSV with a '#' preamble carrying the config hash, seed, and the full
/// canonical config, so every row can be regenerated from the file alone.
inline void write_csv(std::ostream& out, const ScenarioConfig& cfg, const std::vector<SweepRow>& rows) {
  out << "# d2d underlay discovery sweep\n";
  out << "# config_hash=" << config_hash(cfg) << " seed=" << cfg.seed << " trials=" << cfg.trials << '\n';
  const std::string canon = canonical_text(cfg);
  std::size_t start = 0;
  while (start < canon.size()) {
    const auto eol = canon.find('\n', start);
    out << "# " << canon.substr(start, eol - start) << '\n';
    start = eol + 1;
  }
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out << (i ? "," : "") << kCsvColumns[i];
  out << '\n';
  using detail::num;
  using detail::opt;
  for (const auto& r : rows) {
    const auto& a = r.analytic;
    const auto& e = r.empirical;
    const std::array<std::string, kCsvColumns.size()> fields = {
        num(r.payload_bytes),
        std::string(to_string(r.scheme)),
        num(r.rho_a),
        num(r.gamma_a),
        num(r.cutoff),
        num(r.inversion_constant_w),
        opt(a, [](const AnalyticReport& x) { return num(x.power.expected_power_w); }),
        opt(a, [](const AnalyticReport& x) { return num(watts_to_dbm(x.power.expected_power_w)); }),
        opt(e, [](const EmpiricalReport& x) { return num(x.mean_power_w.value); }),
        opt(e, [](const EmpiricalReport& x) { return num(x.mean_power_w.standard_error); }),
        opt(a, [](const AnalyticReport& x) { return num(x.power.outage_probability); }),
        opt(e, [](const EmpiricalReport& x) { return num(x.outage.value); }),
        opt(e, [](const EmpiricalReport& x) { return num(x.outage.standard_error); }),
        opt(a, [](const AnalyticReport& x) { return num(x.metrics.announcer_decode_probability); }),
        opt(e, [](const EmpiricalReport& x) { return num(x.announcer_decode_rate.value); }),
        opt(a, [](const AnalyticReport& x) { return num(x.metrics.sum_rate_bps); }),
        opt(a, [](const AnalyticReport& x) { return num(x.metrics.energy_per_bit_j); }),
        opt(r.empirical_energy_per_bit_j, [](double x) { return num(x); }),
        opt(e, [](const EmpiricalReport& x) { return std::to_string(x.downlink_decode_failures); }),
        opt(e, [](const EmpiricalReport& x) { return std::to_string(x.announcer_rule_mismatches); }),
        opt(e, [](const EmpiricalReport& x) { return std::to_string(x.trials); }),
    };
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  }
}

/// Writes a standalone matplotlib script that reads the sweep CSV and draws
/// power-vs-payload and energy-per-bit-vs-payload charts, one series per
/// scheme present in `rows`.
inline void emit_plot_script(const std::vector<SweepRow>& rows, const std::string& csv_path,
                             const std::string& script_path) {
  if (rows.empty()) throw std::invalid_argument("emit_plot_script needs at least one row");
  std::vector<std::string> schemes;
  for (const auto& r : rows) {
    const std::string s(to_string(r.scheme));
    if (std::find(schemes.begin(), schemes.end(), s) == schemes.end()) schemes.push_back(s);
  }
  std::ofstream out(script_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write plot script '" + script_path + "'");
  std::string scheme_list;
  for (const auto& s : schemes) scheme_list += (scheme_list.empty() ? "\"" : ", \"") + s + "\"";
  out << "#!/usr/bin/env python3\n"
         "\"\"\"Power and energy-per-bit versus announcer payload, from a d2d_sweep CSV.\"\"\"\n"
         "import csv\n"
         "import sys\n"
         "\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "CSV_PATH = sys.argv[1] if len(sys.argv) > 1 else \""
      << csv_path
      << "\"\n"
         "SCHEMES = ["
      << scheme_list
      << "]\n"
         "\n"
         "\n"
         "def load(path):\n"
         "    with open(path, newline=\"\") as fh:\n"
         "        lines = [line for line in fh if not line.startswith(\"#\")]\n"
         "    return list(csv.DictReader(lines))\n"
         "\n"
         "\n"
         "def series(rows, scheme, column, fallback):\n"
         "    xs, ys = [], []\n"
         "    for row in rows:\n"
         "        if row[\"scheme\"] != scheme:\n"
         "            continue\n"
         "        value = row[column] or row[fallback]\n"
         "        if value:\n"
         "            xs.append(float(row[\"payload_bytes\"]))\n"
         "            ys.append(float(value))\n"
         "    return xs, ys\n"
         "\n"
         "\n"
         "def main():\n"
         "    rows = load(CSV_PATH)\n"
         "    charts = [\n"
         "        (\"power_analytic_w\", \"power_mc_w\", \"E[P_B] [W]\", \"power_vs_payload.png\"),\n"
         "        (\"energy_per_bit_j\", \"energy_per_bit_mc_j\", \"energy per bit [J/bit]\", "
         "\"energy_per_bit_vs_payload.png\"),\n"
         "    ]\n"
         "    for column, fallback, label, filename in charts:\n"
         "        fig, ax = plt.subplots()\n"
         "        for scheme in SCHEMES:\n"
         "            xs, ys = series(rows, scheme, column, fallback)\n"
         "            ax.semilogy(xs, ys, marker=\"o\", label=scheme)\n"
         "        ax.set_xlabel(\"announcer payload [B]\")\n"
         "        ax.set_ylabel(label)\n"
         "        ax.grid(True, which=\"both\", alpha=0.3)\n"
         "        ax.legend()\n"
         "        fig.savefig(filename, dpi=150, bbox_inches=\"tight\")\n"
         "        plt.close(fig)\n"
         "\n"
         "\n"
         "if __name__ == \"__main__\":\n"
         "    main()\n";
  if (!out) throw std::runtime_error("failed writing plot script '" + script_path + "'");
}

}  // namespace d2d

#endif  // D2D_SWEEP_HPP
