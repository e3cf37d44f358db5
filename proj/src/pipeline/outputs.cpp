#include "otmss/pipeline/outputs.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otmss::pipeline {

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string general(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct FigureSpec {
  const char* name;
  const char* title;
  const char* ylabel;
  const char* columns; // gnuplot "using" clause(s)
  bool log_y;
};

constexpr std::array<FigureSpec, 5> kFigures{{
    {"fig_rk", "squeezing amplitude", "r_k", "using 1:2 with lines lw 2 title 'r_k'", false},
    {"fig_phik", "rotation angle", "phi_k", "using 1:3 with lines lw 2 title 'phi_k'", false},
    {"fig_betak", "number density", "|beta_k|^2",
     "using 1:4 with lines lw 2 title '|beta_k|^2'", false},
    {"fig_gammak", "OTMSS / BD power ratio", "gamma_z",
     "using 1:5 with lines lw 2 title 'gamma_z'", false},
    {"fig_deltak", "curvature power spectrum", "Delta^2_R",
     "using 1:6 with lines lw 2 dt 2 title 'BD', '' skip 1 using 1:7 with lines lw 2 title 'OTMSS'", true},
}};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace

std::string records_csv(const RunReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& rec : report.records) {
    out += sci(rec.k) + ',' + sci(rec.r) + ',' + sci(rec.phi) + ',' + sci(rec.occupation) + ',' +
           sci(rec.gamma) + ',' + sci(rec.power_bd) + ',' + sci(rec.power_otmss) + ',' +
           sci(rec.wronskian_residual) + '\n';
  }
  return out;
}

std::string summary_text(const RunReport& report) {
  const auto& s = report.summary;
  std::ostringstream out;
  out << "version: " << report.provenance.version << "\n";
  out << "timestamp: " << report.provenance.timestamp << "\n";
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(report.provenance.config_hash));
  out << "config_hash: " << hash << "\n";
  out << "records: " << report.records.size() << "\n";
  out << "failures: " << s.failures.size() << "\n";
  for (const auto& f : s.failures) out << "  failed k = " << sci(f.k) << ": " << f.reason << "\n";
  out << "max_abs_gamma_minus_1: " << sci(s.max_gamma_deviation) << "\n";
  out << "max_wronskian_residual: " << sci(s.max_wronskian_residual) << "\n";
  out << "max_occupation: " << sci(s.max_occupation) << "\n";
  if (s.fit_valid) {
    out << "fitted_A_s: " << sci(s.fitted_amplitude) << "\n";
    out << "fitted_n_s: " << sci(s.fitted_tilt) << "\n";
    out << "fit_rms_residual: " << sci(s.fit_rms_residual) << "\n";
  } else {
    out << "fitted_A_s: n/a\nfitted_n_s: n/a\n";
  }
  out << "r_range: " << sci(s.r_min) << " .. " << sci(s.r_max)
      << " (relative variation " << general(s.r_variation) << ")\n";
  out << "phi_range: " << sci(s.phi_min) << " .. " << sci(s.phi_max)
      << " (relative variation " << general(s.phi_variation) << ")\n";
  if (s.pivot_on_grid) {
    out << "pivot_gamma: " << sci(s.pivot_gamma) << "\n";
    out << "pivot_power_otmss: " << sci(s.pivot_power) << "\n";
  }
  out << "slaved_steps: " << s.slaved_steps << "\n";
  out << "mode_switches: " << s.mode_switches << "\n";
  out << "capped: " << s.capped << "\n";
  out << "elapsed_seconds: " << general(report.elapsed_seconds) << "\n";
  out << "\n# resolved configuration\n" << report.config_echo;
  return out.str();
}

std::string plot_script(const std::string& figure, double pivot) {
  for (const auto& f : kFigures) {
    if (figure != f.name) continue;
    std::ostringstream out;
    out << "# " << f.title << " versus k; run with: gnuplot " << f.name << ".plot\n";
    out << "set terminal pngcairo size 800,560\n";
    out << "set output '" << f.name << ".png'\n";
    out << "set datafile separator ','\n";
    out << "set logscale x\n";
    if (f.log_y) out << "set logscale y\n";
    out << "set format x '10^{%L}'\n";
    out << "set xlabel 'k [Mpc^{-1}]'\n";
    out << "set ylabel '" << f.ylabel << "'\n";
    out << "set title '" << f.title << "'\n";
    out << "set key top left\n";
    out << "k_pivot = " << general(pivot) << "\n";
    out << "set arrow from k_pivot, graph 0 to k_pivot, graph 1 nohead dt 3 lc rgb 'gray40'\n";
    out << "plot 'records.csv' skip 1 " << f.columns << "\n";
    return out.str();
  }
  throw std::invalid_argument("plot_script: unknown figure '" + figure + "'");
}

std::vector<std::filesystem::path> write_outputs(const RunReport& report,
                                                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + out_dir.string() +
                             "': " + ec.message());
  }
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    write_file(path, content);
    written.push_back(path);
  };
  emit("records.csv", records_csv(report));
  emit("summary.txt", summary_text(report));
  for (const auto& f : kFigures) {
    emit(std::string(f.name) + ".plot", plot_script(f.name, report.config.anchors.pivot));
  }
  return written;
}

} // namespace otmss::pipeline
