#include "cli/writers.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "xxtsi/error.hpp"

namespace xxtsi::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";  // folds -0
  std::array<char, 32> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

namespace {

void grid_fields(std::ostream& os, const MetricsRecord& r) {
  os << format_double(r.alpha) << ',' << format_double(r.h) << ',' << r.n_sites << ','
     << (r.phase ? to_string(r.phase->phase) : "") << ',' << format_optional(r.mz) << ','
     << format_optional(r.c_l1_scaled) << ',' << format_optional(r.ssp) << ',' << format_optional(r.ee_half) << ','
     << format_optional(r.conc_nn) << ',' << format_optional(r.conc_nnn);
}

}  // namespace

void write_grid_csv(std::ostream& os, const std::vector<MetricsRecord>& rows) {
  os << kGridHeader << '\n';
  for (const auto& r : rows) {
    grid_fields(os, r);
    os << '\n';
  }
}

void write_scaling_csv(std::ostream& os, const std::vector<MetricsRecord>& rows) {
  os << kGridHeader << ",c_l1\n";
  for (const auto& r : rows) {
    grid_fields(os, r);
    os << ',';
    if (r.c_l1_scaled) os << format_double(*r.c_l1_scaled * r.n_sites);
    os << '\n';
  }
}

void write_compare_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  static const char* names[] = {"energy", "mz", "gxx1", "gyy1", "gxy1", "gzz1", "ssp", "ee_half", "conc_nn"};
  os << "alpha,h,n_sites,status,tolerance,max_delta";
  for (const char* n : names) os << ",fermion_" << n << ",ed_" << n << ",delta_" << n;
  os << '\n';
  for (const auto& r : rows) {
    os << format_double(r.params.alpha) << ',' << format_double(r.params.h) << ',' << r.params.n_sites << ','
       << r.note << ',' << format_double(r.tolerance) << ',';
    if (!r.skipped) os << format_double(r.max_delta);
    for (std::size_t i = 0; i < std::size(names); ++i) {
      if (r.skipped) {
        os << ",,,";
        continue;
      }
      os << ',' << format_double(r.fermion.at(i)) << ',' << format_double(r.ed.at(i)) << ','
         << format_double(r.delta.at(i));
    }
    os << '\n';
  }
}

void write_critical_csv(std::ostream& os, const std::vector<double>& alphas) {
  os << "alpha,count,h_lower,h_saturation\n";
  for (double a : alphas) {
    const auto f = critical_fields(a);
    os << format_double(a) << ',' << f.size() << ',';
    if (f.size() >= 2) os << format_double(f.front());
    os << ',';
    if (!f.empty()) os << format_double(f.back());
    os << '\n';
  }
}

namespace {

struct Rgb {
  double r, g, b;
};

// five-stop approximation of viridis
Rgb ramp(double t) {
  static const Rgb stops[] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  const Rgb& a = stops[i];
  const Rgb& b = stops[i + 1];
  return {a.r + f * (b.r - a.r), a.g + f * (b.g - a.g), a.b + f * (b.b - a.b)};
}

std::string hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(c.r)),
                static_cast<int>(std::lround(c.g)), static_cast<int>(std::lround(c.b)));
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace

void write_svg(std::ostream& os, const Heatmap& m) {
  const std::size_t nx = m.xs.size(), ny = m.ys.size();
  if (nx == 0 || ny == 0 || m.values.size() != nx * ny) throw InvalidArgument("write_svg: value count mismatch");
  const int cell = static_cast<int>(std::clamp<std::size_t>(480 / std::max(nx, ny), 2, 24));
  const int left = 60, top = 40, pw = cell * static_cast<int>(nx), ph = cell * static_cast<int>(ny);
  const int width = left + pw + 140, height = top + ph + 50;

  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& v : m.values) {
    if (!v || !std::isfinite(*v)) continue;
    lo = any ? std::min(lo, *v) : *v;
    hi = any ? std::max(hi, *v) : *v;
    any = true;
  }
  static const char* phase_colors[] = {"#d9d9d9", "#4f7fbf", "#d0743c"};
  static const char* phase_names[] = {"PM", "SL-I", "SL-II"};

  auto colour = [&](const std::optional<double>& v) -> std::string {
    if (!v || !std::isfinite(*v)) return "#808080";
    if (m.categorical) return phase_colors[std::clamp(static_cast<int>(*v), 0, 2)];
    return hex(ramp(hi > lo ? (*v - lo) / (hi - lo) : 0.5));
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<title>" << escape(m.title) << "</title>\n";
  os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << escape(m.title) << "</text>\n";
  for (std::size_t j = 0; j < ny; ++j) {
    // h grows upwards
    const int y = top + ph - cell * static_cast<int>(j + 1);
    for (std::size_t i = 0; i < nx; ++i)
      os << "<rect x=\"" << left + cell * static_cast<int>(i) << "\" y=\"" << y << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"" << colour(m.values[j * nx + i]) << "\"/>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left << "\" y=\"" << top + ph + 16 << "\">" << format_double(m.xs.front()) << "</text>\n";
  os << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"end\">"
     << format_double(m.xs.back()) << "</text>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << top + ph + 34 << "\" text-anchor=\"middle\">alpha</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + ph << "\" text-anchor=\"end\">" << format_double(m.ys.front())
     << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << format_double(m.ys.back())
     << "</text>\n";
  os << "<text x=\"" << left - 30 << "\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\">h</text>\n";

  const int lx = left + pw + 20;
  if (m.categorical) {
    for (int k = 0; k < 3; ++k) {
      os << "<rect x=\"" << lx << "\" y=\"" << top + 20 * k << "\" width=\"14\" height=\"14\" fill=\""
         << phase_colors[k] << "\"/>\n";
      os << "<text x=\"" << lx + 20 << "\" y=\"" << top + 20 * k + 11 << "\">" << phase_names[k] << "</text>\n";
    }
  } else {
    const int bars = 32, bh = std::max(4, ph / bars);
    for (int k = 0; k < bars; ++k)
      os << "<rect x=\"" << lx << "\" y=\"" << top + bh * (bars - 1 - k) << "\" width=\"16\" height=\"" << bh
         << "\" fill=\"" << hex(ramp((k + 0.5) / bars)) << "\"/>\n";
    os << "<text x=\"" << lx + 22 << "\" y=\"" << top + 10 << "\">max " << (any ? format_double(hi) : "n/a")
       << "</text>\n";
    os << "<text x=\"" << lx + 22 << "\" y=\"" << top + bh * bars << "\">min " << (any ? format_double(lo) : "n/a")
       << "</text>\n";
  }
  os << "</svg>\n";
}

void ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw InvalidArgument("cannot create output directory '" + dir + "'" + (ec ? ": " + ec.message() : ""));
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << contents;
  out.close();
  if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

}  // namespace xxtsi::cli
