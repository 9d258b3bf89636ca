#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "betaproc/cli.hpp"
#include "betaproc/io.hpp"
#include "betaproc/kernels.hpp"
#include "betaproc/laws.hpp"
#include "json.hpp"

namespace betaproc::cli {

namespace {

using nlohmann::json;

constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Plot frame mapping data coordinates to SVG pixels.
struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); }
  double py(double y) const { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); }
};

std::string svg_open(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" + num(kH) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + num(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel, bool log_axes) {
  std::string s;
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kH - kBottom) + "\" x2=\"" + num(kW - kRight) +
       "\" y2=\"" + num(kH - kBottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
       num(kH - kBottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4, yv = f.y0 + (f.y1 - f.y0) * i / 4;
    const std::string xl = log_axes ? num(std::pow(10.0, xv)) : num(xv);
    const std::string yl = log_axes ? num(std::pow(10.0, yv)) : num(yv);
    s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(kH - kBottom + 16) + "\" text-anchor=\"middle\">" + xl + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(f.py(yv) + 4) + "\" text-anchor=\"end\">" + yl + "</text>\n";
  }
  s += "<text x=\"" + num((kLeft + kW - kRight) / 2) + "\" y=\"" + num(kH - 12) + "\" text-anchor=\"middle\">" +
       xlabel + "</text>\n";
  s += "<text x=\"16\" y=\"" + num((kTop + kH - kBottom) / 2) + "\" transform=\"rotate(-90 16 " +
       num((kTop + kH - kBottom) / 2) + ")\" text-anchor=\"middle\">" + ylabel + "</text>\n";
  return s;
}

struct SpectralInput {
  std::string process;
  int n = 0;
  double t = 0.0;
  std::vector<double> eigenvalues;
};

struct CurveInput {
  std::string value_name;
  std::vector<double> n, value, q25, q75;
};

struct Input {
  std::string path;
  bool is_curve = false;
  SpectralInput spectral;
  CurveInput curve;
};

double to_double(const std::string& s, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("'" + path + "': bad number '" + s + "'");
  }
}

Input read_input(const std::string& path) {
  const std::string text = io::read_text_file(path);
  Input in;
  in.path = path;
  std::string schema;
  if (!text.empty() && text.find_first_not_of(" \n\t") != std::string::npos &&
      text[text.find_first_not_of(" \n\t")] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const std::exception& e) {
      throw std::runtime_error("'" + path + "': invalid JSON: " + e.what());
    }
    schema = j.value("schema", "");
    if (schema != "betaproc.spectral/1")
      throw std::runtime_error("'" + path + "': schema '" + schema + "' cannot be plotted");
    in.spectral.process = j.at("process").get<std::string>();
    in.spectral.n = std::stoi(j.at("n").get<std::string>());
    in.spectral.t = to_double(j.at("t").get<std::string>(), path);
    for (const auto& r : j.at("replicates"))
      for (double v : r.at("eigenvalue")) in.spectral.eigenvalues.push_back(v);
  } else {
    const io::CsvTable t = io::parse_csv(text);
    const auto it = t.meta.find("schema");
    schema = it == t.meta.end() ? "" : it->second;
    if (schema == "betaproc.spectral/1") {
      in.spectral.process = t.meta.at("process");
      in.spectral.n = std::stoi(t.meta.at("n"));
      in.spectral.t = to_double(t.meta.at("t"), path);
      const auto col = t.column("eigenvalue");
      for (const auto& r : t.rows) in.spectral.eigenvalues.push_back(to_double(r.at(col), path));
    } else if (schema == "betaproc.curve/1") {
      in.is_curve = true;
      in.curve.value_name = t.meta.count("value") ? t.meta.at("value") : "value";
      const auto cn = t.column("n"), cv = t.column(in.curve.value_name), c25 = t.column("q25"),
                 c75 = t.column("q75");
      for (const auto& r : t.rows) {
        in.curve.n.push_back(to_double(r.at(cn), path));
        in.curve.value.push_back(to_double(r.at(cv), path));
        in.curve.q25.push_back(to_double(r.at(c25), path));
        in.curve.q75.push_back(to_double(r.at(c75), path));
      }
    } else {
      throw std::runtime_error("'" + path + "': schema '" + schema + "' cannot be plotted");
    }
  }
  if (in.is_curve ? in.curve.n.empty() : in.spectral.eigenvalues.empty())
    throw std::runtime_error("'" + path + "': no data rows");
  return in;
}

std::string spectral_svg(const SpectralInput& s) {
  const bool herm = s.process == "hermite";
  const laws::LimitLaw law =
      laws::limit_law_at(herm ? laws::LimitKind::semicircle : laws::LimitKind::mp, s.t);
  const auto [lo, hi] = law.support();
  // Hermite eigenvalues scale by sqrt(n), Wishart eigenvalues by n.
  const double scale = herm ? std::sqrt(static_cast<double>(s.n)) : static_cast<double>(s.n);
  const int bins = 40;
  std::vector<double> counts(bins, 0.0);
  const double width = (hi - lo) / bins;
  for (double e : s.eigenvalues) {
    const double x = e / scale;
    if (x < lo || x > hi) continue;
    counts[std::min(bins - 1, static_cast<int>((x - lo) / width))] += 1.0;
  }
  for (double& c : counts) c /= s.eigenvalues.size() * width;
  std::vector<std::pair<double, double>> curve;
  for (int i = 0; i <= 400; ++i) {
    const double x = lo + (hi - lo) * (herm ? i / 400.0 : 0.005 + 0.995 * i / 400.0);
    curve.emplace_back(x, law.density(x));
  }
  double ymax = *std::max_element(counts.begin(), counts.end());
  // The MP density blows up at the hard edge; keep the axis on the bulk.
  ymax = std::max(ymax, herm ? law.density(0.0) : law.density(lo + 0.1 * (hi - lo)));
  const Frame f{lo, hi, 0.0, 1.15 * ymax};
  std::string svg = svg_open(std::string(herm ? "semicircle" : "Marchenko-Pastur") + " overlay, n = " +
                             std::to_string(s.n) + ", t = " + num(s.t));
  for (int b = 0; b < bins; ++b) {
    const double x = lo + b * width, h = std::min(counts[b], f.y1);
    svg += "<rect x=\"" + num(f.px(x)) + "\" y=\"" + num(f.py(h)) + "\" width=\"" +
           num(f.px(x + width) - f.px(x)) + "\" height=\"" + num(f.py(0) - f.py(h)) +
           "\" fill=\"#9ecae1\" stroke=\"#4292c6\" stroke-width=\"0.5\"/>\n";
  }
  svg += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
  for (const auto& [x, y] : curve) svg += num(f.px(x)) + "," + num(f.py(std::min(y, f.y1))) + " ";
  svg += "\"/>\n" + axes(f, herm ? "eigenvalue / sqrt(n)" : "eigenvalue / n", "density", false) + "</svg>\n";
  return svg;
}

std::string curve_svg(const CurveInput& c) {
  std::vector<double> lx, ly;
  double ymin = INFINITY, ymax = -INFINITY;
  for (std::size_t i = 0; i < c.n.size(); ++i) {
    lx.push_back(std::log10(c.n[i]));
    for (double v : {c.value[i], c.q25[i], c.q75[i]}) {
      if (v > 0) {
        ymin = std::min(ymin, std::log10(v));
        ymax = std::max(ymax, std::log10(v));
      }
    }
  }
  if (!std::isfinite(ymin)) ymin = -1, ymax = 0;
  if (ymax - ymin < 0.2) ymin -= 0.1, ymax += 0.1;
  double xmin = *std::min_element(lx.begin(), lx.end()), xmax = *std::max_element(lx.begin(), lx.end());
  if (xmax - xmin < 0.2) xmin -= 0.1, xmax += 0.1;
  const Frame f{xmin - 0.05 * (xmax - xmin), xmax + 0.05 * (xmax - xmin), ymin - 0.05 * (ymax - ymin),
                ymax + 0.05 * (ymax - ymin)};
  std::string svg = svg_open(c.value_name + " against n (log-log)");
  std::string line;
  for (std::size_t i = 0; i < c.n.size(); ++i) {
    if (c.q25[i] > 0 && c.q75[i] > 0)
      svg += "<line x1=\"" + num(f.px(lx[i])) + "\" y1=\"" + num(f.py(std::log10(c.q25[i]))) + "\" x2=\"" +
             num(f.px(lx[i])) + "\" y2=\"" + num(f.py(std::log10(c.q75[i]))) + "\" stroke=\"gray\"/>\n";
    if (c.value[i] > 0) {
      const std::string p = num(f.px(lx[i])) + "," + num(f.py(std::log10(c.value[i])));
      line += p + " ";
      svg += "<circle cx=\"" + num(f.px(lx[i])) + "\" cy=\"" + num(f.py(std::log10(c.value[i]))) +
             "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
  }
  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" points=\"" + line + "\"/>\n";
  svg += axes(f, "n", c.value_name, true) + "</svg>\n";
  return svg;
}

}  // namespace

CommandResult cmd_plot(const std::vector<std::string>& inputs, const std::string& out_dir) {
  if (inputs.empty()) throw std::runtime_error("plot: no input files");
  std::vector<Input> parsed;
  for (const auto& p : inputs) parsed.push_back(read_input(p));
  CommandResult res;
  for (const auto& in : parsed) {
    const std::string file =
        (std::filesystem::path(out_dir) / (std::filesystem::path(in.path).stem().string() + ".svg")).string();
    io::write_text_file(file, in.is_curve ? curve_svg(in.curve) : spectral_svg(in.spectral));
    res.files.push_back(file);
    res.lines.push_back("wrote " + file);
  }
  return res;
}

}  // namespace betaproc::cli
