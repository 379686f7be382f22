#include "wpgap/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wpgap {

namespace fs = std::filesystem;

void Config::validate() const {
  if (!(quadratureTol > 0)) throw std::invalid_argument("quadrature_tol must be positive");
  if (precisionDigits < 30 || precisionDigits > kMaxPrecisionDigits)
    throw std::invalid_argument("precision_digits must lie in [30, 100]");
  if (gRange.first < 2 || gRange.second < gRange.first) throw std::invalid_argument("g_range must be lo,hi with 2 <= lo <= hi");
  if (defaultM < 1 || defaultM > 6) throw std::invalid_argument("default_m must lie in [1, 6]");
  if (cacheDir.empty()) throw std::invalid_argument("cache_dir is empty");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double toDouble(const std::string& key, const std::string& v) {
  size_t used = 0;
  double d = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("bad number for " + key + ": " + v);
  return d;
}

int toInt(const std::string& key, const std::string& v) {
  size_t used = 0;
  int d = std::stoi(v, &used);
  if (used != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + v);
  return d;
}

}  // namespace

Config parseConfig(const std::string& text, Config c) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineNo) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      if (key == "cache_dir") {
        c.cacheDir = value;
      } else if (key == "quadrature_tol") {
        c.quadratureTol = toDouble(key, value);
      } else if (key == "precision_digits") {
        c.precisionDigits = toInt(key, value);
      } else if (key == "g_range") {
        auto comma = value.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("g_range needs lo,hi");
        c.gRange = {toInt(key, trim(value.substr(0, comma))), toInt(key, trim(value.substr(comma + 1)))};
      } else if (key == "default_m") {
        c.defaultM = toInt(key, value);
      } else {
        throw std::invalid_argument("unknown key " + key);
      }
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("config line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

Config loadConfig(const fs::path& file, Config base) { return parseConfig(readFile(file), std::move(base)); }

void applyEnvironment(Config& c) {
  if (const char* d = std::getenv("WPGAP_CACHE_DIR"); d && *d) c.cacheDir = d;
}

void atomicWrite(const fs::path& file, const std::string& content) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, file);
}

std::string readFile(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> CsvTable::column(size_t i) const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.at(i));
  return out;
}

CsvTable parseCsv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    return cells;
  };
  if (!std::getline(in, line)) throw std::invalid_argument("empty csv");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw std::invalid_argument("ragged csv row");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    t.rows.push_back(row);
  }
  return t;
}

std::string fmt(double x) {
  if (x == 0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tickLabel(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string renderSvg(const CsvTable& t, const PlotOptions& opt) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  const double left = 70, right = 150, top = 40, bottom = 50;
  const double w = opt.width - left - right, h = opt.height - top - bottom;
  auto ty = [&](double y) { return opt.logY ? std::log10(y) : y; };
  auto usable = [&](double y) { return std::isfinite(y) && (!opt.logY || y > 0); };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& r : t.rows) {
    x0 = std::min(x0, r[0]);
    x1 = std::max(x1, r[0]);
    for (size_t c = 1; c < r.size(); ++c)
      if (usable(r[c])) {
        y0 = std::min(y0, ty(r[c]));
        y1 = std::max(y1, ty(r[c]));
      }
  }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * w; };
  auto py = [&](double y) { return top + h - (y - y0) / (y1 - y0) * h; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.width << "\" height=\""
    << opt.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << num(left) << "\" y=\"20\" font-size=\"13\">" << escape(opt.title) << "</text>\n"
    << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double xv = x0 + (x1 - x0) * i / 5, yv = y0 + (y1 - y0) * i / 5;
    s << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(top + h) << "\" x2=\"" << num(px(xv)) << "\" y2=\""
      << num(top + h + 5) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(top + h + 18) << "\" text-anchor=\"middle\">"
      << tickLabel(xv) << "</text>\n"
      << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(left) << "\" y2=\""
      << num(py(yv)) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
      << (opt.logY ? "1e" + tickLabel(yv) : tickLabel(yv)) << "</text>\n";
  }
  if (!t.header.empty())
    s << "<text x=\"" << num(left + w / 2) << "\" y=\"" << num(opt.height - 10) << "\" text-anchor=\"middle\">"
      << escape(t.header[0]) << "</text>\n";
  for (size_t c = 1; c < t.header.size(); ++c) {
    const char* color = palette[(c - 1) % 6];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& r : t.rows) {
      if (!usable(r[c])) continue;
      s << (first ? "" : " ") << num(px(r[0])) << "," << num(py(ty(r[c])));
      first = false;
    }
    s << "\"/>\n";
    double ly = top + 14 * static_cast<double>(c);
    s << "<line x1=\"" << num(left + w + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + w + 30)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << num(left + w + 35) << "\" y=\"" << num(ly + 4) << "\">" << escape(t.header[c]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace wpgap
