#pragma once

// Artifact files: integer grids as CSV, JSON, PGM and PPM, plus run manifests
// with SHA-256 digests. Every writer has a reader that recovers the grid.

#include <sodium.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fdcol/lattice.hpp"
#include "fdcol/random_field.hpp"
#include "fdcol/site_config.hpp"
#include "fdcol/stage_isometry.hpp"
#include "fdcol/stage_translation.hpp"

namespace fdcol {

using json = nlohmann::json;
using Grid = SiteConfig<std::int64_t>;

enum class Format { pgm, ppm, csv, json };

inline Format parse_format(const std::string& s) {
  if (s == "pgm") return Format::pgm;
  if (s == "ppm") return Format::ppm;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("fdcol: unknown format '" + s + "'");
}

inline std::string format_name(Format f) {
  switch (f) {
    case Format::pgm: return "pgm";
    case Format::ppm: return "ppm";
    case Format::csv: return "csv";
    case Format::json: return "json";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// conversions to integer grids

inline Grid to_grid(const SiteConfig<std::int64_t>& c) { return c; }
inline Grid to_grid(const SiteConfig<std::uint8_t>& c) {
  return map_values(c, [](std::uint8_t v) { return static_cast<std::int64_t>(v); });
}
inline Grid to_grid(const SiteConfig<TupleColour>& c) {
  return map_values(c, [](const TupleColour& t) { return encode_tuple(t); });
}
inline Grid to_grid(const SiteConfig<PatchColour>& c) { return encode_patch_colours(c); }

// ---------------------------------------------------------------------------
// CSV: header x1..xd,value then one row per site in lexicographic order

inline std::string grid_csv(const Grid& g) {
  std::ostringstream os;
  for (int a = 0; a < g.dim(); ++a) os << "x" << a + 1 << ",";
  os << "value\n";
  std::size_t i = 0;
  for_each_site(g.box, [&](const Site& s) {
    for (int a = 0; a < g.dim(); ++a) os << s.c[a] << ",";
    os << g.values[i++] << "\n";
  });
  return os.str();
}

inline Grid parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("fdcol: empty CSV");
  const int d = static_cast<int>(std::count(line.begin(), line.end(), ','));
  check_dim(d);
  std::vector<std::pair<Site, std::int64_t>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    Site s(d);
    for (int a = 0; a < d; ++a) {
      if (!std::getline(ls, cell, ',')) throw std::runtime_error("fdcol: short CSV row: " + line);
      s.c[a] = std::stoll(cell);
    }
    if (!std::getline(ls, cell)) throw std::runtime_error("fdcol: CSV row without value: " + line);
    rows.emplace_back(s, std::stoll(cell));
  }
  if (rows.empty()) throw std::runtime_error("fdcol: CSV has no rows");
  Site lo = rows.front().first, hi = lo;
  for (const auto& [s, v] : rows)
    for (int a = 0; a < d; ++a) {
      lo.c[a] = std::min(lo.c[a], s.c[a]);
      hi.c[a] = std::max(hi.c[a], s.c[a]);
    }
  Grid g(Box(lo, hi));
  if (g.size() != rows.size()) throw std::runtime_error("fdcol: CSV rows do not fill a box");
  for (const auto& [s, v] : rows) g.at(s) = v;
  return g;
}

// ---------------------------------------------------------------------------
// JSON grid

inline json grid_json(const Grid& g) {
  std::vector<std::int64_t> lo(g.box.lo.c.begin(), g.box.lo.c.begin() + g.dim());
  std::vector<std::int64_t> hi(g.box.hi.c.begin(), g.box.hi.c.begin() + g.dim());
  return {{"kind", "grid"}, {"dim", g.dim()}, {"lo", lo}, {"hi", hi}, {"margin", g.margin}, {"values", g.values}};
}

inline Grid grid_from_json(const json& j) {
  if (j.value("kind", "") != "grid") throw std::runtime_error("fdcol: JSON is not a grid");
  const int d = j.at("dim").get<int>();
  Site lo(d), hi(d);
  for (int a = 0; a < d; ++a) {
    lo.c[a] = j.at("lo").at(a).get<std::int64_t>();
    hi.c[a] = j.at("hi").at(a).get<std::int64_t>();
  }
  Grid g(Box(lo, hi));
  g.margin = j.value("margin", std::int64_t{0});
  auto vals = j.at("values").get<std::vector<std::int64_t>>();
  if (vals.size() != g.size()) throw std::runtime_error("fdcol: grid JSON has " + std::to_string(vals.size()) + " values for " + std::to_string(g.size()) + " sites");
  g.values = std::move(vals);
  return g;
}

// ---------------------------------------------------------------------------
// images (d <= 2; a 1D grid is one row)

namespace detail {

inline std::pair<std::int64_t, std::int64_t> image_shape(const Grid& g) {
  if (g.dim() > 2) throw std::invalid_argument("fdcol: images need d <= 2");
  if (g.dim() == 1) return {1, g.box.extent(0)};
  return {g.box.extent(0), g.box.extent(1)};
}

inline std::string box_tag(const Box& b) {
  std::ostringstream os;
  os << b.dim();
  for (int a = 0; a < b.dim(); ++a) os << " " << b.lo.c[a] << " " << b.hi.c[a];
  return os.str();
}

inline Box parse_box_tag(std::istringstream& is) {
  int d = 0;
  is >> d;
  check_dim(d);
  Site lo(d), hi(d);
  for (int a = 0; a < d; ++a) is >> lo.c[a] >> hi.c[a];
  return Box(lo, hi);
}

struct Pnm {
  std::string magic;
  std::vector<std::string> comments;
  std::int64_t width = 0, height = 0, maxval = 0;
  std::string data;
};

inline Pnm parse_pnm(const std::string& bytes) {
  Pnm p;
  std::size_t pos = 0;
  auto token = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        const std::size_t end = bytes.find('\n', pos);
        p.comments.push_back(bytes.substr(pos + 1, end - pos - 1));
        pos = end == std::string::npos ? bytes.size() : end + 1;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  p.magic = token();
  p.width = std::stoll(token());
  p.height = std::stoll(token());
  p.maxval = std::stoll(token());
  ++pos;  // single whitespace before the raster
  p.data = bytes.substr(pos);
  return p;
}

inline std::string comment_value(const Pnm& p, const std::string& key) {
  for (const auto& c : p.comments) {
    const std::string k = " fdcol " + key + " ";
    if (c.rfind(k, 0) == 0) return c.substr(k.size());
  }
  throw std::runtime_error("fdcol: image lacks the '" + key + "' header");
}

inline std::array<std::uint8_t, 3> hashed_rgb(std::int64_t v) {
  const std::uint64_t h = label("colour", static_cast<std::uint64_t>(v));
  return {static_cast<std::uint8_t>(h), static_cast<std::uint8_t>(h >> 8), static_cast<std::uint8_t>(h >> 16)};
}

inline constexpr std::array<std::array<std::uint8_t, 3>, 16> kPalette{{{230, 25, 75},
                                                                      {60, 180, 75},
                                                                      {0, 130, 200},
                                                                      {255, 225, 25},
                                                                      {245, 130, 48},
                                                                      {145, 30, 180},
                                                                      {70, 240, 240},
                                                                      {240, 50, 230},
                                                                      {210, 245, 60},
                                                                      {250, 190, 212},
                                                                      {0, 128, 128},
                                                                      {220, 190, 255},
                                                                      {170, 110, 40},
                                                                      {128, 0, 0},
                                                                      {0, 0, 128},
                                                                      {128, 128, 128}}};

}  // namespace detail

struct ImageInfo {
  bool lossless = true;
  bool hashed = false;  // PPM colours hashed instead of palette-mapped
  std::string note;
};

/// Greyscale: values shifted to 0 and stretched by an integer factor when at
/// most 256 levels are present (lossless); otherwise scaled to 0..255 (lossy).
inline std::string grid_pgm(const Grid& g, ImageInfo* info = nullptr) {
  const auto [h, w] = detail::image_shape(g);
  const auto [mn_it, mx_it] = std::minmax_element(g.values.begin(), g.values.end());
  const std::int64_t mn = *mn_it, mx = *mx_it, range = mx - mn;
  ImageInfo inf;
  std::int64_t stretch = range == 0 ? 1 : 255 / range;
  std::string raster(g.values.size(), '\0');
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    std::int64_t level = 0;
    if (stretch >= 1) {
      level = (g.values[i] - mn) * stretch;
    } else {
      level = static_cast<std::int64_t>(static_cast<long double>(g.values[i] - mn) * 255.0L / static_cast<long double>(range) + 0.5L);
    }
    raster[i] = static_cast<char>(level);
  }
  if (stretch < 1) {
    inf.lossless = false;
    inf.note = "pgm scaled " + std::to_string(range + 1) + " levels into 256";
  }
  std::ostringstream os;
  os << "P5\n# fdcol box " << detail::box_tag(g.box) << "\n# fdcol scale " << mn << " " << mx << " " << std::max<std::int64_t>(stretch, 0)
     << "\n"
     << w << " " << h << "\n255\n"
     << raster;
  if (info) *info = inf;
  return os.str();
}

inline Grid parse_pgm(const std::string& bytes) {
  const auto p = detail::parse_pnm(bytes);
  if (p.magic != "P5") throw std::runtime_error("fdcol: not a binary PGM");
  std::istringstream bs(detail::comment_value(p, "box"));
  Grid g(detail::parse_box_tag(bs));
  std::istringstream ss(detail::comment_value(p, "scale"));
  std::int64_t mn = 0, mx = 0, stretch = 0;
  ss >> mn >> mx >> stretch;
  if (p.data.size() != g.size()) throw std::runtime_error("fdcol: PGM raster size mismatch");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto level = static_cast<std::int64_t>(static_cast<unsigned char>(p.data[i]));
    g.values[i] = stretch >= 1 ? mn + level / stretch
                               : mn + static_cast<std::int64_t>(static_cast<long double>(level) * static_cast<long double>(mx - mn) / 255.0L + 0.5L);
  }
  return g;
}

/// Colour map: a fixed 16-entry palette indexed by rank of the value, or
/// hashed colours when more than 16 values occur. The value list is stored
/// in the header so the grid can be read back.
inline std::string grid_ppm(const Grid& g, ImageInfo* info = nullptr) {
  const auto [h, w] = detail::image_shape(g);
  std::vector<std::int64_t> vals = g.values;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  ImageInfo inf;
  inf.hashed = vals.size() > detail::kPalette.size();
  if (inf.hashed) inf.note = "ppm palette overflow: " + std::to_string(vals.size()) + " values, hashed colours";
  std::map<std::int64_t, std::array<std::uint8_t, 3>> rgb;
  for (std::size_t i = 0; i < vals.size(); ++i) rgb[vals[i]] = inf.hashed ? detail::hashed_rgb(vals[i]) : detail::kPalette[i];
  std::string raster;
  raster.reserve(3 * g.values.size());
  for (auto v : g.values)
    for (auto c : rgb[v]) raster.push_back(static_cast<char>(c));
  std::ostringstream os;
  os << "P6\n# fdcol box " << detail::box_tag(g.box) << "\n# fdcol values";
  for (auto v : vals) os << " " << v;
  os << "\n# fdcol mode " << (inf.hashed ? "hashed" : "palette") << "\n" << w << " " << h << "\n255\n" << raster;
  if (info) *info = inf;
  return os.str();
}

inline Grid parse_ppm(const std::string& bytes) {
  const auto p = detail::parse_pnm(bytes);
  if (p.magic != "P6") throw std::runtime_error("fdcol: not a binary PPM");
  std::istringstream bs(detail::comment_value(p, "box"));
  Grid g(detail::parse_box_tag(bs));
  std::istringstream vs(detail::comment_value(p, "values"));
  std::vector<std::int64_t> vals;
  for (std::int64_t v; vs >> v;) vals.push_back(v);
  const bool hashed = detail::comment_value(p, "mode") == "hashed";
  std::map<std::array<std::uint8_t, 3>, std::int64_t> back;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const auto c = hashed ? detail::hashed_rgb(vals[i]) : detail::kPalette.at(i);
    if (!back.emplace(c, vals[i]).second) throw std::runtime_error("fdcol: PPM colours are ambiguous");
  }
  if (p.data.size() != 3 * g.size()) throw std::runtime_error("fdcol: PPM raster size mismatch");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::array<std::uint8_t, 3> c{static_cast<std::uint8_t>(p.data[3 * i]), static_cast<std::uint8_t>(p.data[3 * i + 1]),
                                        static_cast<std::uint8_t>(p.data[3 * i + 2])};
    g.values[i] = back.at(c);
  }
  return g;
}

inline std::string encode_grid(const Grid& g, Format f, ImageInfo* info = nullptr) {
  switch (f) {
    case Format::csv: return grid_csv(g);
    case Format::json: return grid_json(g).dump() + "\n";
    case Format::pgm: return grid_pgm(g, info);
    case Format::ppm: return grid_ppm(g, info);
  }
  return {};
}

inline Grid decode_grid(const std::string& bytes, Format f) {
  switch (f) {
    case Format::csv: return parse_csv(bytes);
    case Format::json: return grid_from_json(json::parse(bytes));
    case Format::pgm: return parse_pgm(bytes);
    case Format::ppm: return parse_ppm(bytes);
  }
  throw std::logic_error("fdcol: bad format");
}

// ---------------------------------------------------------------------------
// files and digests

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fdcol: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("fdcol: cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("fdcol: write failed for " + path);
}

inline std::string sha256_hex(const std::string& bytes) {
  detail::hash_key();  // initialises libsodium
  unsigned char out[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(out, reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  std::ostringstream os;
  for (unsigned char c : out) os << std::hex << std::setw(2) << std::setfill('0') << int(c);
  return os.str();
}

/// Grid file format from its extension.
inline Format format_of_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) throw std::invalid_argument("fdcol: cannot infer format of " + path);
  return parse_format(path.substr(dot + 1));
}

inline Grid read_grid(const std::string& path) { return decode_grid(read_file(path), format_of_path(path)); }

// ---------------------------------------------------------------------------
// manifest

struct ManifestOutput {
  std::string file;
  std::string format;
  std::string sha256;
  std::string note;
};

struct RunManifest {
  json config = json::object();
  std::uint64_t seed = 0;
  int dim = 0;
  json spec = json::object();
  std::vector<std::string> stages;
  std::vector<ManifestOutput> outputs;
  std::vector<std::pair<std::string, double>> timings;
  unsigned threads = 1;

  json to_json() const {
    json outs = json::array();
    for (const auto& o : outputs) {
      json e{{"file", o.file}, {"format", o.format}, {"sha256", o.sha256}};
      if (!o.note.empty()) e["note"] = o.note;
      outs.push_back(e);
    }
    json t = json::object();
    for (const auto& [k, v] : timings) t[k] = v;
    return {{"kind", "manifest"},
            {"config", config},
            {"seed", seed},
            {"dim", dim},
            {"spec", spec},
            {"stages", stages},
            {"outputs", outs},
            {"timings_s", t},
            {"threads", threads},
            {"versions", {{"fdcol", "1.0.0"}, {"libsodium", sodium_version_string()}, {"nlohmann_json", NLOHMANN_JSON_VERSION_MAJOR * 10000 + NLOHMANN_JSON_VERSION_MINOR * 100 + NLOHMANN_JSON_VERSION_PATCH}}}};
  }
};

inline json spec_json(const PipelineSpec& s) {
  return {{"d", s.d},
          {"kappa", s.kappa},
          {"net_scale", s.net_scale},
          {"cluster_scale", s.cluster_scale},
          {"tiling_range", s.tiling_range},
          {"tiling_cover", s.tiling_cover},
          {"label_bound", s.label_bound},
          {"margin_scale", s.margin_scale},
          {"net_margin", s.net_margin()},
          {"reduce_margin", s.reduce_margin},
          {"q", s.q}};
}

}  // namespace fdcol
