#include "rtsep/datagen.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rtsep/separability.hpp"

namespace rtsep::datagen {

using geom::Point;
using geom::Rect;

double snap_unit(double v) {
  return std::round(v * 1073741824.0) / 1073741824.0;  // 2^30
}

namespace {

Rect snap_rect(const Rect& r) {
  return {{std::ceil(r.lo.x * 1073741824.0) / 1073741824.0,
           std::ceil(r.lo.y * 1073741824.0) / 1073741824.0},
          {std::floor(r.hi.x * 1073741824.0) / 1073741824.0,
           std::floor(r.hi.y * 1073741824.0) / 1073741824.0}};
}

double normal(SplitMix64& rng) {
  double u, v, s;
  do {
    u = 2.0 * rng.next_unit() - 1.0;
    v = 2.0 * rng.next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

std::vector<Point> sample_in(const Rect& r, Distribution dist, uint64_t n,
                             SplitMix64& rng) {
  std::vector<Point> out;
  out.reserve(n);
  double w = r.hi.x - r.lo.x;
  double h = r.hi.y - r.lo.y;
  double cx = (r.lo.x + r.hi.x) / 2.0;
  double cy = (r.lo.y + r.hi.y) / 2.0;
  while (out.size() < n) {
    Point p;
    if (dist == Distribution::Uniform) {
      p = {r.lo.x + rng.next_unit() * w, r.lo.y + rng.next_unit() * h};
    } else {
      p = {cx + normal(rng) * (w / 6.0), cy + normal(rng) * (h / 6.0)};
      if (!r.contains(p)) continue;
    }
    p = {snap_unit(p.x), snap_unit(p.y)};
    out.push_back(p);
  }
  return out;
}

constexpr uint64_t kBlueSeedXor = 0x9E3779B97F4A7C15ull;

}  // namespace

void placement(PlacementClass cls, double p, Rect* red, Rect* blue) {
  if (cls == PlacementClass::Corner) {
    // Equal squares of side L = 1/(2 - sqrt(p)); red top-left, blue
    // bottom-right; overlap square side 2L-1 gives area fraction p exactly.
    double l = 1.0 / (2.0 - std::sqrt(p));
    *red = {{0.0, 1.0 - l}, {l, 1.0}};
    *blue = {{1.0 - l, 0.0}, {1.0, l}};
  } else {
    // Red fills [0,a]x[0,1]; blue has height 0.8 and equal area, flush with
    // x=1 on the right, overlapping a p fraction of its width.
    const double h = 0.8;
    double a = 1.0 / (1.0 + (1.0 - p) / h);
    double wb = a / h;
    *red = {{0.0, 0.0}, {a, 1.0}};
    *blue = {{a - p * wb, 0.1}, {a - p * wb + wb, 0.9}};
  }
}

GenResult gen_synthetic(const SynthSpec& spec) {
  if (spec.n_per_color == 0)
    throw std::invalid_argument("gen_synthetic: need at least one point");
  if (!(spec.overlap_pct > 0.0 && spec.overlap_pct <= 100.0))
    throw std::invalid_argument("gen_synthetic: overlap percent outside (0,100]");
  double p = spec.overlap_pct / 100.0;
  if (spec.cls == PlacementClass::Side && p >= 0.8)
    throw std::invalid_argument(
        "gen_synthetic: side placement requires overlap below 80%");

  Rect rr, rb;
  placement(spec.cls, p, &rr, &rb);
  rr = snap_rect(rr);
  rb = snap_rect(rb);

  sep::IntersectionClass want = spec.cls == PlacementClass::Corner
                                    ? sep::IntersectionClass::Corner
                                    : sep::IntersectionClass::Side;
  GenResult out;
  out.r_red = rr;
  out.r_blue = rb;
  constexpr int kMaxRetries = 8;
  for (int attempt = 0;; ++attempt) {
    uint64_t seed = spec.seed + static_cast<uint64_t>(attempt);
    SplitMix64 red_rng(seed);
    SplitMix64 blue_rng(seed ^ kBlueSeedXor);
    out.red = sample_in(rr, spec.dist, spec.n_per_color, red_rng);
    out.blue = sample_in(rb, spec.dist, spec.n_per_color, blue_rng);
    out.retries = attempt;
    sep::Classified got = sep::classify_intersection(
        Rect::bounding(out.red), Rect::bounding(out.blue));
    if (got.cls == want || attempt == kMaxRetries) return out;
  }
}

std::vector<Point> ingest_centers(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open " + csv_path);
  std::vector<Point> centers;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::istringstream row(line);
    double v[4];
    char comma;
    for (int i = 0; i < 4; ++i) {
      if (!(row >> v[i]))
        throw std::runtime_error(csv_path + ": line " +
                                 std::to_string(line_no) + ": malformed row");
      if (i < 3 && !(row >> comma && comma == ','))
        throw std::runtime_error(csv_path + ": line " +
                                 std::to_string(line_no) + ": malformed row");
    }
    if (v[2] < v[0] || v[3] < v[1])
      throw std::runtime_error(csv_path + ": line " + std::to_string(line_no) +
                               ": inverted rectangle");
    centers.push_back({(v[0] + v[2]) / 2.0, (v[1] + v[3]) / 2.0});
  }
  if (centers.empty())
    throw geom::EmptyInput(csv_path + ": no rectangles to ingest");

  Rect box = Rect::bounding(centers);
  double wx = box.hi.x - box.lo.x;
  double wy = box.hi.y - box.lo.y;
  for (Point& c : centers) {
    c.x = wx == 0.0 ? 0.0 : (c.x - box.lo.x) / wx;
    c.y = wy == 0.0 ? 0.0 : (c.y - box.lo.y) / wy;
    c = {snap_unit(c.x), snap_unit(c.y)};
  }
  return centers;
}

namespace {
constexpr char kPtsMagic[4] = {'P', 'T', 'S', '1'};
}

void write_points(const std::string& path, std::span<const Point> pts) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kPtsMagic, 4);
  uint64_t n = pts.size();
  out.write(reinterpret_cast<const char*>(&n), 8);
  for (const Point& p : pts) {
    out.write(reinterpret_cast<const char*>(&p.x), 8);
    out.write(reinterpret_cast<const char*>(&p.y), 8);
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

std::vector<Point> read_points(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kPtsMagic, 4) != 0)
    throw std::runtime_error("bad point file magic: " + path);
  uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  std::vector<Point> pts(n);
  for (uint64_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(&pts[i].x), 8);
    in.read(reinterpret_cast<char*>(&pts[i].y), 8);
  }
  if (!in) throw std::runtime_error("truncated point file: " + path);
  return pts;
}

}  // namespace rtsep::datagen
