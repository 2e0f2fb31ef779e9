#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rtsep/geometry.hpp"

namespace rtsep::datagen {

// splitmix64: the stable 64-bit stream behind every generator here.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double next_unit() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  uint64_t state_;
};

enum class Distribution { Uniform, Gaussian };
enum class PlacementClass { Corner, Side };

struct SynthSpec {
  uint64_t n_per_color = 0;
  Distribution dist = Distribution::Uniform;
  PlacementClass cls = PlacementClass::Corner;
  double overlap_pct = 5.0;  // percentage of each rectangle's area
  uint64_t seed = 0;
};

struct GenResult {
  std::vector<geom::Point> red;
  std::vector<geom::Point> blue;
  geom::Rect r_red{};
  geom::Rect r_blue{};
  int retries = 0;  // reseeds needed until the sampled MBRs kept the class
};

// Deterministic given the spec. All coordinates land on the 2^-30 grid.
GenResult gen_synthetic(const SynthSpec& spec);

// Generating rectangles alone (exposed for the placement identity tests).
void placement(PlacementClass cls, double overlap_fraction, geom::Rect* red,
               geom::Rect* blue);

double snap_unit(double v);

// CSV rows xmin,ymin,xmax,ymax -> center points, affinely normalized into
// [0,1]^2 (degenerate extents collapse to 0) and snapped to the grid.
std::vector<geom::Point> ingest_centers(const std::string& csv_path);

// PTS1 point file: magic "PTS1", count u64, x,y f64 pairs, little-endian.
void write_points(const std::string& path, std::span<const geom::Point> pts);
std::vector<geom::Point> read_points(const std::string& path);

}  // namespace rtsep::datagen
