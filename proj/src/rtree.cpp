#include "rtsep/rtree.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>

namespace rtsep::rtree {
namespace {

void put_u16(std::byte* p, uint16_t v) { std::memcpy(p, &v, 2); }
void put_u32(std::byte* p, uint32_t v) { std::memcpy(p, &v, 4); }
void put_u64(std::byte* p, uint64_t v) { std::memcpy(p, &v, 8); }
void put_f64(std::byte* p, double v) { std::memcpy(p, &v, 8); }
uint16_t get_u16(const std::byte* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}
uint32_t get_u32(const std::byte* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}
uint64_t get_u64(const std::byte* p) {
  uint64_t v;
  std::memcpy(&v, p, 8);
  return v;
}
double get_f64(const std::byte* p) {
  double v;
  std::memcpy(&v, p, 8);
  return v;
}

constexpr char kMagic[4] = {'R', 'T', 'P', '2'};

struct BuildNode {
  uint32_t depth = 0;  // 0 = leaf layer during construction
  std::vector<geom::Point> points;
  std::vector<size_t> children;  // indices into the previous layer
  geom::Rect mbr{};
};

geom::Point rect_center(const geom::Rect& r) {
  return {(r.lo.x + r.hi.x) / 2.0, (r.lo.y + r.hi.y) / 2.0};
}

}  // namespace

void RTreeConfig::validate() const {
  if (page_size < kHeaderBytes + 2 * kInternalEntryBytes ||
      page_size < kHeaderBytes + 2 * kLeafEntryBytes)
    throw PageError("page size too small for two entries per node");
  uint32_t cap = std::min((max_internal() + 1) / 2, (max_leaf() + 1) / 2);
  if (min_fill < 2 || min_fill > cap)
    throw PageError("min_fill outside [2, ceil(M/2)]");
}

MemoryPageStore::MemoryPageStore(uint32_t page_size,
                                 std::vector<std::byte> bytes)
    : page_size_(page_size), bytes_(std::move(bytes)) {}

void MemoryPageStore::read_page(uint64_t id, std::span<std::byte> out) const {
  uint64_t off = id * page_size_;
  if (id >= page_count() || out.size() != page_size_)
    throw PageError("page id out of range");
  std::memcpy(out.data(), bytes_.data() + off, page_size_);
}

uint64_t MemoryPageStore::page_count() const {
  return bytes_.size() / page_size_;
}

FilePageStore::FilePageStore(const std::string& path) {
  fd_ = ::open(path.c_str(), O_RDONLY);
  if (fd_ < 0) throw PageError("cannot open r-tree file: " + path);
  std::byte head[8];
  if (::pread(fd_, head, 8, 0) != 8) {
    ::close(fd_);
    fd_ = -1;
    throw PageError("truncated r-tree file: " + path);
  }
  if (std::memcmp(head, kMagic, 4) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw PageError("bad magic in r-tree file: " + path);
  }
  page_size_ = get_u32(head + 4);
  if (page_size_ == 0) throw PageError("zero page size in header");
  off_t size = ::lseek(fd_, 0, SEEK_END);
  page_count_ = static_cast<uint64_t>(size) / page_size_;
}

FilePageStore::~FilePageStore() {
  if (fd_ >= 0) ::close(fd_);
}

void FilePageStore::read_page(uint64_t id, std::span<std::byte> out) const {
  if (id >= page_count_ || out.size() != page_size_)
    throw PageError("page id out of range");
  ssize_t got = ::pread(fd_, out.data(), page_size_,
                        static_cast<off_t>(id) * page_size_);
  if (got != static_cast<ssize_t>(page_size_))
    throw PageError("short page read");
}

RTree RTree::bulk_load(std::span<const geom::Point> pts, RTreeConfig cfg) {
  cfg.validate();
  if (pts.empty()) throw geom::EmptyInput("bulk_load of empty point set");
  for (const geom::Point& p : pts)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw geom::InvalidGeometry("bulk_load: non-finite coordinate");

  const size_t n = pts.size();
  const size_t m_leaf = cfg.max_leaf();
  const size_t m_int = cfg.max_internal();
  const size_t min_fill = cfg.min_fill;

  // Sort-Tile-Recursive leaf packing.
  std::vector<geom::Point> sorted(pts.begin(), pts.end());
  std::sort(sorted.begin(), sorted.end(), geom::lex_less);

  size_t leaves_needed = (n + m_leaf - 1) / m_leaf;
  size_t slices = static_cast<size_t>(
      std::ceil(std::sqrt(static_cast<double>(leaves_needed))));
  size_t slice_pts = slices * m_leaf;

  std::vector<BuildNode> leaf_layer;
  for (size_t s = 0; s * slice_pts < n; ++s) {
    size_t beg = s * slice_pts;
    size_t end = std::min(n, beg + slice_pts);
    std::sort(sorted.begin() + beg, sorted.begin() + end,
              [](const geom::Point& a, const geom::Point& b) {
                return a.y < b.y || (a.y == b.y && a.x < b.x);
              });
    for (size_t i = beg; i < end; i += m_leaf) {
      BuildNode node;
      node.points.assign(sorted.begin() + i,
                         sorted.begin() + std::min(end, i + m_leaf));
      leaf_layer.push_back(std::move(node));
    }
  }
  // Underflow repair: shift entries from the previous sibling.
  for (size_t i = 1; i < leaf_layer.size(); ++i) {
    auto& cur = leaf_layer[i].points;
    auto& prev = leaf_layer[i - 1].points;
    while (cur.size() < min_fill && prev.size() > min_fill) {
      cur.insert(cur.begin(), prev.back());
      prev.pop_back();
    }
  }
  for (auto& node : leaf_layer)
    node.mbr = geom::Rect::bounding(node.points);

  std::vector<std::vector<BuildNode>> layers;
  layers.push_back(std::move(leaf_layer));

  while (layers.back().size() > 1) {
    const auto& below = layers.back();
    size_t cnt = below.size();
    std::vector<size_t> order(cnt);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      geom::Point ca = rect_center(below[a].mbr);
      geom::Point cb = rect_center(below[b].mbr);
      if (ca.x != cb.x) return ca.x < cb.x;
      if (ca.y != cb.y) return ca.y < cb.y;
      return a < b;
    });
    size_t nodes_needed = (cnt + m_int - 1) / m_int;
    size_t vslices = static_cast<size_t>(
        std::ceil(std::sqrt(static_cast<double>(nodes_needed))));
    size_t per_slice = vslices * m_int;
    for (size_t s = 0; s * per_slice < cnt; ++s) {
      size_t beg = s * per_slice;
      size_t end = std::min(cnt, beg + per_slice);
      std::sort(order.begin() + beg, order.begin() + end,
                [&](size_t a, size_t b) {
                  geom::Point ca = rect_center(below[a].mbr);
                  geom::Point cb = rect_center(below[b].mbr);
                  if (ca.y != cb.y) return ca.y < cb.y;
                  if (ca.x != cb.x) return ca.x < cb.x;
                  return a < b;
                });
    }
    std::vector<BuildNode> layer;
    for (size_t i = 0; i < cnt; i += m_int) {
      BuildNode node;
      node.children.assign(order.begin() + i,
                           order.begin() + std::min(cnt, i + m_int));
      layer.push_back(std::move(node));
    }
    for (size_t i = 1; i < layer.size(); ++i) {
      auto& cur = layer[i].children;
      auto& prev = layer[i - 1].children;
      while (cur.size() < min_fill && prev.size() > min_fill) {
        cur.insert(cur.begin(), prev.back());
        prev.pop_back();
      }
    }
    for (auto& node : layer) {
      node.mbr = below[node.children.front()].mbr;
      for (size_t c : node.children) node.mbr.expand(below[c].mbr);
    }
    layers.push_back(std::move(layer));
  }

  // Page numbering: root first, then each level left to right, leaves last.
  uint32_t height = static_cast<uint32_t>(layers.size() - 1);
  uint64_t node_count = 0;
  for (const auto& l : layers) node_count += l.size();

  std::vector<std::vector<uint64_t>> page_of(layers.size());
  uint64_t next_page = 1;
  for (size_t li = layers.size(); li-- > 0;) {  // root layer is layers.back()
    page_of[li].resize(layers[li].size());
    for (size_t i = 0; i < layers[li].size(); ++i)
      page_of[li][i] = next_page++;
  }

  std::vector<std::byte> bytes((node_count + 1) * cfg.page_size,
                               std::byte{0});
  // header page
  {
    std::byte* h = bytes.data();
    std::memcpy(h, kMagic, 4);
    put_u32(h + 4, cfg.page_size);
    put_u64(h + 8, page_of[layers.size() - 1][0]);
    put_u32(h + 16, height);
    put_u64(h + 20, node_count);
    put_u64(h + 28, n);
    for (size_t li = 0; li <= height; ++li) {
      size_t layer_idx = layers.size() - 1 - li;  // level li
      put_u64(h + 36 + 8 * li, layers[layer_idx].size());
    }
  }
  for (size_t li = 0; li < layers.size(); ++li) {
    uint32_t level = static_cast<uint32_t>(layers.size() - 1 - li);
    bool leaf = li == 0;
    for (size_t i = 0; i < layers[li].size(); ++i) {
      const BuildNode& node = layers[li][i];
      std::byte* p = bytes.data() + page_of[li][i] * cfg.page_size;
      p[0] = std::byte{leaf ? uint8_t{1} : uint8_t{0}};
      p[1] = std::byte{static_cast<uint8_t>(level)};
      if (leaf) {
        put_u16(p + 2, static_cast<uint16_t>(node.points.size()));
        std::byte* e = p + RTreeConfig::kHeaderBytes;
        for (const geom::Point& pt : node.points) {
          put_f64(e, pt.x);
          put_f64(e + 8, pt.y);
          e += RTreeConfig::kLeafEntryBytes;
        }
      } else {
        put_u16(p + 2, static_cast<uint16_t>(node.children.size()));
        std::byte* e = p + RTreeConfig::kHeaderBytes;
        for (size_t c : node.children) {
          const geom::Rect& r = layers[li - 1][c].mbr;
          put_f64(e, r.lo.x);
          put_f64(e + 8, r.lo.y);
          put_f64(e + 16, r.hi.x);
          put_f64(e + 24, r.hi.y);
          put_u64(e + 32, page_of[li - 1][c]);
          e += RTreeConfig::kInternalEntryBytes;
        }
      }
    }
  }

  RTree t;
  t.store_ = std::make_shared<MemoryPageStore>(cfg.page_size,
                                               std::move(bytes));
  t.load_header();
  t.cfg_.min_fill = cfg.min_fill;
  return t;
}

void RTree::load_header() {
  std::vector<std::byte> page(store_->page_size());
  store_->read_page(0, page);
  std::byte* h = page.data();
  if (std::memcmp(h, kMagic, 4) != 0)
    throw PageError("bad magic in r-tree header");
  cfg_ = RTreeConfig{};
  cfg_.page_size = get_u32(h + 4);
  root_ = get_u64(h + 8);
  height_ = get_u32(h + 16);
  node_count_ = get_u64(h + 20);
  point_count_ = get_u64(h + 28);
  if (36 + 8 * (static_cast<size_t>(height_) + 1) > cfg_.page_size)
    throw PageError("header level table overflows page");
  level_counts_.clear();
  for (size_t li = 0; li <= height_; ++li)
    level_counts_.push_back(get_u64(h + 36 + 8 * li));
}

RTree RTree::open(const std::string& path) {
  RTree t;
  t.store_ = std::make_shared<FilePageStore>(path);
  t.load_header();
  return t;
}

void RTree::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PageError("cannot write r-tree file: " + path);
  std::vector<std::byte> page(store_->page_size());
  for (uint64_t i = 0; i < store_->page_count(); ++i) {
    store_->read_page(i, page);
    out.write(reinterpret_cast<const char*>(page.data()),
              static_cast<std::streamsize>(page.size()));
  }
  if (!out) throw PageError("short write: " + path);
}

NodeView RTree::read_node(uint64_t page, CounterContext* ctx) const {
  if (page == 0 || page >= store_->page_count())
    throw PageError("node page id out of range");
  std::vector<std::byte> buf(store_->page_size());
  store_->read_page(page, buf);
  store_->bump();
  if (ctx) ctx->record(page);

  const std::byte* p = buf.data();
  uint8_t kind = std::to_integer<uint8_t>(p[0]);
  if (kind > 1) throw PageError("malformed page: bad kind byte");
  NodeView v;
  v.leaf = kind == 1;
  v.level = std::to_integer<uint8_t>(p[1]);
  uint16_t count = get_u16(p + 2);
  if (v.level > height_ || (v.leaf != (v.level == height_)))
    throw PageError("malformed page: level/kind mismatch");
  if (count == 0) throw PageError("malformed page: empty node");
  if (v.leaf) {
    if (count > cfg_.max_leaf()) throw PageError("malformed page: overfull");
    v.points.reserve(count);
    const std::byte* e = p + RTreeConfig::kHeaderBytes;
    for (uint16_t i = 0; i < count; ++i) {
      v.points.push_back({get_f64(e), get_f64(e + 8)});
      e += RTreeConfig::kLeafEntryBytes;
    }
  } else {
    if (count > cfg_.max_internal())
      throw PageError("malformed page: overfull");
    v.entries.reserve(count);
    const std::byte* e = p + RTreeConfig::kHeaderBytes;
    for (uint16_t i = 0; i < count; ++i) {
      InternalEntry entry;
      entry.rect.lo = {get_f64(e), get_f64(e + 8)};
      entry.rect.hi = {get_f64(e + 16), get_f64(e + 24)};
      entry.child = get_u64(e + 32);
      if (!entry.rect.valid()) throw PageError("malformed page: bad rect");
      v.entries.push_back(entry);
      e += RTreeConfig::kInternalEntryBytes;
    }
  }
  return v;
}

geom::Rect RTree::root_mbr(CounterContext* ctx) const {
  NodeView root = read_node(root_, ctx);
  if (root.leaf) return geom::Rect::bounding(root.points);
  geom::Rect r = root.entries.front().rect;
  for (const InternalEntry& e : root.entries) r.expand(e.rect);
  return r;
}

namespace {

struct AuditState {
  const RTree& tree;
  std::vector<uint64_t> per_level;
  std::vector<geom::Point> leaf_points;
  std::string error;

  explicit AuditState(const RTree& t)
      : tree(t), per_level(t.height() + 1, 0) {}

  // Returns the exact content MBR of the subtree, checking invariants.
  std::optional<geom::Rect> walk(uint64_t page, uint32_t expect_level) {
    NodeView v;
    try {
      v = tree.read_node(page);
    } catch (const std::exception& e) {
      error = e.what();
      return std::nullopt;
    }
    if (v.level != expect_level) {
      error = "level mismatch at page " + std::to_string(page);
      return std::nullopt;
    }
    per_level[v.level]++;
    bool is_root = page == tree.root_page();
    size_t cap = v.leaf ? tree.config().max_leaf() : tree.config().max_internal();
    size_t floor = is_root ? (tree.height() == 0 ? 1 : 2)
                           : tree.config().min_fill;
    if (v.count() < floor || v.count() > cap) {
      error = "fill bound violated at page " + std::to_string(page);
      return std::nullopt;
    }
    if (v.leaf) {
      leaf_points.insert(leaf_points.end(), v.points.begin(), v.points.end());
      return geom::Rect::bounding(v.points);
    }
    geom::Rect content{};
    bool first = true;
    for (const InternalEntry& e : v.entries) {
      auto child = walk(e.child, expect_level + 1);
      if (!child) return std::nullopt;
      if (!(*child == e.rect)) {
        error = "entry rect is not the tight MBR of child " +
                std::to_string(e.child);
        return std::nullopt;
      }
      if (first) {
        content = *child;
        first = false;
      } else {
        content.expand(*child);
      }
    }
    return content;
  }
};

}  // namespace

AuditReport audit(const RTree& tree, std::span<const geom::Point> original) {
  AuditState st(tree);
  auto mbr = st.walk(tree.root_page(), 0);
  if (!mbr) return {false, st.error};
  for (size_t li = 0; li <= tree.height(); ++li) {
    if (st.per_level[li] != tree.level_counts()[li])
      return {false, "per-level node count mismatch at level " +
                         std::to_string(li)};
  }
  uint64_t total = 0;
  for (uint64_t c : st.per_level) total += c;
  if (total != tree.node_count()) return {false, "node count mismatch"};
  // Parents have at least two children each (root of a multi-level tree too).
  for (size_t li = 0; li + 1 <= tree.height(); ++li) {
    if (st.per_level[li] * 2 > st.per_level[li + 1])
      return {false, "level " + std::to_string(li) +
                         " has more than children/2 nodes"};
  }
  if (st.leaf_points.size() != tree.point_count())
    return {false, "stored point count mismatch"};
  if (!original.empty()) {
    std::vector<geom::Point> a(original.begin(), original.end());
    std::vector<geom::Point> b = st.leaf_points;
    std::sort(a.begin(), a.end(), geom::lex_less);
    std::sort(b.begin(), b.end(), geom::lex_less);
    if (a != b) return {false, "leaf multiset differs from input"};
  }
  return {true, ""};
}

}  // namespace rtsep::rtree
