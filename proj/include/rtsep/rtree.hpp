#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "rtsep/geometry.hpp"

namespace rtsep::rtree {

struct PageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// On-disk layout, little-endian.
//
// Page 0 (file header):
//   magic "RTP2" | page_size u32 | root page u64 | height u32 |
//   node count u64 | point count u64 | per-level node counts (height+1) u64,
//   ordered root (level 0) to leaves (level height).
//
// Node pages (ids 1..node_count):
//   kind u8 (0 internal, 1 leaf) | level u8 | entry count u16 |
//   12 reserved bytes | packed entries, zero padded.
//   internal entry: lo.x f64, lo.y f64, hi.x f64, hi.y f64, child page u64
//   leaf entry:     x f64, y f64
struct RTreeConfig {
  uint32_t page_size = 1024;
  uint32_t min_fill = 2;

  static constexpr uint32_t kHeaderBytes = 16;
  static constexpr uint32_t kInternalEntryBytes = 40;
  static constexpr uint32_t kLeafEntryBytes = 16;

  uint32_t max_internal() const {
    return (page_size - kHeaderBytes) / kInternalEntryBytes;
  }
  uint32_t max_leaf() const {
    return (page_size - kHeaderBytes) / kLeafEntryBytes;
  }
  void validate() const;
};

class PageStore {
 public:
  virtual ~PageStore() = default;
  virtual void read_page(uint64_t id, std::span<std::byte> out) const = 0;
  virtual uint64_t page_count() const = 0;
  virtual uint32_t page_size() const = 0;

  uint64_t reads() const { return reads_.load(std::memory_order_relaxed); }
  uint64_t reset_reads() const {
    return reads_.exchange(0, std::memory_order_relaxed);
  }
  void bump() const { reads_.fetch_add(1, std::memory_order_relaxed); }

 private:
  mutable std::atomic<uint64_t> reads_{0};
};

class MemoryPageStore final : public PageStore {
 public:
  MemoryPageStore(uint32_t page_size, std::vector<std::byte> bytes);
  void read_page(uint64_t id, std::span<std::byte> out) const override;
  uint64_t page_count() const override;
  uint32_t page_size() const override { return page_size_; }
  const std::vector<std::byte>& bytes() const { return bytes_; }

 private:
  uint32_t page_size_;
  std::vector<std::byte> bytes_;
};

class FilePageStore final : public PageStore {
 public:
  explicit FilePageStore(const std::string& path);
  ~FilePageStore() override;
  FilePageStore(const FilePageStore&) = delete;
  FilePageStore& operator=(const FilePageStore&) = delete;
  void read_page(uint64_t id, std::span<std::byte> out) const override;
  uint64_t page_count() const override { return page_count_; }
  uint32_t page_size() const override { return page_size_; }

 private:
  int fd_ = -1;
  uint32_t page_size_ = 0;
  uint64_t page_count_ = 0;
};

struct InternalEntry {
  geom::Rect rect;
  uint64_t child = 0;
};

struct NodeView {
  uint32_t level = 0;
  bool leaf = false;
  std::vector<InternalEntry> entries;  // internal nodes
  std::vector<geom::Point> points;     // leaf nodes
  size_t count() const { return leaf ? points.size() : entries.size(); }
};

// Per-query access accounting; the store-wide counter keeps running totals.
struct CounterContext {
  uint64_t reads = 0;
  std::unordered_set<uint64_t> distinct;
  void record(uint64_t page) {
    ++reads;
    distinct.insert(page);
  }
};

class RTree {
 public:
  static RTree bulk_load(std::span<const geom::Point> pts, RTreeConfig cfg);
  static RTree open(const std::string& path);
  void save(const std::string& path) const;

  const RTreeConfig& config() const { return cfg_; }
  uint64_t root_page() const { return root_; }
  uint32_t height() const { return height_; }
  uint64_t node_count() const { return node_count_; }
  uint64_t point_count() const { return point_count_; }
  const std::vector<uint64_t>& level_counts() const { return level_counts_; }
  const PageStore& store() const { return *store_; }

  NodeView read_node(uint64_t page, CounterContext* ctx = nullptr) const;
  geom::Rect root_mbr(CounterContext* ctx = nullptr) const;

  uint64_t read_counter() const { return store_->reads(); }
  uint64_t reset_counter() const { return store_->reset_reads(); }

 private:
  RTree() = default;
  void load_header();

  std::shared_ptr<PageStore> store_;
  RTreeConfig cfg_{};
  uint64_t root_ = 0;
  uint32_t height_ = 0;
  uint64_t node_count_ = 0;
  uint64_t point_count_ = 0;
  std::vector<uint64_t> level_counts_;
};

// Full structural scan: fill bounds, level uniformity, tight MBRs, per-level
// counts, and (when the original input is supplied) leaf multiset equality.
struct AuditReport {
  bool ok = true;
  std::string message;
};
AuditReport audit(const RTree& tree,
                  std::span<const geom::Point> original = {});

}  // namespace rtsep::rtree
