#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtsep/datagen.hpp"
#include "rtsep/hull_query.hpp"
#include "rtsep/rtree.hpp"
#include "rtsep/separability.hpp"

using json = nlohmann::json;
using namespace rtsep;

namespace {

std::string pct(uint64_t part, uint64_t total) {
  double v = total == 0 ? 0.0 : 100.0 * static_cast<double>(part) /
                                    static_cast<double>(total);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

datagen::SynthSpec parse_spec(uint64_t n, const std::string& dist,
                              const std::string& cls, double overlap,
                              uint64_t seed) {
  datagen::SynthSpec spec;
  spec.n_per_color = n;
  if (dist == "uniform")
    spec.dist = datagen::Distribution::Uniform;
  else if (dist == "gauss")
    spec.dist = datagen::Distribution::Gaussian;
  else
    throw CLI::ValidationError("--dist must be uniform or gauss");
  if (cls == "corner")
    spec.cls = datagen::PlacementClass::Corner;
  else if (cls == "side")
    spec.cls = datagen::PlacementClass::Side;
  else
    throw CLI::ValidationError("--class must be corner or side");
  spec.overlap_pct = overlap;
  spec.seed = seed;
  return spec;
}

struct DecideRow {
  sep::Decision d;
};

json decide_json(const sep::Decision& d) {
  json j;
  j["separable"] = d.separable;
  if (d.line) j["line"] = {d.line->a, d.line->b, d.line->c};
  j["nodes_read_r"] = d.stats.nodes_read_red;
  j["nodes_read_b"] = d.stats.nodes_read_blue;
  j["total_nodes_r"] = d.stats.total_nodes_red;
  j["total_nodes_b"] = d.stats.total_nodes_blue;
  j["pct_r"] = pct(d.stats.nodes_read_red, d.stats.total_nodes_red);
  j["pct_b"] = pct(d.stats.nodes_read_blue, d.stats.total_nodes_blue);
  j["distinct_r"] = d.stats.distinct_pages_red;
  j["distinct_b"] = d.stats.distinct_pages_blue;
  j["distinct_pct_r"] =
      pct(d.stats.distinct_pages_red, d.stats.total_nodes_red);
  j["distinct_pct_b"] =
      pct(d.stats.distinct_pages_blue, d.stats.total_nodes_blue);
  j["levels_r"] = d.stats.levels_descended_red;
  j["levels_b"] = d.stats.levels_descended_blue;
  j["peak_bytes"] = d.stats.peak_working_set_bytes;
  j["wall_ms"] = d.stats.wall_ms;
  return j;
}

void print_decide_text(const sep::Decision& d) {
  std::cout << "separable: " << (d.separable ? "yes" : "no") << "\n";
  if (d.line)
    std::cout << "line: " << d.line->a << " " << d.line->b << " " << d.line->c
              << "\n";
  std::cout << "nodes_read_red: " << d.stats.nodes_read_red << " ("
            << pct(d.stats.nodes_read_red, d.stats.total_nodes_red)
            << "% of " << d.stats.total_nodes_red << ")\n";
  std::cout << "nodes_read_blue: " << d.stats.nodes_read_blue << " ("
            << pct(d.stats.nodes_read_blue, d.stats.total_nodes_blue)
            << "% of " << d.stats.total_nodes_blue << ")\n";
  std::cout << "distinct_pages_red: " << d.stats.distinct_pages_red << " ("
            << pct(d.stats.distinct_pages_red, d.stats.total_nodes_red)
            << "%)\n";
  std::cout << "distinct_pages_blue: " << d.stats.distinct_pages_blue << " ("
            << pct(d.stats.distinct_pages_blue, d.stats.total_nodes_blue)
            << "%)\n";
  std::cout << "levels_descended: " << d.stats.levels_descended_red << "/"
            << d.stats.levels_descended_blue << "\n";
  std::cout << "peak_working_set_bytes: " << d.stats.peak_working_set_bytes
            << "\n";
  std::cout << "wall_ms: " << d.stats.wall_ms << "\n";
}

int run_bench(const std::string& config_path, const std::string& out_path);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear separability of two R-tree point sets"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  uint64_t g_n = 1000, g_seed = 0;
  std::string g_dist = "uniform", g_class = "corner";
  double g_overlap = 5.0;
  std::string g_red, g_blue;
  gen->add_option("--n", g_n, "points per color")->required();
  gen->add_option("--dist", g_dist, "uniform|gauss");
  gen->add_option("--class", g_class, "corner|side");
  gen->add_option("--overlap", g_overlap, "overlap percent in (0,100)");
  gen->add_option("--seed", g_seed, "seed");
  gen->add_option("--out-red", g_red, "red point file")->required();
  gen->add_option("--out-blue", g_blue, "blue point file")->required();

  // build
  auto* build = app.add_subcommand("build", "bulk load a point file");
  std::string b_points, b_out;
  uint32_t b_page = 1024, b_min = 2;
  build->add_option("--points", b_points, "PTS1 input")->required();
  build->add_option("--out", b_out, "R-tree output")->required();
  build->add_option("--page-size", b_page, "page size in bytes");
  build->add_option("--min-fill", b_min, "minimum node fill");

  // decide
  auto* decide = app.add_subcommand("decide", "decide linear separability");
  std::string d_red, d_blue;
  bool d_json = false;
  decide->add_option("--red", d_red, "red R-tree")->required();
  decide->add_option("--blue", d_blue, "blue R-tree")->required();
  decide->add_flag("--json", d_json, "JSON output");

  // hull
  auto* hull = app.add_subcommand("hull", "convex hull of a stored set");
  std::string h_tree, h_out;
  hull->add_option("--tree", h_tree, "R-tree input")->required();
  hull->add_option("--out", h_out, "hull vertex CSV")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark matrix");
  std::string m_config, m_out;
  bench->add_option("--matrix", m_config, "JSON matrix config")->required();
  bench->add_option("--out", m_out, "CSV output")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "check a separating line");
  std::string v_red, v_blue, v_line;
  verify->add_option("--red", v_red, "red PTS1 file")->required();
  verify->add_option("--blue", v_blue, "blue PTS1 file")->required();
  verify->add_option("--line", v_line, "a,b,c")->required();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "rectangle CSV to point file");
  std::string i_rects, i_out;
  ingest->add_option("--rects", i_rects, "CSV of xmin,ymin,xmax,ymax")
      ->required();
  ingest->add_option("--out", i_out, "PTS1 output")->required();

  try {
    app.parse(argc, argv);

    if (gen->parsed()) {
      auto spec = parse_spec(g_n, g_dist, g_class, g_overlap, g_seed);
      datagen::GenResult r = datagen::gen_synthetic(spec);
      datagen::write_points(g_red, r.red);
      datagen::write_points(g_blue, r.blue);
      std::cout << "wrote " << r.red.size() << " red and " << r.blue.size()
                << " blue points";
      if (r.retries) std::cout << " (reseeded " << r.retries << "x)";
      std::cout << "\n";
      return 0;
    }
    if (build->parsed()) {
      auto pts = datagen::read_points(b_points);
      rtree::RTreeConfig cfg;
      cfg.page_size = b_page;
      cfg.min_fill = b_min;
      rtree::RTree tree = rtree::RTree::bulk_load(pts, cfg);
      tree.save(b_out);
      std::cout << "nodes: " << tree.node_count()
                << "\nheight: " << tree.height() << "\n";
      return 0;
    }
    if (decide->parsed()) {
      rtree::RTree red = rtree::RTree::open(d_red);
      rtree::RTree blue = rtree::RTree::open(d_blue);
      sep::Decision d = sep::decide_separability(red, blue);
      if (d_json)
        std::cout << decide_json(d).dump(2) << "\n";
      else
        print_decide_text(d);
      return d.separable ? 0 : 1;
    }
    if (hull->parsed()) {
      rtree::RTree tree = rtree::RTree::open(h_tree);
      rtree::CounterContext ctx;
      geom::ConvexPolygon h = hullq::rtree_convex_hull(tree, &ctx);
      std::ofstream out(h_out, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + h_out);
      out << "x,y\n";
      out.precision(17);
      for (const geom::Point& p : h.vertices())
        out << p.x << "," << p.y << "\n";
      std::cout << "hull_vertices: " << h.size() << "\n";
      std::cout << "nodes_read: " << ctx.reads << " ("
                << pct(ctx.reads, tree.node_count()) << "% of "
                << tree.node_count() << ")\n";
      std::cout << "distinct_pages: " << ctx.distinct.size() << " ("
                << pct(ctx.distinct.size(), tree.node_count()) << "%)\n";
      return 0;
    }
    if (bench->parsed()) return run_bench(m_config, m_out);
    if (verify->parsed()) {
      auto red = datagen::read_points(v_red);
      auto blue = datagen::read_points(v_blue);
      geom::Line ln;
      if (std::sscanf(v_line.c_str(), "%lf,%lf,%lf", &ln.a, &ln.b, &ln.c) != 3)
        throw CLI::ValidationError("--line expects a,b,c");
      bool ok = sep::verify_separating_line(ln, red, blue);
      std::cout << (ok ? "valid" : "invalid") << "\n";
      return ok ? 0 : 1;
    }
    if (ingest->parsed()) {
      auto pts = datagen::ingest_centers(i_rects);
      datagen::write_points(i_out, pts);
      std::cout << "wrote " << pts.size() << " points\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

namespace {

int run_bench(const std::string& config_path, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open " + config_path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(config_path + ": " + e.what());
  }

  auto sizes = cfg.at("sizes").get<std::vector<uint64_t>>();
  auto overlaps = cfg.at("overlaps").get<std::vector<double>>();
  auto classes = cfg.at("classes").get<std::vector<std::string>>();
  auto dists = cfg.at("dists").get<std::vector<std::string>>();
  auto seeds = cfg.at("seeds").get<std::vector<uint64_t>>();
  uint32_t page_size = cfg.value("page_size", 1024u);

  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "n,dist,class,overlap_pct,seed,separable,nodes_read_r,nodes_read_b,"
         "pct_r,pct_b,distinct_r,distinct_b,peak_bytes,wall_ms\n";

  for (uint64_t n : sizes)
    for (double overlap : overlaps)
      for (const std::string& cls : classes)
        for (const std::string& dist : dists)
          for (uint64_t seed : seeds) {
            datagen::SynthSpec spec = parse_spec(n, dist, cls, overlap, seed);
            datagen::GenResult g = datagen::gen_synthetic(spec);
            rtree::RTreeConfig tcfg;
            tcfg.page_size = page_size;
            rtree::RTree red = rtree::RTree::bulk_load(g.red, tcfg);
            rtree::RTree blue = rtree::RTree::bulk_load(g.blue, tcfg);
            sep::Decision d = sep::decide_separability(red, blue);
            out << n << ',' << dist << ',' << cls << ',' << overlap << ','
                << seed << ',' << (d.separable ? 1 : 0) << ','
                << d.stats.nodes_read_red << ',' << d.stats.nodes_read_blue
                << ',' << pct(d.stats.nodes_read_red, d.stats.total_nodes_red)
                << ','
                << pct(d.stats.nodes_read_blue, d.stats.total_nodes_blue)
                << ',' << d.stats.distinct_pages_red << ','
                << d.stats.distinct_pages_blue << ','
                << d.stats.peak_working_set_bytes << ',' << d.stats.wall_ms
                << "\n";
          }
  return 0;
}

}  // namespace
