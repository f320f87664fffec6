// fractrans: command-line front end. Every subcommand prints a key=value
// manifest on stdout; exit status is 0 on success, 1 on config or usage
// errors and 2 on numeric failures.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fractrans/fractrans.hpp"
#include "fractrans/hash.hpp"
#include "fractrans/png_io.hpp"

using namespace fractrans;

namespace {

struct Common {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
  auto* cfg = sub->add_option("--config", c.config_path, "JSON config file");
  auto* pre = sub->add_option("--preset", c.preset_name, "built-in preset")
                  ->check(CLI::IsMember(preset_names()));
  cfg->excludes(pre);
  if (needs_config) sub->final_callback([cfg, pre] {
    if (cfg->count() + pre->count() == 0) throw CLI::ValidationError("--config or --preset is required");
  });
  sub->add_option("--seed", c.seed, "override the config seed");
  sub->add_option("--threads", c.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

Config load(const Common& c) {
  if (!c.config_path.empty()) return load_config(c.config_path);
  if (!c.preset_name.empty()) return preset(c.preset_name);
  return Config{};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class Manifest {
 public:
  explicit Manifest(std::string command) { put("command", std::move(command)); }
  void put(const std::string& key, const std::string& value) { lines_.push_back(key + "=" + value); }
  void put(const std::string& key, double value) { put(key, fmt(value)); }
  void put(const std::string& key, long long value) { put(key, std::to_string(value)); }
  void put(const std::string& key, int value) { put(key, std::to_string(value)); }
  void put(const std::string& key, std::uint64_t value) { put(key, std::to_string(value)); }
  void output(const std::string& key, const std::string& path) {
    put(key, path);
    put(key + "_sha256", sha256_file(path));
  }
  void source(const Common& c) {
    if (!c.config_path.empty()) put("config", c.config_path);
    if (!c.preset_name.empty()) put("preset", c.preset_name);
  }
  void print() const {
    for (const auto& l : lines_) std::cout << l << '\n';
  }

 private:
  std::vector<std::string> lines_;
};

std::string or_default(const std::string& value, const std::optional<PairEntry>& pair, bool source,
                       const char* flag) {
  if (!value.empty()) return value;
  if (!pair) throw ConfigError(std::string(flag) + " is required (the config declares no pair)");
  return source ? pair->source : pair->target;
}

int resolution_or(int requested, const Picture& img) { return requested > 0 ? requested : img.width(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal transformations between IFS attractors, applied to pictures"};
  app.require_subcommand(1);

  // transform
  Common tr_c;
  std::string tr_in, tr_out, tr_src, tr_dst, tr_mode = "auto";
  int tr_res = 0, tr_ss = kDefaultSupersample;
  auto* tr = app.add_subcommand("transform", "carry a picture from one attractor to another");
  add_common(tr, tr_c, true);
  tr->add_option("--input", tr_in)->required();
  tr->add_option("--out", tr_out)->required();
  tr->add_option("--source", tr_src, "source mask (default: config pair)");
  tr->add_option("--target", tr_dst, "target mask or system (default: config pair)");
  tr->add_option("--resolution", tr_res, "output size (default: input width)");
  tr->add_option("--mode", tr_mode)->check(CLI::IsMember({"auto", "pull", "splat"}));
  tr->add_option("--supersample", tr_ss)->check(CLI::PositiveNumber);

  // steal
  Common st_c;
  std::string st_in, st_out, st_drawing, st_palette;
  int st_res = 512;
  bool st_black = false;
  auto* st = app.add_subcommand("steal", "colour-steal from a palette picture");
  add_common(st, st_c, true);
  st->add_option("--input", st_in, "palette picture")->required();
  st->add_option("--out", st_out)->required();
  st->add_option("--drawing", st_drawing, "drawing mask (default: pair source)");
  st->add_option("--palette", st_palette, "palette system or mask (default: pair target)");
  st->add_option("--resolution", st_res)->check(CLI::PositiveNumber);
  st->add_flag("--black", st_black, "composite over black");

  // filter
  Common fi_c;
  std::string fi_in, fi_out, fi_src, fi_dst;
  int fi_grid = 0;
  auto* fi = app.add_subcommand("filter", "fractal filter T_GF o P o T_FG");
  add_common(fi, fi_c, true);
  fi->add_option("--input", fi_in)->required();
  fi->add_option("--out", fi_out)->required();
  fi->add_option("--source", fi_src);
  fi->add_option("--target", fi_dst);
  fi->add_option("--grid", fi_grid, "grid resolution (default: input width)");

  // pack
  Common pk_c;
  std::vector<std::string> pk_in;
  std::vector<double> pk_p;
  std::string pk_out, pk_f = "F", pk_g = "G";
  int pk_res = 512, pk_ss = kDefaultSupersample;
  std::optional<int> pk_depth;
  auto* pk = app.add_subcommand("pack", "pack pictures into one by masked transforms");
  add_common(pk, pk_c, true);
  pk->add_option("--input", pk_in)->required();
  pk->add_option("--threshold", pk_p)->required();
  pk->add_option("--out", pk_out)->required();
  pk->add_option("--source-system", pk_f);
  pk->add_option("--carrier", pk_g);
  pk->add_option("--resolution", pk_res)->check(CLI::PositiveNumber);
  pk->add_option("--supersample", pk_ss)->check(CLI::PositiveNumber);
  pk->add_option("--depth", pk_depth)->check(CLI::PositiveNumber);

  // unpack
  Common up_c;
  std::string up_in, up_out, up_f = "F", up_g = "G";
  double up_p = 0.5;
  int up_res = 512;
  std::optional<int> up_depth;
  auto* up = app.add_subcommand("unpack", "recover one picture from a pack");
  add_common(up, up_c, true);
  up->add_option("--input", up_in)->required();
  up->add_option("--threshold", up_p)->required();
  up->add_option("--out", up_out)->required();
  up->add_option("--source-system", up_f);
  up->add_option("--carrier", up_g);
  up->add_option("--resolution", up_res)->check(CLI::PositiveNumber);
  up->add_option("--depth", up_depth)->check(CLI::PositiveNumber);

  // encode
  Common en_c;
  std::vector<std::string> en_in, en_sys, en_probs;
  std::vector<long long> en_iter;
  std::string en_out, en_carrier = "H";
  int en_res = 512;
  auto* en = app.add_subcommand("encode", "coupled chaos game encode");
  add_common(en, en_c, true);
  en->add_option("--input", en_in)->required();
  en->add_option("--system", en_sys)->required();
  en->add_option("--probs", en_probs)->required();
  en->add_option("--iterations", en_iter)->required();
  en->add_option("--carrier", en_carrier);
  en->add_option("--resolution", en_res)->check(CLI::PositiveNumber);
  en->add_option("--out", en_out)->required();

  // decode
  Common de_c;
  std::string de_in, de_out, de_sys, de_probs, de_carrier = "H";
  long long de_iter = 0;
  std::size_t de_index = 0;
  int de_res = 512;
  auto* de = app.add_subcommand("decode", "coupled chaos game decode");
  add_common(de, de_c, true);
  de->add_option("--input", de_in)->required();
  de->add_option("--system", de_sys)->required();
  de->add_option("--probs", de_probs)->required();
  de->add_option("--iterations", de_iter)->required()->check(CLI::NonNegativeNumber);
  de->add_option("--carrier", de_carrier);
  de->add_option("--index", de_index, "replay the orbit of encoded source INDEX");
  de->add_option("--resolution", de_res)->check(CLI::PositiveNumber);
  de->add_option("--out", de_out)->required();

  // render-repeller
  Common rr_c;
  double rr_a = 2.0 / 3.0, rr_b = 0.5;
  int rr_res = 512, rr_iter = 64;
  std::string rr_out;
  auto* rr = app.add_subcommand("render-repeller", "escape-time picture of the repeller");
  add_common(rr, rr_c, false);
  rr->add_option("--a", rr_a);
  rr->add_option("--b", rr_b);
  rr->add_option("--resolution", rr_res)->check(CLI::PositiveNumber);
  rr->add_option("--max-iter", rr_iter)->check(CLI::PositiveNumber);
  rr->add_option("--out", rr_out)->required();

  // render-attractor
  Common ra_c;
  std::string ra_sys, ra_probs, ra_out;
  long long ra_points = 1000000;
  int ra_res = 512;
  auto* ra = app.add_subcommand("render-attractor", "chaos-game density picture");
  add_common(ra, ra_c, true);
  ra->add_option("--system", ra_sys)->required();
  ra->add_option("--probs", ra_probs, "probability vector (default: uniform)");
  ra->add_option("--points", ra_points)->check(CLI::PositiveNumber);
  ra->add_option("--resolution", ra_res)->check(CLI::PositiveNumber);
  ra->add_option("--out", ra_out)->required();

  // pstar
  Common ps_c;
  double ps_a = 2.0 / 3.0, ps_b = 0.5;
  int ps_res = 4096, ps_iter = 40;
  auto* ps = app.add_subcommand("pstar", "largest p with (p, 1-p) on the attractor");
  add_common(ps, ps_c, false);
  ps->add_option("--a", ps_a);
  ps->add_option("--b", ps_b);
  ps->add_option("--resolution", ps_res)->check(CLI::PositiveNumber);
  ps->add_option("--iterations", ps_iter)->check(CLI::PositiveNumber);

  // validate-config
  Common vc_c;
  std::string vc_dump;
  auto* vc = app.add_subcommand("validate-config", "parse and check a config");
  add_common(vc, vc_c, true);
  vc->add_option("--dump", vc_dump, "write the normalised JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    Manifest m(name);

    if (sub == tr) {
      set_thread_count(tr_c.threads);
      const Config cfg = load(tr_c);
      const Picture img = read_png(tr_in);
      const int res = resolution_or(tr_res, img);
      const std::string src = or_default(tr_src, cfg.pair, true, "--source");
      const std::string dst = or_default(tr_dst, cfg.pair, false, "--target");
      std::string mode = tr_mode;
      if (mode == "auto") mode = cfg.masks.count(dst) ? "pull" : "splat";
      Picture out;
      int depth = 0;
      if (mode == "pull") {
        const HomeoPair pair = cfg.homeo_pair(src, dst);
        depth = pair.forward.source().depth();
        out = apply_homeomorphism(pair, img, res);
      } else {
        const std::string sys = cfg.masks.count(dst) ? cfg.mask(dst).system : dst;
        const FractalTransform t(cfg.section(src), cfg.system(sys));
        depth = t.source().depth();
        out = splat_raster(t, img, res, tr_ss);
        m.put("supersample", tr_ss);
      }
      write_png(tr_out, out);
      m.source(tr_c);
      m.put("seed", tr_c.seed.value_or(cfg.seed));
      m.put("source", src);
      m.put("target", dst);
      m.put("mode", mode);
      m.put("depth", depth);
      m.put("resolution", res);
      m.output("output", tr_out);
    } else if (sub == st) {
      set_thread_count(st_c.threads);
      const Config cfg = load(st_c);
      const std::string drawing = or_default(st_drawing, cfg.pair, true, "--drawing");
      const std::string palette = or_default(st_palette, cfg.pair, false, "--palette");
      const std::string palette_sys = cfg.masks.count(palette) ? cfg.mask(palette).system : palette;
      const SectionSystem sec = cfg.section(drawing);
      Picture out = color_steal(sec, cfg.system(palette_sys), read_png(st_in), st_res);
      if (st_black) out = over_black(out);
      write_png(st_out, out);
      m.source(st_c);
      m.put("seed", st_c.seed.value_or(cfg.seed));
      m.put("drawing", drawing);
      m.put("palette", palette_sys);
      m.put("depth", sec.depth());
      m.put("resolution", st_res);
      m.output("output", st_out);
    } else if (sub == fi) {
      set_thread_count(fi_c.threads);
      const Config cfg = load(fi_c);
      const Picture img = read_png(fi_in);
      const int grid = resolution_or(fi_grid, img);
      const HomeoPair pair = cfg.homeo_pair(or_default(fi_src, cfg.pair, true, "--source"),
                                            or_default(fi_dst, cfg.pair, false, "--target"));
      write_png(fi_out, fractal_filter(img, pair, grid));
      m.source(fi_c);
      m.put("seed", fi_c.seed.value_or(cfg.seed));
      m.put("depth", pair.forward.source().depth());
      m.put("grid", grid);
      m.output("output", fi_out);
    } else if (sub == pk) {
      set_thread_count(pk_c.threads);
      const Config cfg = load(pk_c);
      if (pk_in.size() != pk_p.size()) throw InvalidArgument("give one --threshold per --input");
      std::vector<PackSource> sources;
      for (std::size_t i = 0; i < pk_in.size(); ++i) sources.push_back({read_png(pk_in[i]), pk_p[i]});
      const IfsSystem& f = cfg.system(pk_f);
      const int depth = pk_depth.value_or(cfg.depth_for(f));
      const PackResult r = pack_masked(sources, f, cfg.system(pk_g), pk_res, pk_ss, depth);
      write_png(pk_out, r.picture);
      m.source(pk_c);
      m.put("seed", pk_c.seed.value_or(cfg.seed));
      m.put("depth", depth);
      for (std::size_t i = 0; i < pk_p.size(); ++i) m.put("threshold_" + std::to_string(i), pk_p[i]);
      m.put("supersample", pk_ss);
      m.put("resolution", pk_res);
      m.put("written_pixels", r.written);
      m.put("collision_pixels", r.collisions);
      m.put("collision_fraction", static_cast<double>(r.collisions) / r.picture.pixel_count());
      m.output("output", pk_out);
    } else if (sub == up) {
      set_thread_count(up_c.threads);
      const Config cfg = load(up_c);
      const IfsSystem& f = cfg.system(up_f);
      const int depth = up_depth.value_or(cfg.depth_for(f));
      write_png(up_out, unpack_masked(read_png(up_in), up_p, f, cfg.system(up_g), up_res, depth));
      m.source(up_c);
      m.put("seed", up_c.seed.value_or(cfg.seed));
      m.put("depth", depth);
      m.put("threshold", up_p);
      m.put("resolution", up_res);
      m.output("output", up_out);
    } else if (sub == en) {
      set_thread_count(en_c.threads);
      const Config cfg = load(en_c);
      const std::size_t n = en_in.size();
      if (en_sys.size() != n || en_probs.size() != n || en_iter.size() != n)
        throw InvalidArgument("--input, --system, --probs and --iterations must repeat equally often");
      std::vector<MeasureSource> sources;
      for (std::size_t i = 0; i < n; ++i)
        sources.push_back({read_png(en_in[i]), cfg.system(en_sys[i]), cfg.probs(en_probs[i]), en_iter[i]});
      const std::uint64_t seed = en_c.seed.value_or(cfg.seed);
      write_png(en_out, encode_measure(sources, cfg.system(en_carrier), en_res, seed));
      m.source(en_c);
      m.put("seed", seed);
      for (std::size_t i = 0; i < n; ++i) {
        m.put("source_" + std::to_string(i), en_sys[i] + "/" + en_probs[i]);
        m.put("iterations_" + std::to_string(i), en_iter[i]);
        m.put("orbit_seed_" + std::to_string(i), orbit_seed(seed, i));
      }
      m.put("carrier", en_carrier);
      m.put("resolution", en_res);
      m.output("output", en_out);
    } else if (sub == de) {
      set_thread_count(de_c.threads);
      const Config cfg = load(de_c);
      const std::uint64_t seed = de_c.seed.value_or(cfg.seed);
      const std::uint64_t orbit = orbit_seed(seed, de_index);
      write_png(de_out, decode_measure(read_png(de_in), cfg.system(de_sys), cfg.probs(de_probs),
                                       cfg.system(de_carrier), de_iter, orbit, de_res));
      m.source(de_c);
      m.put("seed", seed);
      m.put("orbit_seed", orbit);
      m.put("system", de_sys);
      m.put("probs", de_probs);
      m.put("iterations", de_iter);
      m.put("resolution", de_res);
      m.output("output", de_out);
    } else if (sub == rr) {
      set_thread_count(rr_c.threads);
      write_png_gray(rr_out, render_repeller_escape(rr_a, rr_b, rr_res, rr_iter));
      m.put("a", rr_a);
      m.put("b", rr_b);
      m.put("resolution", rr_res);
      m.put("max_iter", rr_iter);
      m.output("output", rr_out);
    } else if (sub == ra) {
      set_thread_count(ra_c.threads);
      const Config cfg = load(ra_c);
      const IfsSystem& ifs = cfg.system(ra_sys);
      const ProbabilityVector probs = ra_probs.empty() ? ProbabilityVector::uniform(ifs.size()) : cfg.probs(ra_probs);
      const std::uint64_t seed = ra_c.seed.value_or(cfg.seed);
      write_png_gray(ra_out, render_attractor_density(ifs, probs, ra_points, seed, ra_res));
      m.source(ra_c);
      m.put("seed", seed);
      m.put("system", ra_sys);
      m.put("points", ra_points);
      m.put("resolution", ra_res);
      m.output("output", ra_out);
    } else if (sub == ps) {
      set_thread_count(ps_c.threads);
      m.put("a", ps_a);
      m.put("b", ps_b);
      m.put("resolution", ps_res);
      m.put("iterations", ps_iter);
      m.put("p_star", compute_p_star(ps_a, ps_b, ps_res, ps_iter));
    } else if (sub == vc) {
      set_thread_count(vc_c.threads);
      const Config cfg = load(vc_c);
      m.source(vc_c);
      m.put("seed", cfg.seed);
      m.put("systems", cfg.systems.size());
      m.put("masks", cfg.masks.size());
      m.put("probabilities", cfg.probabilities.size());
      for (const auto& [key, s] : cfg.systems) m.put("depth_" + key, cfg.depth_for(s));
      if (!vc_dump.empty()) {
        std::ofstream out(vc_dump);
        out << to_json(cfg).dump(2) << '\n';
        if (!out) throw IoError("cannot write " + vc_dump);
        out.close();
        m.output("output", vc_dump);
      }
      m.put("status", std::string("ok"));
    }
    m.print();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.numeric() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
