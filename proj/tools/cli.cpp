#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "manifest.hpp"
#include "wsdf/camera.hpp"
#include "wsdf/certify.hpp"
#include "wsdf/error.hpp"
#include "wsdf/fit.hpp"
#include "wsdf/grid.hpp"
#include "wsdf/grid_io.hpp"
#include "wsdf/image.hpp"
#include "wsdf/mesh.hpp"
#include "wsdf/metrics.hpp"
#include "wsdf/oracle.hpp"
#include "wsdf/parallel.hpp"
#include "wsdf/render.hpp"
#include "wsdf/scene.hpp"
#include "wsdf/smoothing.hpp"
#include "wsdf/transfer.hpp"

namespace wsdf::cli {
namespace {

namespace fs = std::filesystem;

struct ModelFlags {
  double sigma = 1.1;
  std::string sigma_units = "voxel";
  double truncation = 4.0;
  double alpha = 19.0;
  double density_scale = 30.0;
  double eps_d = 1e-3;
  double step = 0.0;
  double albedo = 0.2;
};

void add_smoothing_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--sigma", f.sigma, "Gaussian smoothing sigma")->capture_default_str();
  app->add_option("--sigma-units", f.sigma_units, "Units of --sigma")
      ->check(CLI::IsMember({"voxel", "world"}))
      ->capture_default_str();
  app->add_option("--truncation", f.truncation, "Kernel half-width in multiples of sigma")->capture_default_str();
}

void add_transfer_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--alpha", f.alpha, "Sigmoid eccentricity")->capture_default_str();
  app->add_option("--density-scale", f.density_scale, "Density multiplier")->capture_default_str();
  app->add_option("--eps-d", f.eps_d, "Density log offset")->capture_default_str();
  app->add_option("--step", f.step, "Ray-marching step in world units (<= 0: spacing/2)")->capture_default_str();
  app->add_option("--albedo", f.albedo, "Flat gray albedo in [0, 1]")->capture_default_str();
}

SmoothingConfig smoothing_config(const ModelFlags& f, double spacing) {
  SmoothingConfig cfg{f.sigma_units == "voxel" ? f.sigma * spacing : f.sigma, f.truncation};
  validate(cfg);
  return cfg;
}

ForwardModel forward_model(const ModelFlags& f, double spacing) {
  ForwardModel m;
  m.smoothing = smoothing_config(f, spacing);
  m.transfer = {f.alpha, f.density_scale, f.eps_d};
  validate(m.transfer);
  require(f.albedo >= 0.0 && f.albedo <= 1.0, "--albedo must lie in [0, 1]");
  m.render.step = f.step;
  m.render.albedo = {f.albedo, f.albedo, f.albedo};
  return m;
}

// Domain of generated grids: the cube [0, extent]^3 with n voxels per axis.
struct DomainFlags {
  int dims = 64;
  std::string preset;
  double extent = 1.0;

  CubeDomain domain() const {
    int n = dims;
    if (preset == "r192") n = 192;
    if (preset == "r256") n = 256;
    if (preset == "r384") n = 384;
    return cube_domain(n, extent);
  }
};

void add_domain_flags(CLI::App* app, DomainFlags& f) {
  app->add_option("--dims", f.dims, "Voxels per axis")->capture_default_str();
  app->add_option("--preset", f.preset, "Resolution preset overriding --dims")
      ->check(CLI::IsMember({"r192", "r256", "r384"}));
  app->add_option("--extent", f.extent, "Edge length of the cubic domain in world units")->capture_default_str();
}

struct ShapeFlags {
  std::string kind;
  std::vector<double> center;
  double radius = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> box_min;
  std::vector<double> box_max;
  std::vector<double> normal{0.0, 0.0, 1.0};
  double offset = std::numeric_limits<double>::quiet_NaN();

  AnalyticShape shape(double extent) const {
    const auto vec = [](const std::vector<double>& v, const Vec3& fallback) {
      return v.empty() ? fallback : Vec3{v[0], v[1], v[2]};
    };
    const double c = 0.5 * extent;
    AnalyticShape s;
    if (kind == "sphere") {
      s = Sphere{vec(center, {c, c, c}), std::isnan(radius) ? 0.3 * extent : radius};
    } else if (kind == "box") {
      s = Box{vec(box_min, Vec3{1, 1, 1} * (0.25 * extent)), vec(box_max, Vec3{1, 1, 1} * (0.75 * extent))};
    } else {
      const Vec3 n = vec(normal, {0, 0, 1});
      s = Halfspace{n, std::isnan(offset) ? dot(normalized(n), Vec3{c, c, c}) : offset};
    }
    validate(s);
    return s;
  }
};

void add_shape_flags(CLI::App* app, ShapeFlags& f) {
  app->add_option("shape", f.kind, "sphere, box or halfspace")
      ->required()
      ->check(CLI::IsMember({"sphere", "box", "halfspace"}));
  app->add_option("--center", f.center, "Sphere center (default: domain center)")->expected(3);
  app->add_option("--radius", f.radius, "Sphere radius (default: 0.3 * extent)");
  app->add_option("--min", f.box_min, "Box min corner (default: 0.25 * extent)")->expected(3);
  app->add_option("--max", f.box_max, "Box max corner (default: 0.75 * extent)")->expected(3);
  app->add_option("--normal", f.normal, "Halfspace normal (occupied along it)")->expected(3);
  app->add_option("--offset", f.offset, "Halfspace offset (default: through the domain center)");
}

GridFormat grid_format(const std::string& name) { return name == "text" ? GridFormat::kText : GridFormat::kBinary; }

void require_input(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorCategory::kIo, path.string() + ": no such file");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Diverging color map for SDF slices: red inside, blue outside, white at 0.
Image sdf_slice(const VoxelGrid& sdf, int axis, double scale) {
  const GridDims& d = sdf.dims();
  const int a = axis == 0 ? 1 : 0;
  const int b = axis == 2 ? 1 : 2;
  Image img(d[a], d[b], 3);
  const int mid = d[axis] / 2;
  for (int v = 0; v < d[b]; ++v) {
    for (int u = 0; u < d[a]; ++u) {
      int ijk[3];
      ijk[axis] = mid;
      ijk[a] = u;
      ijk[b] = d[b] - 1 - v;
      const double t = std::clamp(sdf.at(ijk[0], ijk[1], ijk[2]) / scale, -1.0, 1.0);
      const double s = 1.0 - std::abs(t);
      img.at(u, v, 0) = t >= 0 ? 1.0 : s;
      img.at(u, v, 1) = s;
      img.at(u, v, 2) = t <= 0 ? 1.0 : s;
    }
  }
  return img;
}

std::vector<WorldPoint> read_probes(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::kIo, path.string() + ": cannot open probe file");
  std::vector<WorldPoint> probes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    WorldPoint p;
    if (!(ls >> p.x)) continue;
    if (!(ls >> p.y >> p.z) || !is_finite(p)) {
      fail(ErrorCategory::kIo, path.string() + ":" + std::to_string(line_no) + ": expected three finite numbers");
    }
    probes.push_back(p);
  }
  if (probes.empty()) fail(ErrorCategory::kIo, path.string() + ": no probe points");
  return probes;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::kIo, path.string() + ": cannot open for writing");
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) fail(ErrorCategory::kIo, path.string() + ": write failed");
}

// Every resolved option of `app` (given or defaulted), in declaration order.
std::vector<std::pair<std::string, std::string>> resolved_options(const CLI::App* app) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--config" || name == "--help-all") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
    } else {
      value = opt->get_default_str();
    }
    out.emplace_back(name, value.empty() ? "-" : value);
  }
  return out;
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kInvalidArgument:
      return kExitInvalidArgument;
    case ErrorCategory::kIo:
      return kExitIo;
    case ErrorCategory::kDomain:
      return kExitDomain;
    case ErrorCategory::kNumeric:
      return kExitNumeric;
  }
  return kExitInternal;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv);

 private:
  void setup();
  Manifest manifest(const CLI::App* sub, std::vector<fs::path> inputs) const {
    Manifest m;
    m.command = sub->get_parent() != nullptr && sub->get_parent()->get_parent() != nullptr
                    ? sub->get_parent()->get_name() + " " + sub->get_name()
                    : sub->get_name();
    m.threads = thread_count();
    m.inputs = std::move(inputs);
    m.options = resolved_options(sub);
    return m;
  }

  void cmd_make_fixture();
  void cmd_smooth();
  void cmd_sdf();
  void cmd_certify_mc();
  void cmd_render();
  void cmd_mesh();
  void cmd_eval_psnr();
  void cmd_eval_chamfer();
  void cmd_fit();
  void cmd_oracle_edt();
  void cmd_oracle_sdf();

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Certified weak signed distance fields from voxel occupancy grids", "wsdf"};
  int threads_ = 0;
  std::function<void()> action_;
  CLI::App* current_ = nullptr;

  // Shared option storage; each run executes a single subcommand.
  ModelFlags model_;
  DomainFlags domain_;
  ShapeFlags shape_;
  std::string in_;
  std::string in2_;
  std::string out_path_;
  std::string format_ = "binary";
  bool binarize_ = false;
  double eps_p_ = kDefaultProbabilityClamp;
  std::string slices_;
  std::string probes_;
  std::int64_t n_ = 100000;
  double alpha_conf_ = 1e-3;
  std::uint64_t seed_ = 0;
  std::string camera_;
  std::string opacity_out_;
  std::string depth_out_;
  std::string depth_raw_out_;
  double isovalue_ = kDefaultIsovalueVoxels;
  std::string isovalue_units_ = "voxel";
  std::string mesh_format_;
  std::int64_t samples_ = 10000;
  bool root_ = false;
  std::string scene_;
  SceneLayout layout_;
  std::string init_;
  double init_value_ = 0.5;
  std::string report_;
  FitConfig fit_;
  bool no_line_search_ = false;
  double t_near_ = 0.0;
  double t_far_ = 6.0;
};

void Runner::setup() {
  app_.require_subcommand(1);
  app_.fallthrough();
  app_.set_config("--config", "", "INI/TOML file of option values; command-line flags take precedence");
  app_.add_option("--threads", threads_, "Worker threads (0: WSDF_THREADS or all cores; 1: fully deterministic)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app_.footer(
      "Exit codes: 0 ok, 1 internal error, 2 usage error, 3 I/O error, 4 invalid argument,\n"
      "5 math domain error, 6 numerical failure.");

  auto bind = [this](CLI::App* sub, void (Runner::*fn)()) {
    sub->callback([this, sub, fn] {
      current_ = sub;
      action_ = [this, fn] { (this->*fn)(); };
    });
  };

  {
    auto* sub = app_.add_subcommand("make-fixture", "Write a binary occupancy grid of an analytic shape");
    add_shape_flags(sub, shape_);
    add_domain_flags(sub, domain_);
    sub->add_option("--out", out_path_, "Output grid path")->required();
    sub->add_option("--format", format_, "Grid file variant")->check(CLI::IsMember({"binary", "text"}))->capture_default_str();
    sub->add_option("--scene", scene_, "Also render a fitting scene of the shape into this directory");
    sub->add_option("--views", layout_.views, "Training views of the scene")->capture_default_str();
    sub->add_option("--holdout-views", layout_.held_out, "Held-out views of the scene")->capture_default_str();
    sub->add_option("--image-size", layout_.image_size, "Scene image width and height")->capture_default_str();
    add_smoothing_flags(sub, model_);
    add_transfer_flags(sub, model_);
    bind(sub, &Runner::cmd_make_fixture);
  }
  {
    auto* sub = app_.add_subcommand("smooth", "Gaussian-smooth an occupancy grid");
    sub->add_option("--in", in_, "Occupancy grid")->required();
    sub->add_option("--out", out_path_, "Smoothed grid")->required();
    sub->add_option("--format", format_, "Grid file variant")->check(CLI::IsMember({"binary", "text"}))->capture_default_str();
    add_smoothing_flags(sub, model_);
    bind(sub, &Runner::cmd_smooth);
  }
  {
    auto* sub = app_.add_subcommand("sdf", "Weak SDF (certified radius per voxel) of an occupancy or smoothed grid");
    sub->add_option("--in", in_, "Occupancy grid, or a grid written by `smooth`")->required();
    sub->add_option("--out", out_path_, "Weak SDF grid")->required();
    sub->add_option("--format", format_, "Grid file variant")->check(CLI::IsMember({"binary", "text"}))->capture_default_str();
    sub->add_option("--eps-p", eps_p_, "Probability clamp before the inverse normal CDF")->capture_default_str();
    sub->add_flag("--binarize", binarize_, "Threshold the occupancy at 1/2 first (required for certified output)");
    sub->add_option("--slices", slices_, "Directory for x/y/z center-cut images");
    add_smoothing_flags(sub, model_);
    bind(sub, &Runner::cmd_sdf);
  }
  {
    auto* sub = app_.add_subcommand("certify-mc", "Monte-Carlo randomized-smoothing certificates at probe points");
    sub->add_option("--in", in_, "Occupancy grid")->required();
    sub->add_option("--probes", probes_, "Text file with one x y z triple per line")->required();
    sub->add_option("--out", out_path_, "CSV report")->required();
    sub->add_option("--n", n_, "Gaussian draws per probe")->capture_default_str();
    sub->add_option("--alpha", alpha_conf_, "One-sided confidence level alpha")->capture_default_str();
    sub->add_option("--seed", seed_, "Random seed (probe i uses substream i)")->capture_default_str();
    sub->add_option("--eps-p", eps_p_, "Probability clamp")->capture_default_str();
    add_smoothing_flags(sub, model_);
    bind(sub, &Runner::cmd_certify_mc);
  }
  {
    auto* sub = app_.add_subcommand("render", "Volume-render an occupancy grid");
    sub->add_option("--in", in_, "Occupancy grid")->required();
    sub->add_option("--camera", camera_, "Camera file")->required();
    sub->add_option("--out", out_path_, "Color image (.ppm or .png)")->required();
    sub->add_option("--opacity", opacity_out_, "Opacity image (.pgm or .png)");
    sub->add_option("--depth", depth_out_, "16-bit depth PNG (0 = background)");
    sub->add_option("--depth-raw", depth_raw_out_, "Raw little-endian f32 depth (-1 = background)");
    add_smoothing_flags(sub, model_);
    add_transfer_flags(sub, model_);
    bind(sub, &Runner::cmd_render);
  }
  {
    auto* sub = app_.add_subcommand("mesh", "Marching-cubes mesh of a weak SDF grid");
    sub->add_option("--in", in_, "Weak SDF grid")->required();
    sub->add_option("--out", out_path_, "Mesh (.obj or .ply)")->required();
    sub->add_option("--isovalue", isovalue_, "Extraction level")->capture_default_str();
    sub->add_option("--isovalue-units", isovalue_units_, "voxel: isovalue is multiplied by the spacing")
        ->check(CLI::IsMember({"voxel", "world"}))
        ->capture_default_str();
    sub->add_option("--format", mesh_format_, "obj or ply (default: from the extension)")
        ->check(CLI::IsMember({"obj", "ply"}));
    bind(sub, &Runner::cmd_mesh);
  }
  {
    auto* eval = app_.add_subcommand("eval", "Image and geometry metrics");
    eval->require_subcommand(1);
    auto* p = eval->add_subcommand("psnr", "PSNR between two images");
    p->add_option("a", in_, "First image")->required();
    p->add_option("b", in2_, "Second image")->required();
    p->add_option("--out", out_path_, "CSV report (default: stdout)");
    bind(p, &Runner::cmd_eval_psnr);
    auto* c = eval->add_subcommand("chamfer", "Chamfer distance between two meshes");
    c->add_option("a", in_, "First mesh")->required();
    c->add_option("b", in2_, "Second mesh")->required();
    c->add_option("--samples", samples_, "Points sampled per mesh")->capture_default_str();
    c->add_option("--seed", seed_, "Sampling seed (mesh b uses seed + 1)")->capture_default_str();
    c->add_flag("--root", root_, "Use unsquared nearest distances");
    c->add_option("--out", out_path_, "CSV report (default: stdout)");
    bind(c, &Runner::cmd_eval_chamfer);
  }
  {
    auto* sub = app_.add_subcommand("fit", "Fit an occupancy grid to posed images");
    sub->add_option("--scene", scene_, "Scene directory (cam_NNN.txt + img_NNN.ppm, or transforms_*.json)")
        ->required();
    sub->add_option("--out", out_path_, "Fitted occupancy grid")->required();
    sub->add_option("--report", report_, "Loss trace CSV");
    sub->add_option("--init", init_, "Initial occupancy grid (default: constant grid over the domain)");
    sub->add_option("--init-value", init_value_, "Value of the constant initial grid")->capture_default_str();
    add_domain_flags(sub, domain_);
    sub->add_option("--iters", fit_.iterations, "Iterations")->capture_default_str();
    sub->add_option("--lr", fit_.learning_rate, "Initial step size")->capture_default_str();
    sub->add_option("--batch", fit_.batch_rays, "Rays per step (>= all rays: full batch)")->capture_default_str();
    sub->add_option("--seed", fit_.seed, "Ray-batch seed")->capture_default_str();
    sub->add_flag("--no-line-search", no_line_search_, "Take fixed steps of size --lr");
    sub->add_option("--t-near", t_near_, "Ray start for transforms-style scenes")->capture_default_str();
    sub->add_option("--t-far", t_far_, "Ray end for transforms-style scenes")->capture_default_str();
    sub->add_option("--format", format_, "Grid file variant")->check(CLI::IsMember({"binary", "text"}))->capture_default_str();
    add_smoothing_flags(sub, model_);
    add_transfer_flags(sub, model_);
    bind(sub, &Runner::cmd_fit);
  }
  {
    auto* oracle = app_.add_subcommand("oracle", "Ground-truth fields for testing");
    oracle->group("");
    oracle->require_subcommand(1);
    auto* edt = oracle->add_subcommand("edt", "Exact signed Euclidean distance transform of a binary grid");
    edt->add_option("--in", in_, "Binary occupancy grid")->required();
    edt->add_option("--out", out_path_, "Distance grid")->required();
    edt->add_option("--format", format_, "Grid file variant")->check(CLI::IsMember({"binary", "text"}))->capture_default_str();
    bind(edt, &Runner::cmd_oracle_edt);
    auto* sdf = oracle->add_subcommand("sdf", "Analytic signed distance sampled at voxel centers");
    add_shape_flags(sdf, shape_);
    add_domain_flags(sdf, domain_);
    sdf->add_option("--out", out_path_, "Distance grid")->required();
    sdf->add_option("--format", format_, "Grid file variant")->check(CLI::IsMember({"binary", "text"}))->capture_default_str();
    bind(sdf, &Runner::cmd_oracle_sdf);
  }
}

int Runner::run(int argc, const char* const* argv) {
  setup();
  try {
    app_.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app_.exit(e, out_, err_);
  } catch (const CLI::CallForAllHelp& e) {
    return app_.exit(e, out_, err_);
  } catch (const CLI::CallForVersion& e) {
    return app_.exit(e, out_, err_);
  } catch (const CLI::ParseError& e) {
    err_ << "wsdf: error[usage]: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }
  try {
    const int threads = threads_ > 0 ? threads_ : thread_count_from_env(0);
    if (threads > 0) set_thread_count(threads);
    if (action_) action_();
    return kExitOk;
  } catch (const Error& e) {
    err_ << "wsdf: error[" << to_string(e.category()) << "]: " << one_line(e.what()) << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err_ << "wsdf: error[internal]: " << one_line(e.what()) << '\n';
    return kExitInternal;
  }
}

void Runner::cmd_make_fixture() {
  const CubeDomain d = domain_.domain();
  const AnalyticShape shape = shape_.shape(domain_.extent);
  const VoxelGrid grid = make_analytic_grid(shape, d.dims, d.origin, d.spacing);
  write_grid(out_path_, grid, grid_format(format_));
  Manifest m = manifest(current_, {});
  m.results.emplace_back("occupied_voxels", std::to_string(static_cast<long long>(std::count(
                                                grid.values().begin(), grid.values().end(), 1.0))));
  m.write_for(out_path_);
  if (!scene_.empty()) {
    const Scene scene = render_scene(grid, SceneLayout{layout_.views, layout_.held_out, layout_.image_size,
                                                       domain_.extent},
                                     forward_model(model_, d.spacing));
    for (const fs::path& file : write_scene(scene_, scene)) {
      Manifest sm = manifest(current_, {out_path_});
      sm.write_for(file);
    }
  }
  out_ << "wrote " << out_path_ << '\n';
}

void Runner::cmd_smooth() {
  require_input(in_);
  const VoxelGrid grid = read_grid(in_);
  require(grid.kind() == FieldKind::kOccupancy, in_ + ": smoothing needs an occupancy grid, got " + to_string(grid.kind()));
  const SmoothedGrid s = smooth(grid, smoothing_config(model_, grid.spacing()));
  write_grid(out_path_, s.grid, grid_format(format_));
  Manifest m = manifest(current_, {in_});
  m.results.emplace_back("sigma_world", format_double(s.config.sigma_world));
  m.results.emplace_back("source_binary", s.source_binary ? "true" : "false");
  m.write_for(out_path_);
  out_ << "wrote " << out_path_ << '\n';
}

void Runner::cmd_sdf() {
  require_input(in_);
  VoxelGrid grid = read_grid(in_);
  const SmoothingConfig cfg = smoothing_config(model_, grid.spacing());
  SmoothedGrid smoothed{grid, cfg, false};
  if (grid.kind() == FieldKind::kOccupancy) {
    if (binarize_) grid = binarize(grid);
    smoothed = smooth(grid, cfg);
  } else {
    require(grid.kind() == FieldKind::kSmoothed,
            in_ + ": expected an occupancy or smoothed grid, got " + to_string(grid.kind()));
    require(!binarize_, "--binarize needs an occupancy grid as input");
  }
  const WeakSdfGrid sdf = weak_sdf(smoothed, eps_p_);
  write_grid(out_path_, sdf.grid, grid_format(format_));
  if (!sdf.certified) {
    err_ << "wsdf: note: input occupancy is not binary; the output is a heuristic distance, not a certified radius "
            "(use --binarize)\n";
  }
  Manifest m = manifest(current_, {in_});
  m.results.emplace_back("sigma_world", format_double(sdf.sigma_world));
  m.results.emplace_back("certified", sdf.certified ? "true" : "false");
  m.results.emplace_back("saturation", format_double(weak_sdf_ceiling(sdf.sigma_world, sdf.eps_p)));
  m.write_for(out_path_);
  if (!slices_.empty()) {
    std::error_code ec;
    fs::create_directories(slices_, ec);
    if (ec) fail(ErrorCategory::kIo, slices_ + ": cannot create directory: " + ec.message());
    const double scale = weak_sdf_ceiling(sdf.sigma_world, sdf.eps_p);
    const char* names[3] = {"sdf_x.ppm", "sdf_y.ppm", "sdf_z.ppm"};
    for (int axis = 0; axis < 3; ++axis) {
      const fs::path p = fs::path(slices_) / names[axis];
      write_image(p, sdf_slice(sdf.grid, axis, scale));
      manifest(current_, {in_}).write_for(p);
    }
  }
  out_ << "wrote " << out_path_ << '\n';
}

void Runner::cmd_certify_mc() {
  require_input(in_);
  require_input(probes_);
  const VoxelGrid grid = read_grid(in_);
  require(grid.kind() == FieldKind::kOccupancy, in_ + ": certification needs an occupancy grid");
  const std::vector<WorldPoint> probes = read_probes(probes_);
  const SmoothingConfig cfg = smoothing_config(model_, grid.spacing());
  std::vector<McCertificate> certs(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    McOptions o;
    o.n = n_;
    o.alpha_conf = alpha_conf_;
    o.seed = seed_;
    o.stream = i;
    o.eps_p = eps_p_;
    certs[i] = certify_monte_carlo(grid, probes[i], cfg.sigma_world, o);
  }
  std::ofstream os = open_output(out_path_);
  os << "x,y,z,n,class,p_hat,p_lower,radius_lower,radius_hat,confidence,abstain\n";
  os << std::setprecision(10);
  for (const McCertificate& c : certs) {
    os << c.point.x << ',' << c.point.y << ',' << c.point.z << ',' << c.n_samples << ',' << c.top_class << ','
       << c.p_hat << ',' << c.p_lower << ',' << c.radius_lower << ',' << c.radius_hat << ',' << c.confidence << ','
       << (c.abstain ? 1 : 0) << '\n';
  }
  close_output(os, out_path_);
  Manifest m = manifest(current_, {in_, probes_});
  m.results.emplace_back("binary_grid", grid.is_binary() ? "true" : "false");
  m.write_for(out_path_);
  if (!grid.is_binary()) err_ << "wsdf: note: grid is not binary; certificates refer to its 0.5 threshold\n";
  out_ << "wrote " << out_path_ << '\n';
}

void Runner::cmd_render() {
  require_input(in_);
  require_input(camera_);
  const VoxelGrid grid = read_grid(in_);
  require(grid.kind() == FieldKind::kOccupancy, in_ + ": rendering needs an occupancy grid");
  const Camera cam = read_camera(camera_);
  validate(cam);
  const ForwardModel model = forward_model(model_, grid.spacing());
  const RenderedImage img = render_model(grid, cam, model);
  const std::vector<fs::path> inputs{in_, camera_};
  write_image(out_path_, img.color_image());
  manifest(current_, inputs).write_for(out_path_);
  if (!opacity_out_.empty()) {
    write_image(opacity_out_, img.opacity_image());
    manifest(current_, inputs).write_for(opacity_out_);
  }
  if (!depth_out_.empty()) {
    write_png16(depth_out_, img.width, img.height, encode_depth16(img, cam.t_near, cam.t_far));
    manifest(current_, inputs).write_for(depth_out_);
  }
  if (!depth_raw_out_.empty()) {
    write_raw_f32(depth_raw_out_, img.depth);
    manifest(current_, inputs).write_for(depth_raw_out_);
  }
  out_ << "wrote " << out_path_ << '\n';
}

void Runner::cmd_mesh() {
  require_input(in_);
  const VoxelGrid field = read_grid(in_);
  if (field.kind() != FieldKind::kWeakSdf) {
    err_ << "wsdf: note: extracting from a " << to_string(field.kind()) << " grid, not a weak SDF\n";
  }
  const double iso = isovalue_units_ == "voxel" ? isovalue_ * field.spacing() : isovalue_;
  const TriangleMesh mesh = marching_cubes(field, iso);
  if (mesh_format_.empty()) {
    write_mesh(out_path_, mesh);
  } else {
    write_mesh(out_path_, mesh, mesh_format_from_name(mesh_format_));
  }
  const MeshTopology topo = analyze_topology(mesh);
  Manifest m = manifest(current_, {in_});
  m.results.emplace_back("isovalue_world", format_double(iso));
  m.results.emplace_back("vertices", std::to_string(mesh.vertices.size()));
  m.results.emplace_back("triangles", std::to_string(mesh.triangles.size()));
  m.results.emplace_back("closed_manifold", topo.closed_manifold() ? "true" : "false");
  m.write_for(out_path_);
  if (mesh.empty()) err_ << "wsdf: note: the field does not cross the isovalue; the mesh is empty\n";
  out_ << "wrote " << out_path_ << " (" << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
       << " triangles)\n";
}

void Runner::cmd_eval_psnr() {
  require_input(in_);
  require_input(in2_);
  const PsnrResult r = psnr(read_image(in_), read_image(in2_));
  std::ostringstream os;
  os << std::setprecision(10) << "psnr_db,mse,capped\n" << r.db << ',' << r.mse << ',' << (r.capped ? 1 : 0) << '\n';
  if (out_path_.empty()) {
    out_ << os.str();
    return;
  }
  std::ofstream f = open_output(out_path_);
  f << os.str();
  close_output(f, out_path_);
  manifest(current_, {in_, in2_}).write_for(out_path_);
}

void Runner::cmd_eval_chamfer() {
  require_input(in_);
  require_input(in2_);
  require(samples_ >= 1, "--samples must be >= 1");
  const PointCloud a = sample_mesh(read_mesh(in_), samples_, seed_);
  const PointCloud b = sample_mesh(read_mesh(in2_), samples_, seed_ + 1);
  const double d = chamfer(a, b, root_);
  std::ostringstream os;
  os << std::setprecision(12) << "chamfer,samples,seed,root\n"
     << d << ',' << samples_ << ',' << seed_ << ',' << (root_ ? 1 : 0) << '\n';
  if (out_path_.empty()) {
    out_ << os.str();
    return;
  }
  std::ofstream f = open_output(out_path_);
  f << os.str();
  close_output(f, out_path_);
  manifest(current_, {in_, in2_}).write_for(out_path_);
}

void Runner::cmd_fit() {
  if (!init_.empty()) require_input(init_);
  const Scene scene = read_scene(scene_, t_near_, t_far_);
  VoxelGrid initial = [&] {
    if (!init_.empty()) return read_grid(init_);
    const CubeDomain d = domain_.domain();
    require(init_value_ >= 0.0 && init_value_ <= 1.0, "--init-value must lie in [0, 1]");
    return VoxelGrid(d.dims, d.origin, d.spacing, FieldKind::kOccupancy,
                     std::vector<double>(d.dims.count(), init_value_));
  }();
  require(initial.kind() == FieldKind::kOccupancy, "the initial grid must be an occupancy grid");
  FitConfig cfg = fit_;
  cfg.line_search = !no_line_search_;
  const ForwardModel model = forward_model(model_, initial.spacing());
  const FitResult result = fit(initial, scene.train, scene.held_out, model, cfg);
  write_grid(out_path_, result.grid, grid_format(format_));

  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(scene_)) {
    if (entry.is_regular_file() && entry.path().filename().string().find(".manifest.") == std::string::npos) {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  if (!init_.empty()) inputs.emplace_back(init_);
  Manifest m = manifest(current_, inputs);
  m.results.emplace_back("best_loss", format_double(result.report.best_loss));
  m.results.emplace_back("final_psnr", format_double(result.report.final_psnr));
  m.results.emplace_back("psnr_views", scene.held_out.empty() ? "train" : "held_out");
  m.write_for(out_path_);
  if (!report_.empty()) {
    std::ofstream os = open_output(report_);
    os << std::setprecision(12) << "iteration,loss,step\n";
    for (std::size_t i = 0; i < result.report.loss_trace.size(); ++i) {
      os << i << ',' << result.report.loss_trace[i] << ',' << result.report.step_sizes[i] << '\n';
    }
    close_output(os, report_);
    m.write_for(report_);
  }
  out_ << std::setprecision(6) << "best_loss " << result.report.best_loss << '\n'
       << "final_psnr_db " << result.report.final_psnr << '\n'
       << "seconds " << result.report.seconds << '\n';
}

void Runner::cmd_oracle_edt() {
  require_input(in_);
  const DistanceTransform dt = exact_distance_transform(read_grid(in_));
  write_grid(out_path_, dt.distances, grid_format(format_));
  Manifest m = manifest(current_, {in_});
  m.results.emplace_back("saturated", dt.saturated ? "true" : "false");
  m.write_for(out_path_);
  out_ << "wrote " << out_path_ << '\n';
}

void Runner::cmd_oracle_sdf() {
  const CubeDomain d = domain_.domain();
  const AnalyticShape shape = shape_.shape(domain_.extent);
  VoxelGrid grid(d.dims, d.origin, d.spacing, FieldKind::kScalar);
  for (int k = 0; k < d.dims.nz; ++k) {
    for (int j = 0; j < d.dims.ny; ++j) {
      for (int i = 0; i < d.dims.nx; ++i) grid.set(i, j, k, analytic_sdf(shape, grid.voxel_center(i, j, k)));
    }
  }
  write_grid(out_path_, grid, grid_format(format_));
  manifest(current_, {}).write_for(out_path_);
  out_ << "wrote " << out_path_ << '\n';
}

}  // namespace

int run_subcommand(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  return runner.run(argc, argv);
}

}  // namespace wsdf::cli
