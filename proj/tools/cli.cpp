#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalefit/aggregate.hpp"
#include "scalefit/cumulant.hpp"
#include "scalefit/error.hpp"
#include "scalefit/scaling.hpp"
#include "scalefit/synth.hpp"
#include "scalefit/trace_io.hpp"
#include "scalefit/wavelet.hpp"

namespace scalefit::cli {

namespace {

namespace fs = std::filesystem;

// Bad flags or unreadable input: exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void usage(const std::string& message) { throw UsageError(message); }

std::string fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return format_real(v);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---- option groups shared between subcommands -------------------------

struct WaveletFlags {
  std::string family = "d4";
  int levels = 0;  // 0: deepest admissible
  int j1 = 0;      // 0: default fit range
  int j2 = 0;
  std::vector<CLI::Option*> options;

  void add(CLI::App* app) {
    options.push_back(app->add_option("--wavelet", family,
                                       "Wavelet family: haar or d4 (d4 has two vanishing moments, so "
                                       "linear trends do not leak into the details)")
                          ->capture_default_str());
    options.push_back(app->add_option("--levels", levels,
                                      "Decomposition depth; 0 picks log2(N)-3 so the coarsest octave "
                                      "keeps 8 coefficients")
                          ->capture_default_str());
    options.push_back(app->add_option("--j1", j1,
                                      "First fitted octave; 0 means 3 (finest octaves carry "
                                      "discretization bias)")
                          ->capture_default_str());
    options.push_back(app->add_option("--j2", j2,
                                      "Last fitted octave; 0 means levels-1 (coarsest octave has "
                                      "too few coefficients)")
                          ->capture_default_str());
  }

  bool given() const {
    for (const auto* o : options) {
      if (o->count() > 0) return true;
    }
    return false;
  }

  WaveletFamily parsed_family() const {
    const auto f = parse_wavelet_family(family);
    if (!f) usage("--wavelet must be haar or d4, got \"" + family + "\"");
    return *f;
  }

  // Levels after checking against the trace length.
  int resolve_levels(std::size_t length) const {
    if (!is_power_of_two(length) || max_wavelet_levels(length) < 1) {
      usage("wavelet analysis needs a power-of-two trace of at least 16 samples, got " +
            std::to_string(length));
    }
    const int max_levels = max_wavelet_levels(length);
    if (levels == 0) return max_levels;
    if (levels < 1 || levels > max_levels) {
      usage("--levels must be in 1.." + std::to_string(max_levels) + " for " +
            std::to_string(length) + " samples (8 coefficients at the coarsest octave), got " +
            std::to_string(levels));
    }
    return levels;
  }

  std::pair<int, int> resolve_range(const LogscaleDiagram& diagram) const {
    auto [d1, d2] = default_fit_range(diagram);
    const int a = j1 == 0 ? d1 : j1;
    const int b = j2 == 0 ? d2 : j2;
    const int levels_used = diagram.octaves.empty() ? 0 : diagram.octaves.back();
    if (a < 1 || b > levels_used || b - a < 2) {
      usage("--j1/--j2 must satisfy 1 <= j1, j1 + 2 <= j2 <= " + std::to_string(levels_used) +
            " (3 octaves minimum), got [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return {a, b};
  }
};

struct KneeFlags {
  double min_reduction = 0.2;
  double flat_tolerance = 0.1;

  void add(CLI::App* app) {
    app->add_option("--min-reduction", min_reduction,
                    "Relative SSE reduction a two-segment fit must achieve to count as a knee "
                    "(scale-free threshold)")
        ->capture_default_str();
    app->add_option("--flat-tolerance", flat_tolerance,
                    "Curves whose H spread is at most this are flat; estimation noise is not a "
                    "knee")
        ->capture_default_str();
  }

  KneeCriteria validate() const {
    if (!(min_reduction >= 0.0 && min_reduction <= 1.0)) {
      usage("--min-reduction must be in [0, 1], got " + format_real(min_reduction));
    }
    if (!(flat_tolerance >= 0.0)) {
      usage("--flat-tolerance must be >= 0, got " + format_real(flat_tolerance));
    }
    return {min_reduction, flat_tolerance};
  }
};

void check_order(const char* flag, int order) {
  if (order < 1 || order > kMaxCumulantOrder) {
    usage(std::string(flag) + " must be in 1..6, got " + std::to_string(order));
  }
}

void check_window(int width) {
  if (width < kMinWindowWidth) {
    usage("--window must be >= 3 (minimum width 3: a line through fewer octaves has no "
          "residual), got " + std::to_string(width));
  }
}

std::optional<OctaveWindow> octave_range(const std::vector<int>& v) {
  if (v.empty()) return std::nullopt;
  if (v[0] < 0 || v[0] > v[1]) {
    usage("--octaves needs 0 <= LO <= HI, got " + std::to_string(v[0]) + " " + std::to_string(v[1]));
  }
  return OctaveWindow{v[0], v[1]};
}

void add_octaves(CLI::App* app, std::vector<int>& target) {
  app->add_option("--octaves", target,
                  "Restrict to octaves LO HI (log2 block size); locality curves default to "
                  "octaves with >= 128 blocks, other fits to every scale")
      ->expected(2);
}

Trace load_input(const std::string& path, std::ostream& err) {
  if (path.empty()) usage("--in is required");
  if (!fs::exists(path)) usage("--in: no such file: " + path);
  try {
    LoadedTrace loaded = read_trace(path);
    if (loaded.sidecar_missing) {
      err << "warning: " << sidecar_path(path).string() << " not found; metadata left empty\n";
    }
    if (loaded.trace.samples.empty()) usage("--in: " + path + " holds no samples");
    return std::move(loaded.trace);
  } catch (const Error& e) {
    usage("--in: " + std::string(e.what()));
  }
}

void check_output_parent(const std::string& path, const char* flag) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    usage(std::string(flag) + ": directory " + parent.string() + " does not exist");
  }
}

CumulantTable build_table(const Trace& trace, int max_order,
                          std::vector<std::size_t> scales = {}) {
  if (scales.empty()) scales = dyadic_scales(trace.size());
  return cumulant_scaling_table(build_pyramid(trace, std::move(scales)), max_order);
}

void print_knee(std::ostream& out, const LocalityCurve& curve, const KneeCriteria& criteria) {
  out << "points: " << curve.points.size() << "\n";
  out << "spread: " << fixed(curve.spread()) << "\n";
  if (curve.points.size() < kMinKneePoints) {
    out << "no significant knee (curve has " << curve.points.size() << " points, need "
        << kMinKneePoints << ")\n";
    return;
  }
  const KneePoint knee = detect_knee(curve);
  out << "knee octave: " << fixed(knee.octave, 3) << "\n";
  out << "left slope: " << fixed(knee.left_slope) << "\n";
  out << "right slope: " << fixed(knee.right_slope) << "\n";
  out << "sse_reduction: " << format_real(knee.sse_reduction) << " ("
      << fixed(100.0 * knee.relative_reduction(), 1) << "% of single-line SSE)\n";
  out << (knee_is_significant(knee, curve, criteria) ? "significant knee" : "no significant knee")
      << "\n";
}

// ---- subcommands ------------------------------------------------------

struct GenerateCmd {
  std::string model;
  double hurst = 0.7;
  std::size_t length = 1 << 16;
  double variance = 1.0;
  std::uint64_t seed = 0;
  double multiplier = 2.0;
  double total_mass = 1.0;
  bool equal_split = false;
  std::optional<std::uint64_t> cascade_seed;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--model", model, "fgn, cascade or multifractal (fgn modulated by a cascade)")
        ->required()
        ->check(CLI::IsMember({"fgn", "cascade", "multifractal"}));
    app->add_option("--hurst", hurst, "Hurst exponent in (0, 1); above 0.5 is long-range dependent")
        ->capture_default_str();
    app->add_option("--length", length,
                    "Samples, a power of two >= 16 (cascades use depth log2 length)")
        ->capture_default_str();
    app->add_option("--variance", variance, "fGn marginal variance")->capture_default_str();
    app->add_option("--seed", seed, "RNG seed; same seed, same bytes")->capture_default_str();
    app->add_option("--multiplier", multiplier,
                    "Cascade Beta(a, a) parameter a; smaller a gives burstier mass")
        ->capture_default_str();
    app->add_option("--total-mass", total_mass, "Cascade total mass")->capture_default_str();
    app->add_flag("--equal-split", equal_split, "Cascade splits every cell in half (flat measure)");
    app->add_option("--cascade-seed", cascade_seed,
                    "Seed of the multifractal cascade (default: seed + 1)");
    app->add_option("--out", out_path, "Output CSV; metadata goes to <out>.meta.json")->required();
  }

  int run(std::ostream& out, std::ostream&) const {
    if (!(hurst > 0.0 && hurst < 1.0)) {
      usage("--hurst must lie in the open interval (0, 1), got " + format_real(hurst));
    }
    if (!(variance > 0.0) || !std::isfinite(variance)) {
      usage("--variance must be finite and > 0, got " + format_real(variance));
    }
    if (length < 16 || !is_power_of_two(length) || length > (std::size_t{1} << 30)) {
      usage("--length must be a power of two in [16, 2^30], got " + std::to_string(length));
    }
    if (!(multiplier > 0.0)) usage("--multiplier must be > 0, got " + format_real(multiplier));
    if (!(total_mass > 0.0) || !std::isfinite(total_mass)) {
      usage("--total-mass must be finite and > 0, got " + format_real(total_mass));
    }
    check_output_parent(out_path, "--out");

    FgnSpec fgn{hurst, length, variance, seed};
    CascadeSpec cascade;
    cascade.depth = floor_log2(length);
    cascade.multiplier_param = multiplier;
    cascade.total_mass = total_mass;
    cascade.equal_split = equal_split;
    cascade.seed = model == "cascade" ? seed : cascade_seed.value_or(seed + 1);

    Trace trace;
    if (model == "fgn") {
      trace = generate_fgn(fgn);
    } else if (model == "cascade") {
      trace = generate_cascade(cascade);
    } else {
      trace = generate_multifractal(fgn, cascade);
    }
    write_trace(trace, out_path);

    const std::vector<double> k = sample_cumulants(trace.view(), 2);
    out << "model: " << trace.meta.model << "\n";
    out << "length: " << trace.size() << "\n";
    out << "mean: " << format_real(k[0]) << "\n";
    out << "variance: " << format_real(k[1]) << "\n";
    out << "seed: " << seed << "\n";
    out << "wrote: " << out_path << "\n";
    return kExitOk;
  }
};

struct AggregateCmd {
  std::string in;
  std::size_t scale = 1;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--in", in, "Input trace CSV")->required();
    app->add_option("--scale", scale, "Block size n of X^(n); leaves at least 8 blocks")
        ->required();
    app->add_option("--out", out_path, "Output trace CSV of block sums")->required();
  }

  int run(std::ostream& out, std::ostream& err) const {
    check_output_parent(out_path, "--out");
    const Trace trace = load_input(in, err);
    if (scale < 1 || trace.size() / scale < kMinBlocks) {
      usage("--scale must leave at least 8 blocks of the " + std::to_string(trace.size()) +
            "-sample trace, got " + std::to_string(scale));
    }
    Trace result;
    result.samples = aggregate(trace, scale);
    result.meta = trace.meta;
    result.meta.params["aggregation_scale"] = std::to_string(scale);
    write_trace(result, out_path);
    out << "scale: " << scale << "\n";
    out << "blocks: " << result.size() << "\n";
    out << "dropped: " << trace.size() - result.size() * scale << "\n";
    out << "wrote: " << out_path << "\n";
    return kExitOk;
  }
};

struct CumulantsCmd {
  std::string in;
  int max_order = kDefaultCumulantOrder;
  std::vector<std::size_t> scales;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--in", in, "Input trace CSV")->required();
    app->add_option("--max-order", max_order, "Highest cumulant order, 1..6")
        ->capture_default_str();
    app->add_option("--scales", scales, "Block sizes (default dyadic 2^0 .. 2^(J-3))");
    app->add_option("--out", out_path, "Cumulant table CSV");
  }

  int run(std::ostream& out, std::ostream& err) const {
    check_order("--max-order", max_order);
    if (!out_path.empty()) check_output_parent(out_path, "--out");
    const Trace trace = load_input(in, err);
    for (std::size_t n : scales) {
      if (n < 1 || trace.size() / n < kMinBlocks) {
        usage("--scales entry " + std::to_string(n) + " leaves fewer than 8 blocks");
      }
    }
    const CumulantTable table = build_table(trace, max_order, scales);
    out << "order scale blocks cumulant usable\n";
    for (int m : table.orders()) {
      for (std::size_t s = 0; s < table.scales().size(); ++s) {
        const std::size_t n = table.scales()[s];
        out << m << " " << n << " " << table.block_counts()[s] << " "
            << format_real(table.value(m, n)) << " " << (table.usable(m, n) ? "yes" : "no")
            << "\n";
      }
    }
    if (!out_path.empty()) {
      write_curve(table, out_path);
      out << "wrote: " << out_path << "\n";
    }
    return kExitOk;
  }
};

struct HurstCmd {
  std::string in;
  std::string method = "cumulant";
  int order = 2;
  int max_order = kDefaultCumulantOrder;
  std::vector<int> octaves;
  bool weighted = false;
  WaveletFlags wavelet;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--in", in, "Input trace CSV")->required();
    app->add_option("--method", method, "cumulant, variance or wavelet")
        ->check(CLI::IsMember({"cumulant", "variance", "wavelet"}))
        ->capture_default_str();
    app->add_option("--order", order, "Cumulant order whose H(m) is reported")
        ->capture_default_str();
    app->add_option("--max-order", max_order, "Highest order in the H(m) table")
        ->capture_default_str();
    add_octaves(app, octaves);
    app->add_flag("--weighted", weighted, "Weight each scale by its block count");
    wavelet.add(app);
    app->add_option("--out", out_path,
                    "CSV: H(m) table (cumulant), logscale diagram (wavelet) or summary (variance)");
  }

  int run(std::ostream& out, std::ostream& err) const {
    if (method != "wavelet" && wavelet.given()) {
      usage("--wavelet/--levels/--j1/--j2 only apply to --method wavelet");
    }
    check_order("--order", order);
    check_order("--max-order", max_order);
    const auto range = octave_range(octaves);
    if (method == "wavelet" && range) usage("--octaves does not apply to --method wavelet; use --j1/--j2");
    if (!out_path.empty()) check_output_parent(out_path, "--out");
    if (method == "wavelet") wavelet.parsed_family();
    const Trace trace = load_input(in, err);

    if (method == "wavelet") {
      const WaveletSpec spec{wavelet.parsed_family(), wavelet.resolve_levels(trace.size())};
      const LogscaleDiagram diagram = logscale_diagram(trace, spec);
      const auto [j1, j2] = wavelet.resolve_range(diagram);
      const WaveletHurstFit fit = wavelet_hurst(diagram, j1, j2);
      out << "method: wavelet (" << to_string(spec.family) << ", " << spec.levels << " levels)\n";
      out << "octaves: " << j1 << ".." << j2 << "\n";
      out << "alpha: " << fixed(fit.alpha) << "\n";
      out << "H: " << fixed(fit.hurst) << "\n";
      out << "r2: " << fixed(fit.r_squared) << "\n";
      if (!out_path.empty()) write_curve(diagram, out_path);
    } else {
      const CumulantTable table = build_table(trace, std::max(order, max_order));
      const OctaveWindow window = range.value_or(full_window(table));
      if (method == "variance") {
        const VarianceTimeFit fit =
            aggregated_variance_hurst(build_pyramid(trace, dyadic_scales(trace.size())), window);
        out << "method: variance\n";
        out << "octaves: " << window.lo << ".." << window.hi << "\n";
        out << "slope: " << fixed(fit.slope) << "\n";
        out << "H: " << fixed(fit.hurst) << "\n";
        out << "r2: " << fixed(fit.r_squared) << "\n";
        if (!out_path.empty()) {
          write_text_file(out_path, "method,hurst,r_squared\nvariance," + format_real(fit.hurst) +
                                        "," + format_real(fit.r_squared) + "\n");
        }
      } else {
        const FitOptions opts{weighted};
        const ScalingFit fit = fit_loglog(table, order, window, opts);
        out << "method: cumulant\n";
        out << "octaves: " << window.lo << ".." << window.hi << "\n";
        out << "H(" << order << "): " << fixed(fit.hurst()) << "\n";
        out << "r2: " << fixed(fit.r_squared) << "\n";
        out << "scales used: " << fit.points_used << "\n";
        const HurstCurve curve = hurst_spectrum(table, window, opts);
        out << "order H r2\n";
        for (const auto& e : curve.entries) {
          out << e.order << " " << fixed(e.hurst) << " " << fixed(e.r_squared) << "\n";
        }
        for (const auto& [m, reason] : curve.omitted) out << m << " omitted: " << reason << "\n";
        for (const auto& w : curve.warnings) err << "warning: " << w << "\n";
        if (!out_path.empty()) write_curve(curve, out_path);
      }
    }
    if (!out_path.empty()) out << "wrote: " << out_path << "\n";
    return kExitOk;
  }
};

struct LocalityCmd {
  std::string in;
  std::string method = "cumulant";
  int order = 2;
  int window = kDefaultWindowWidth;
  std::vector<int> octaves;
  WaveletFlags wavelet;
  KneeFlags knee;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--in", in, "Input trace CSV")->required();
    app->add_option("--method", method, "cumulant or wavelet")
        ->check(CLI::IsMember({"cumulant", "wavelet"}))
        ->capture_default_str();
    app->add_option("--order", order, "Cumulant order of the sliding fits")->capture_default_str();
    app->add_option("--window", window,
                    "Octaves per sliding fit, >= 3; narrower windows localize the knee better but "
                    "are noisier")
        ->capture_default_str();
    add_octaves(app, octaves);
    wavelet.add(app);
    knee.add(app);
    app->add_option("--out", out_path, "Locality curve CSV (octave,hurst)");
  }

  int run(std::ostream& out, std::ostream& err) const {
    if (method != "wavelet" && wavelet.given()) {
      usage("--wavelet/--levels/--j1/--j2 only apply to --method wavelet");
    }
    if (method == "wavelet" && (wavelet.options[2]->count() || wavelet.options[3]->count())) {
      usage("--j1/--j2 do not apply to locality curves; use --octaves");
    }
    check_window(window);
    check_order("--order", order);
    const KneeCriteria criteria = knee.validate();
    const auto range = octave_range(octaves);
    if (!out_path.empty()) check_output_parent(out_path, "--out");
    if (method == "wavelet") wavelet.parsed_family();
    const Trace trace = load_input(in, err);

    LocalityCurve curve;
    if (method == "wavelet") {
      const WaveletSpec spec{wavelet.parsed_family(), wavelet.resolve_levels(trace.size())};
      curve = wavelet_locality_curve(logscale_diagram(trace, spec), window, range);
      out << "method: wavelet (" << to_string(spec.family) << ", width " << window << ")\n";
    } else {
      curve = locality_curve(build_table(trace, order), order, window, range);
      out << "method: cumulant (order " << order << ", width " << window << ")\n";
      for (const auto& note : curve.notes) err << "note: " << note << "\n";
    }
    if (!out_path.empty()) write_curve(curve, out_path);
    print_knee(out, curve, criteria);
    if (!out_path.empty()) out << "wrote: " << out_path << "\n";
    return kExitOk;
  }
};

struct WaveletCmd {
  std::string in;
  WaveletFlags wavelet;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--in", in, "Input trace CSV")->required();
    wavelet.add(app);
    app->add_option("--out", out_path, "Logscale diagram CSV (octave,log2_energy,count)");
  }

  int run(std::ostream& out, std::ostream& err) const {
    wavelet.parsed_family();
    if (!out_path.empty()) check_output_parent(out_path, "--out");
    const Trace trace = load_input(in, err);
    const WaveletSpec spec{wavelet.parsed_family(), wavelet.resolve_levels(trace.size())};
    const LogscaleDiagram diagram = logscale_diagram(trace, spec);
    const auto [j1, j2] = wavelet.resolve_range(diagram);
    out << "octave log2_energy count\n";
    for (std::size_t i = 0; i < diagram.octaves.size(); ++i) {
      out << diagram.octaves[i] << " " << fixed(std::log2(diagram.energy[i])) << " "
          << diagram.counts[i] << "\n";
    }
    if (!out_path.empty()) write_curve(diagram, out_path);
    const WaveletHurstFit fit = wavelet_hurst(diagram, j1, j2);
    out << "octaves: " << j1 << ".." << j2 << "\n";
    out << "alpha: " << fixed(fit.alpha) << "\n";
    out << "H: " << fixed(fit.hurst) << "\n";
    out << "r2: " << fixed(fit.r_squared) << "\n";
    if (!out_path.empty()) out << "wrote: " << out_path << "\n";
    return kExitOk;
  }
};

struct ReportCmd {
  std::string in;
  std::string out_dir;
  int max_order = kDefaultCumulantOrder;
  int order = 2;
  int window = kDefaultWindowWidth;
  WaveletFlags wavelet;
  KneeFlags knee;

  void add(CLI::App* app) {
    app->add_option("--in", in, "Input trace CSV")->required();
    app->add_option("--out-dir", out_dir, "Directory for the CSV bundle (created if missing)")
        ->required();
    app->add_option("--max-order", max_order, "Highest cumulant order")->capture_default_str();
    app->add_option("--order", order, "Order of the cumulant locality curve")
        ->capture_default_str();
    app->add_option("--window", window, "Octaves per sliding fit, >= 3")->capture_default_str();
    wavelet.add(app);
    knee.add(app);
  }

  static nlohmann::json knee_json(const LocalityCurve& curve, const KneeCriteria& criteria,
                                  std::string& csv_row) {
    nlohmann::json j;
    j["points"] = curve.points.size();
    j["spread"] = curve.spread();
    if (curve.points.size() < kMinKneePoints) {
      j["detected"] = false;
      csv_row += "false,,,,,,,,false\n";
      return j;
    }
    const KneePoint k = detect_knee(curve);
    const bool sig = knee_is_significant(k, curve, criteria);
    j["detected"] = true;
    j["octave"] = k.octave;
    j["left_slope"] = k.left_slope;
    j["right_slope"] = k.right_slope;
    j["sse_reduction"] = k.sse_reduction;
    j["relative_reduction"] = k.relative_reduction();
    j["significant"] = sig;
    csv_row += "true," + format_real(k.octave) + "," + format_real(k.left_slope) + "," +
               format_real(k.right_slope) + "," + format_real(k.sse_single) + "," +
               format_real(k.sse_two) + "," + format_real(k.sse_reduction) + "," +
               format_real(k.relative_reduction()) + "," + (sig ? "true" : "false") + "\n";
    return j;
  }

  int run(std::ostream& out, std::ostream& err) const {
    check_order("--max-order", max_order);
    check_order("--order", order);
    check_window(window);
    const KneeCriteria criteria = knee.validate();
    wavelet.parsed_family();
    if (wavelet.options[2]->count() || wavelet.options[3]->count()) {
      usage("--j1/--j2 are chosen per analysis in a report; set --levels only");
    }
    const Trace trace = load_input(in, err);
    const WaveletSpec spec{wavelet.parsed_family(), wavelet.resolve_levels(trace.size())};
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) usage("--out-dir: cannot create " + out_dir);
    const fs::path dir(out_dir);

    const CumulantTable table = build_table(trace, std::max(order, max_order));
    const HurstCurve spectrum = hurst_spectrum(table, full_window(table));
    const LocalityCurve cum_curve = locality_curve(table, order, window);
    const LogscaleDiagram diagram = logscale_diagram(trace, spec);
    const auto [j1, j2] = default_fit_range(diagram);
    const WaveletHurstFit wfit = wavelet_hurst(diagram, j1, j2);
    const LocalityCurve wav_curve = wavelet_locality_curve(diagram, window);

    const std::vector<std::string> files = {"cumulant_table.csv", "hurst_spectrum.csv",
                                            "locality_cumulant.csv", "locality_wavelet.csv",
                                            "logscale.csv", "knees.csv"};
    write_curve(table, dir / files[0]);
    write_curve(spectrum, dir / files[1]);
    write_curve(cum_curve, dir / files[2]);
    write_curve(wav_curve, dir / files[3]);
    write_curve(diagram, dir / files[4]);
    std::string knees =
        "method,detected,octave,left_slope,right_slope,sse_single,sse_two,sse_reduction,"
        "relative_reduction,significant\n";
    knees += "cumulant,";
    const nlohmann::json cum_knee = knee_json(cum_curve, criteria, knees);
    knees += "wavelet,";
    const nlohmann::json wav_knee = knee_json(wav_curve, criteria, knees);
    write_text_file(dir / files[5], knees);

    nlohmann::json manifest;
    manifest["format"] = "scalefit-report/1";
    manifest["created"] = creation_timestamp();
    manifest["input"] = {{"path", in},
                         {"length", trace.size()},
                         {"model", trace.meta.model},
                         {"params", trace.meta.params},
                         {"seed", trace.meta.seed ? nlohmann::json(*trace.meta.seed)
                                                  : nlohmann::json(nullptr)}};
    manifest["settings"] = {{"max_order", std::max(order, max_order)},
                            {"order", order},
                            {"window", window},
                            {"wavelet", std::string(to_string(spec.family))},
                            {"levels", spec.levels},
                            {"min_reduction", criteria.min_relative_reduction},
                            {"flat_tolerance", criteria.flat_tolerance}};
    nlohmann::json hm = nlohmann::json::array();
    for (const auto& e : spectrum.entries) {
      hm.push_back({{"order", e.order}, {"hurst", e.hurst}, {"r_squared", e.r_squared}});
    }
    nlohmann::json omitted = nlohmann::json::array();
    for (const auto& [m, reason] : spectrum.omitted) {
      omitted.push_back({{"order", m}, {"reason", reason}});
    }
    manifest["summary"] = {{"hurst_spectrum", hm},
                           {"omitted_orders", omitted},
                           {"wavelet_hurst", {{"hurst", wfit.hurst}, {"alpha", wfit.alpha},
                                              {"j1", j1}, {"j2", j2}}},
                           {"knee_cumulant", cum_knee},
                           {"knee_wavelet", wav_knee}};
    manifest["warnings"] = spectrum.warnings;
    manifest["files"] = files;
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << "wrote " << files.size() << " CSVs and manifest.json to " << out_dir << "\n";
    if (const auto* h2 = spectrum.find(order)) out << "H(" << order << "): " << fixed(h2->hurst) << "\n";
    out << "wavelet H: " << fixed(wfit.hurst) << "\n";
    out << "cumulant knee: " << (cum_knee.value("significant", false) ? "significant" : "none") << "\n";
    out << "wavelet knee: " << (wav_knee.value("significant", false) ? "significant" : "none") << "\n";
    return kExitOk;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"scalefit: self-similar traffic synthesis and scale-local Hurst estimation",
               "scalefit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "scalefit 1.0");

  GenerateCmd generate;
  AggregateCmd aggregate_cmd;
  CumulantsCmd cumulants;
  HurstCmd hurst;
  LocalityCmd locality;
  WaveletCmd wavelet;
  ReportCmd report;
  generate.add(app.add_subcommand("generate", "Synthesize an fGn, cascade or multifractal trace"));
  aggregate_cmd.add(app.add_subcommand("aggregate", "Block-sum a trace at one scale"));
  cumulants.add(app.add_subcommand("cumulants", "Cumulant table across aggregation scales"));
  hurst.add(app.add_subcommand("hurst", "Estimate H by cumulant, variance or wavelet scaling"));
  locality.add(app.add_subcommand("locality", "Sliding-window H curve and knee report"));
  wavelet.add(app.add_subcommand("wavelet", "Logscale diagram and wavelet H"));
  report.add(app.add_subcommand("report", "Full analysis bundle: 6 CSVs plus manifest.json"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "generate") return generate.run(out, err);
    if (name == "aggregate") return aggregate_cmd.run(out, err);
    if (name == "cumulants") return cumulants.run(out, err);
    if (name == "hurst") return hurst.run(out, err);
    if (name == "locality") return locality.run(out, err);
    if (name == "wavelet") return wavelet.run(out, err);
    return report.run(out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace scalefit::cli
