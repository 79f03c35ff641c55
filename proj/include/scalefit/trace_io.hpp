#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "scalefit/cumulant.hpp"
#include "scalefit/scaling.hpp"
#include "scalefit/trace.hpp"
#include "scalefit/wavelet.hpp"

namespace scalefit {

inline constexpr std::string_view kTraceFormatVersion = "scalefit-trace/1";

/// Shortest decimal form with at most 17 significant digits; round-trips any
/// finite double. Infinities print as "inf"/"-inf".
std::string format_real(double value);

/// Sidecar metadata path for a trace CSV: "<path>.meta.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// Writes "index,value" CSV (1-based index) and the JSON sidecar.
void write_trace(const Trace& trace, const std::filesystem::path& path);

struct LoadedTrace {
  Trace trace;
  bool sidecar_missing = false;  // samples loaded, metadata left empty
};

LoadedTrace read_trace(const std::filesystem::path& path);

/// "octave,hurst"
void write_curve(const LocalityCurve& curve, const std::filesystem::path& path);
/// "octave,log2_energy,count"
void write_curve(const LogscaleDiagram& diagram, const std::filesystem::path& path);
/// "order,scale,log2_abs_cumulant,usable"
void write_curve(const CumulantTable& table, const std::filesystem::path& path);
/// "order,hurst,r_squared"
void write_curve(const HurstCurve& curve, const std::filesystem::path& path);

/// Writes `contents` to `path`, throwing Io with the path on failure.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace scalefit
