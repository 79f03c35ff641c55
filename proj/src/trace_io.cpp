#include "scalefit/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "scalefit/error.hpp"

namespace scalefit {

namespace {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(ErrorKind::Io, "error while reading " + path.string());
  return buffer.str();
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

json meta_to_json(const Trace& trace) {
  json j;
  j["format"] = kTraceFormatVersion;
  j["model"] = trace.meta.model;
  j["length"] = trace.samples.size();
  j["params"] = trace.meta.params;
  j["seed"] = trace.meta.seed ? json(*trace.meta.seed) : json(nullptr);
  j["created"] = trace.meta.created;
  return j;
}

TraceMeta meta_from_json(const std::string& text, const std::filesystem::path& path,
                         std::size_t rows) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  try {
    const std::string format = j.at("format").get<std::string>();
    if (format != kTraceFormatVersion) {
      fail(ErrorKind::Version, path.string() + ": unknown format version \"" + format +
                                   "\", expected \"" + std::string(kTraceFormatVersion) + "\"");
    }
    const auto length = j.at("length").get<std::size_t>();
    if (length != rows) {
      fail(ErrorKind::LengthMismatch, path.string() + " declares " + std::to_string(length) +
                                          " samples but the CSV has " + std::to_string(rows));
    }
    TraceMeta meta;
    meta.model = j.at("model").get<std::string>();
    meta.params = j.at("params").get<std::map<std::string, std::string>>();
    if (!j.at("seed").is_null()) meta.seed = j.at("seed").get<std::uint64_t>();
    meta.created = j.at("created").get<std::string>();
    return meta;
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, path.string() + ": malformed metadata: " + e.what());
  }
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<double> parse_samples(const std::string& text, const std::filesystem::path& path) {
  std::vector<double> samples;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t next = text.find('\n', pos);
    if (next == std::string::npos) next = text.size();
    const std::string_view line = trim_cr(std::string_view(text).substr(pos, next - pos));
    pos = next + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!header_seen) {
      if (line != "index,value") {
        fail(ErrorKind::Parse, where + ": expected header \"index,value\"");
      }
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) fail(ErrorKind::Parse, where + ": expected two columns");
    std::size_t index = 0;
    if (!parse_number(line.substr(0, comma), index)) {
      fail(ErrorKind::Parse, where + ": bad index \"" + std::string(line.substr(0, comma)) + "\"");
    }
    if (index != samples.size() + 1) {
      fail(ErrorKind::Parse, where + ": index " + std::to_string(index) + " out of sequence");
    }
    double value = 0.0;
    const std::string_view cell = line.substr(comma + 1);
    if (!parse_number(cell, value) || !std::isfinite(value)) {
      fail(ErrorKind::Parse, where + ": non-numeric value \"" + std::string(cell) + "\"");
    }
    samples.push_back(value);
  }
  if (!header_seen) fail(ErrorKind::Parse, path.string() + ": empty file");
  return samples;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general);
  if (ec != std::errc()) fail(ErrorKind::Io, "cannot format number");
  return std::string(buf, ptr);
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path out = csv;
  out += ".meta.json";
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) fail(ErrorKind::Io, "error while writing " + path.string());
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  std::string csv = "index,value\n";
  csv.reserve(csv.size() + trace.samples.size() * 26);
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    csv += std::to_string(k + 1);
    csv += ',';
    csv += format_real(trace.samples[k]);
    csv += '\n';
  }
  write_text_file(path, csv);
  write_text_file(sidecar_path(path), meta_to_json(trace).dump(2) + "\n");
}

LoadedTrace read_trace(const std::filesystem::path& path) {
  LoadedTrace loaded;
  loaded.trace.samples = parse_samples(read_text_file(path), path);
  const std::filesystem::path meta = sidecar_path(path);
  if (!std::filesystem::exists(meta)) {
    loaded.sidecar_missing = true;
    return loaded;
  }
  loaded.trace.meta = meta_from_json(read_text_file(meta), meta, loaded.trace.samples.size());
  return loaded;
}

void write_curve(const LocalityCurve& curve, const std::filesystem::path& path) {
  std::string out = "octave,hurst\n";
  for (const auto& p : curve.points) out += format_real(p.octave) + "," + format_real(p.hurst) + "\n";
  write_text_file(path, out);
}

void write_curve(const LogscaleDiagram& diagram, const std::filesystem::path& path) {
  std::string out = "octave,log2_energy,count\n";
  for (std::size_t i = 0; i < diagram.octaves.size(); ++i) {
    out += std::to_string(diagram.octaves[i]) + "," + format_real(std::log2(diagram.energy[i])) +
           "," + std::to_string(diagram.counts[i]) + "\n";
  }
  write_text_file(path, out);
}

void write_curve(const CumulantTable& table, const std::filesystem::path& path) {
  std::string out = "order,scale,log2_abs_cumulant,usable\n";
  for (int m : table.orders()) {
    for (std::size_t n : table.scales()) {
      out += std::to_string(m) + "," + std::to_string(n) + "," +
             format_real(std::log2(std::abs(table.value(m, n)))) + "," +
             bool_text(table.usable(m, n)) + "\n";
    }
  }
  write_text_file(path, out);
}

void write_curve(const HurstCurve& curve, const std::filesystem::path& path) {
  std::string out = "order,hurst,r_squared\n";
  for (const auto& e : curve.entries) {
    out += std::to_string(e.order) + "," + format_real(e.hurst) + "," + format_real(e.r_squared) + "\n";
  }
  write_text_file(path, out);
}

}  // namespace scalefit
