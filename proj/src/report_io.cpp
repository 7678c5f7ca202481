#include "haarq/report_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace haarq {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> read_csv(std::istream& in, std::string_view source) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    double value = 0.0;
    const char* begin = view.data();
    const char* end = view.data() + view.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      throw IoError(std::string(source) + ":" + std::to_string(line_no) + ": not a finite number: '" +
                    std::string(view) + "'");
    }
    out.push_back(value);
  }
  if (in.bad()) throw IoError(std::string(source) + ": read error");
  return out;
}

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t swapped = 0;
    for (int i = 0; i < 8; ++i) swapped |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return swapped;
  }
  return bits;
}

std::vector<double> read_raw(std::istream& in, std::string_view source) {
  std::vector<double> out;
  std::array<char, 8> buf{};
  while (true) {
    in.read(buf.data(), buf.size());
    const auto got = in.gcount();
    if (got == 0) break;
    if (got != 8) throw IoError(std::string(source) + ": trailing partial sample in raw input");
    std::uint64_t bits = 0;
    std::memcpy(&bits, buf.data(), 8);
    const double value = std::bit_cast<double>(to_little_endian(bits));
    if (!std::isfinite(value)) {
      throw IoError(std::string(source) + ": sample " + std::to_string(out.size() + 1) + " is not finite");
    }
    out.push_back(value);
  }
  if (in.bad()) throw IoError(std::string(source) + ": read error");
  return out;
}

template <typename Fn>
void with_output(const std::string& path, bool binary, Fn&& fn) {
  if (path == "-") {
    fn(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

void render(const nlohmann::json& v, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (v.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {  // std::map storage: sorted keys
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(key).dump();
        out += ':';
        render(item, out);
      }
      out += '}';
      break;
    }
    case value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) out += ',';
        render(v[i], out);
      }
      out += ']';
      break;
    }
    case value_t::number_float:
      out += format_real(v.get<double>());
      break;
    default:
      out += v.dump();
  }
}

}  // namespace

void InputSpec::validate() const {
  if (!(scale_delta > 0.0) || !std::isfinite(scale_delta)) {
    throw std::invalid_argument("quantization step must be finite and positive");
  }
  TimeGrid{block_exponent};
}

std::vector<double> read_samples(std::istream& in, InputFormat format, std::string_view source) {
  return format == InputFormat::csv ? read_csv(in, source) : read_raw(in, source);
}

std::vector<double> read_samples(const std::string& path, InputFormat format) {
  if (path == "-") return read_samples(std::cin, format, "<stdin>");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_samples(in, format, path);
}

SignalBlocks segment_samples(std::span<const double> samples, const InputSpec& spec) {
  spec.validate();
  const std::size_t block = std::size_t{1} << spec.block_exponent;
  SignalBlocks out;
  out.original_length = samples.size();
  const std::size_t remainder = samples.size() % block;
  if (remainder != 0) {
    if (spec.pad_policy == PadPolicy::reject_partial) {
      throw IoError("input length " + std::to_string(samples.size()) + " is not a multiple of the block size " +
                    std::to_string(block));
    }
    out.pad_count = block - remainder;
  }
  const TimeGrid grid(spec.block_exponent);
  for (std::size_t start = 0; start < samples.size(); start += block) {
    // Padding goes in after scaling so it stays exactly zero.
    std::vector<double> values(block, 0.0);
    const std::size_t count = std::min(block, samples.size() - start);
    for (std::size_t i = 0; i < count; ++i) values[i] = samples[start + i] / spec.scale_delta;
    out.blocks.emplace_back(grid, std::move(values));
  }
  return out;
}

SignalBlocks read_signal(const InputSpec& spec) {
  spec.validate();
  const auto samples = read_samples(spec.path, spec.format);
  return segment_samples(samples, spec);
}

std::vector<std::int64_t> read_integers(const std::string& path, InputFormat format) {
  const auto samples = read_samples(path, format);
  std::vector<std::int64_t> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = samples[i];
    if (v != std::floor(v) || std::fabs(v) >= 9007199254740992.0) {
      throw IoError(path + ": sample " + std::to_string(i + 1) + " is not an integer level");
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

void write_samples(std::ostream& out, std::span<const std::int64_t> values, InputFormat format) {
  if (format == InputFormat::csv) {
    for (const auto v : values) out << v << '\n';
    return;
  }
  for (const auto v : values) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(static_cast<double>(v)));
    std::array<char, 8> buf{};
    std::memcpy(buf.data(), &bits, 8);
    out.write(buf.data(), buf.size());
  }
}

void write_samples(const std::string& path, std::span<const std::int64_t> values, InputFormat format) {
  with_output(path, format == InputFormat::raw_f64_le, [&](std::ostream& out) { write_samples(out, values, format); });
}

bool RunReport::pass() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const BlockSummary& b) { return b.pass(); });
}

BlockSummary summarize_block(std::size_t index, const Signal& f, const QuantizedSignal& g, std::size_t pad_count,
                             bool check_spectrum, NoiseBoundTable* table) {
  BlockSummary summary;
  summary.index = index;
  summary.pad_count = pad_count;
  summary.haar = verify_theorem1(f, g);
  const std::size_t valid = f.size() - std::min(pad_count, f.size());
  for (std::size_t i = 0; i < valid; ++i) {
    summary.sup_error_unpadded =
        std::max(summary.sup_error_unpadded, std::fabs(f[i] - static_cast<double>(g[i])));
  }
  summary.g.assign(g.values().begin(), g.values().end());
  for (const auto v : summary.g) summary.quantized_total += v;
  if (check_spectrum) {
    NoiseBoundTable t = spectrum_error(f, g);
    summary.spectrum_checked = true;
    summary.spectrum_pass = t.all_pass();
    summary.spectrum_low_band_mean = t.low_band_mean(kLowBandLimit);
    summary.spectrum_rms = t.rms();
    if (table != nullptr) *table = std::move(t);
  }
  return summary;
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json j;
  j["config"] = {
      {"block_exponent", report.config.block_exponent},
      {"delta", report.config.delta},
      {"dither", report.config.dither},
      {"quantizer", report.config.quantizer},
      {"seed", report.config.seed},
      {"tie_break", report.config.tie_break},
  };
  j["original_length"] = report.original_length;
  j["pad_count"] = report.pad_count;
  j["block_count"] = report.blocks.size();
  j["pass"] = report.pass();
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : report.blocks) {
    const auto& h = b.haar;
    nlohmann::json level_ok = nlohmann::json::array();
    for (const bool ok : h.level_ok) level_ok.push_back(ok);
    nlohmann::json block = {
        {"index", b.index},
        {"pad_count", b.pad_count},
        {"pass", b.pass()},
        {"g", b.g},
        {"quantized_total", b.quantized_total},
        {"haar_dc_input", h.hf_dc},
        {"haar_dc_quantized", h.hg_dc},
        {"dc_error", h.level_max_error.empty() ? 0.0 : h.level_max_error[0]},
        {"dc_bound", h.level_bound.empty() ? 0.0 : h.level_bound[0]},
        {"dc_ok", h.dc_ok},
        {"level_max_error", h.level_max_error},
        {"level_bound", h.level_bound},
        {"level_ok", level_ok},
        {"levels_ok", h.levels_ok()},
        {"sup_error", h.sup_error},
        {"sup_error_unpadded", b.sup_error_unpadded},
        {"sup_bound", h.sup_bound},
        {"sup_ok", h.sup_ok},
        {"spectrum_checked", b.spectrum_checked},
        {"spectrum_pass", b.spectrum_pass},
        {"spectrum_low_band_mean", b.spectrum_low_band_mean},
        {"spectrum_rms", b.spectrum_rms},
        {"spectrum_csv", b.spectrum_csv ? nlohmann::json(*b.spectrum_csv) : nlohmann::json(nullptr)},
    };
    j["blocks"].push_back(std::move(block));
  }
  return j;
}

std::string format_real(double value) {
  std::array<char, 32> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", value);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

std::string render_json(const nlohmann::json& value) {
  std::string out;
  render(value, out);
  return out;
}

void write_report(const RunReport& report, std::ostream& out) { out << render_json(to_json(report)) << '\n'; }

void write_report(const RunReport& report, const std::string& path) {
  with_output(path, false, [&](std::ostream& out) { write_report(report, out); });
}

void write_spectrum_csv(const NoiseBoundTable& table, std::ostream& out) {
  out << "xi,measured,bound_exact,bound_linear,baseline_bound\n";
  for (const auto& r : table.rows) {
    out << r.xi << ',' << format_real(r.measured) << ',' << format_real(r.bound_exact) << ','
        << format_real(r.bound_linear) << ',' << format_real(r.baseline_bound) << '\n';
  }
}

void write_spectrum_csv(const NoiseBoundTable& table, const std::string& path) {
  with_output(path, false, [&](std::ostream& out) { write_spectrum_csv(table, out); });
}

}  // namespace haarq
