#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "haarq/haar.hpp"
#include "haarq/quantizer.hpp"
#include "haarq/spectral.hpp"

namespace haarq {

/// Unreadable or malformed input, or a failed write.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InputFormat { csv, raw_f64_le };
enum class PadPolicy { zero_pad_last, reject_partial };

struct InputSpec {
  InputFormat format = InputFormat::csv;
  std::string path = "-";  // "-" reads standard input
  int block_exponent = 10;
  double scale_delta = 1.0;
  PadPolicy pad_policy = PadPolicy::zero_pad_last;

  void validate() const;
};

struct SignalBlocks {
  std::vector<Signal> blocks;
  std::size_t original_length = 0;
  std::size_t pad_count = 0;  // zeros appended to the last block
};

/// CSV: one real per line, blank lines and '#' comments ignored.
/// Raw: packed little-endian IEEE doubles, no header.
std::vector<double> read_samples(std::istream& in, InputFormat format, std::string_view source = "<stream>");
std::vector<double> read_samples(const std::string& path, InputFormat format);

/// Splits samples into 2^N blocks after dividing by the step.
SignalBlocks segment_samples(std::span<const double> samples, const InputSpec& spec);
SignalBlocks read_signal(const InputSpec& spec);

/// Samples that must all be integers, e.g. a previously written quantizer output.
std::vector<std::int64_t> read_integers(const std::string& path, InputFormat format);

void write_samples(std::ostream& out, std::span<const std::int64_t> values, InputFormat format);
void write_samples(const std::string& path, std::span<const std::int64_t> values, InputFormat format);

struct RunConfigEcho {
  std::string quantizer = "haar_optimal";  // or "simple"
  std::string tie_break = "down";
  double dither = 0.0;
  std::uint64_t seed = 0;
  double delta = 1.0;
  int block_exponent = 10;
};

struct BlockSummary {
  std::size_t index = 0;
  std::size_t pad_count = 0;
  HaarErrorReport haar;
  /// Sup error over the samples that came from the input.
  double sup_error_unpadded = 0.0;
  std::int64_t quantized_total = 0;
  std::vector<std::int64_t> g;

  bool spectrum_checked = false;
  bool spectrum_pass = true;
  double spectrum_low_band_mean = 0.0;  // |xi| <= 32, empirical only
  double spectrum_rms = 0.0;
  std::optional<std::string> spectrum_csv;

  bool pass() const { return haar.all_ok() && spectrum_pass; }
};

struct RunReport {
  RunConfigEcho config;
  std::size_t original_length = 0;
  std::size_t pad_count = 0;
  std::vector<BlockSummary> blocks;

  bool pass() const;
};

inline constexpr std::int64_t kLowBandLimit = 32;

/// Verification summary of one block. The spectrum table, if requested, is
/// returned through `table`.
BlockSummary summarize_block(std::size_t index, const Signal& f, const QuantizedSignal& g, std::size_t pad_count,
                             bool check_spectrum, NoiseBoundTable* table = nullptr);

nlohmann::json to_json(const RunReport& report);

/// Key-sorted JSON, floating values with 17 significant digits.
std::string render_json(const nlohmann::json& value);

void write_report(const RunReport& report, std::ostream& out);
void write_report(const RunReport& report, const std::string& path);

/// Header xi,measured,bound_exact,bound_linear,baseline_bound; ascending xi.
void write_spectrum_csv(const NoiseBoundTable& table, std::ostream& out);
void write_spectrum_csv(const NoiseBoundTable& table, const std::string& path);

/// "%.17g" rendering shared by every text output.
std::string format_real(double value);

}  // namespace haarq
