// haarq: Haar-optimal quantization and bound verification for sampled signals.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "haarq/haar.hpp"
#include "haarq/quantizer.hpp"
#include "haarq/report_io.hpp"
#include "haarq/spectral.hpp"

namespace {

using namespace haarq;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string input = "-";
  std::string output = "-";
  std::string quantized;
  std::string format = "csv";
  int block_exp = 10;
  double delta = 1.0;
  double dither = 0.0;
  std::uint64_t seed = 0;
  std::string tie_break = "down";
  std::string pad = "zero";
  bool baseline = false;
  std::string report;

  // basis
  int k = 0;
  std::int64_t j = 1;
  bool fourier = false;
};

InputFormat parse_format(const std::string& s) { return s == "raw" ? InputFormat::raw_f64_le : InputFormat::csv; }

InputSpec input_spec(const Options& o) {
  InputSpec spec;
  spec.format = parse_format(o.format);
  spec.path = o.input;
  spec.block_exponent = o.block_exp;
  spec.scale_delta = o.delta;
  spec.pad_policy = o.pad == "reject" ? PadPolicy::reject_partial : PadPolicy::zero_pad_last;
  return spec;
}

QuantizerConfig quantizer_config(const Options& o) {
  QuantizerConfig config;
  config.tie_break = o.tie_break == "up" ? TieBreak::toward_positive : TieBreak::toward_negative;
  config.dither_amplitude = o.dither;
  config.dither_seed = o.seed;
  return config;
}

RunConfigEcho echo(const Options& o) {
  RunConfigEcho e;
  e.quantizer = o.baseline ? "simple" : "haar_optimal";
  e.tie_break = o.tie_break;
  e.dither = o.dither;
  e.seed = o.seed;
  e.delta = o.delta;
  e.block_exponent = o.block_exp;
  return e;
}

void add_signal_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--input,-i", o.input, "Input samples, '-' for standard input")->capture_default_str();
  cmd->add_option("--format", o.format, "Sample format")
      ->check(CLI::IsMember({"csv", "raw"}))
      ->capture_default_str();
  cmd->add_option("--block-exp,-N", o.block_exp, "Block size exponent N (blocks of 2^N samples)")
      ->check(CLI::Range(0, kMaxExponent))
      ->capture_default_str();
  cmd->add_option("--delta", o.delta, "Quantization step; input is divided by it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--pad", o.pad, "Partial final block policy")
      ->check(CLI::IsMember({"zero", "reject"}))
      ->capture_default_str();
  cmd->add_option("--dither", o.dither, "Uniform dither width added before quantizing")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Dither seed")->capture_default_str();
  cmd->add_option("--tie-break", o.tie_break, "Resolution of exact ties")
      ->check(CLI::IsMember({"down", "up"}))
      ->capture_default_str();
  cmd->add_flag("--baseline", o.baseline, "Use per-sample rounding instead of the Haar-optimal quantizer");
  cmd->add_option("--report", o.report, "Write a JSON run report to this path");
}

std::vector<QuantizedSignal> quantize_blocks(const SignalBlocks& blocks, const Options& o) {
  const QuantizerConfig config = quantizer_config(o);
  std::vector<QuantizedSignal> out;
  out.reserve(blocks.blocks.size());
  for (const auto& block : blocks.blocks) {
    if (o.baseline) {
      out.push_back(quantize_simple(block));
    } else {
      out.push_back(quantize_haar_optimal(block, config).signal);
    }
  }
  return out;
}

// Quantized blocks either read from --quantized or produced here.
std::vector<QuantizedSignal> obtain_quantized(const SignalBlocks& blocks, const Options& o) {
  if (o.quantized.empty()) return quantize_blocks(blocks, o);
  const auto levels = read_integers(o.quantized, parse_format(o.format));
  const std::size_t block = std::size_t{1} << o.block_exp;
  if (levels.size() != blocks.blocks.size() * block) {
    throw IoError("quantized input has " + std::to_string(levels.size()) + " samples, expected " +
                  std::to_string(blocks.blocks.size() * block));
  }
  std::vector<QuantizedSignal> out;
  const TimeGrid grid(o.block_exp);
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
    out.emplace_back(grid, std::vector<std::int64_t>(levels.begin() + static_cast<std::ptrdiff_t>(b * block),
                                                     levels.begin() + static_cast<std::ptrdiff_t>((b + 1) * block)));
  }
  return out;
}

std::size_t pad_for_block(const SignalBlocks& blocks, std::size_t b) {
  return b + 1 == blocks.blocks.size() ? blocks.pad_count : 0;
}

// out.csv -> out.3.csv when several blocks share one output path.
std::string block_path(const std::string& path, std::size_t b, std::size_t count) {
  if (count <= 1 || path == "-") return path;
  std::filesystem::path p(path);
  const std::string stem = p.stem().string() + "." + std::to_string(b);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

void warn_dither(const Options& o) {
  if (const auto w = quantizer_config(o).warning_for(o.block_exp)) std::cerr << "haarq: warning: " << *w << '\n';
}

RunReport make_report(const SignalBlocks& blocks, const Options& o) {
  RunReport report;
  report.config = echo(o);
  report.original_length = blocks.original_length;
  report.pad_count = blocks.pad_count;
  return report;
}

int cmd_quantize(const Options& o) {
  const SignalBlocks blocks = read_signal(input_spec(o));
  const auto quantized = quantize_blocks(blocks, o);
  std::vector<std::int64_t> levels;
  for (const auto& q : quantized) levels.insert(levels.end(), q.values().begin(), q.values().end());
  write_samples(o.output, levels, parse_format(o.format));
  if (!o.report.empty()) {
    RunReport report = make_report(blocks, o);
    for (std::size_t b = 0; b < quantized.size(); ++b) {
      report.blocks.push_back(summarize_block(b, blocks.blocks[b], quantized[b], pad_for_block(blocks, b), true));
    }
    write_report(report, o.report);
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const SignalBlocks blocks = read_signal(input_spec(o));
  const auto quantized = obtain_quantized(blocks, o);
  RunReport report = make_report(blocks, o);
  for (std::size_t b = 0; b < quantized.size(); ++b) {
    const BlockSummary s = summarize_block(b, blocks.blocks[b], quantized[b], pad_for_block(blocks, b), true);
    std::cout << "block " << b << ": " << (s.pass() ? "pass" : "FAIL") << " dc=" << (s.haar.dc_ok ? "ok" : "violated")
              << " levels=" << (s.haar.levels_ok() ? "ok" : "violated") << " sup=" << (s.haar.sup_ok ? "ok" : "violated")
              << " spectrum=" << (s.spectrum_pass ? "ok" : "violated") << '\n';
    report.blocks.push_back(s);
  }
  std::cout << (report.pass() ? "PASS" : "FAIL") << " (" << report.blocks.size() << " blocks)\n";
  if (!o.report.empty()) write_report(report, o.report);
  return report.pass() ? kExitOk : kExitViolation;
}

int cmd_spectrum(const Options& o) {
  const SignalBlocks blocks = read_signal(input_spec(o));
  const auto quantized = obtain_quantized(blocks, o);
  RunReport report = make_report(blocks, o);
  for (std::size_t b = 0; b < quantized.size(); ++b) {
    NoiseBoundTable table;
    BlockSummary s = summarize_block(b, blocks.blocks[b], quantized[b], pad_for_block(blocks, b), true, &table);
    const std::string path = block_path(o.output, b, quantized.size());
    if (path == "-" && quantized.size() > 1) std::cout << "# block " << b << '\n';
    write_spectrum_csv(table, path);
    if (path != "-") s.spectrum_csv = path;
    report.blocks.push_back(std::move(s));
  }
  if (!o.report.empty()) write_report(report, o.report);
  return kExitOk;
}

int cmd_basis(const Options& o) {
  const TimeGrid grid(o.block_exp);
  const HaarIndex index{o.k, o.j};
  if (!index.valid_for(o.block_exp)) {
    throw std::invalid_argument("Haar index (" + std::to_string(o.k) + "," + std::to_string(o.j) +
                                ") is invalid for N = " + std::to_string(o.block_exp));
  }
  auto write = [&](std::ostream& out) {
    if (o.fourier) {
      out << "xi,re,im,abs\n";
      const FrequencyGrid freqs(o.block_exp);
      for (const auto xi : freqs.frequencies()) {
        const auto c = haar_fourier_coefficient(xi, index, o.block_exp);
        out << xi << ',' << format_real(c.real()) << ',' << format_real(c.imag()) << ',' << format_real(std::abs(c))
            << '\n';
      }
    } else {
      out << "n,t,value\n";
      const Signal h = haar_basis(index, grid);
      for (std::size_t n = 1; n <= grid.size(); ++n) {
        out << n << ',' << format_real(grid.sample(n)) << ',' << format_real(h[n - 1]) << '\n';
      }
    }
  };
  if (o.output == "-") {
    write(std::cout);
  } else {
    std::ofstream out(o.output);
    if (!out) throw IoError("cannot open '" + o.output + "' for writing");
    write(out);
    if (!out) throw IoError("failed writing '" + o.output + "'");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Haar-optimal quantization of sampled signals with verified error bounds"};
  app.require_subcommand(1);

  auto* quantize = app.add_subcommand("quantize", "Quantize input blocks and write integer levels");
  add_signal_options(quantize, o);
  quantize->add_option("--output,-o", o.output, "Output path for integer levels")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Check every guaranteed bound; exit 1 on any violation");
  add_signal_options(verify, o);
  verify->add_option("--quantized,-q", o.quantized, "Previously quantized levels (default: quantize now)");

  auto* spectrum = app.add_subcommand("spectrum", "Write Fourier error tables with their bounds");
  add_signal_options(spectrum, o);
  spectrum->add_option("--quantized,-q", o.quantized, "Previously quantized levels (default: quantize now)");
  spectrum->add_option("--output,-o", o.output, "Output CSV path")->capture_default_str();

  auto* basis = app.add_subcommand("basis", "Dump a sampled Haar function or its Fourier coefficients");
  basis->add_option("--block-exp,-N", o.block_exp, "Grid exponent N")
      ->check(CLI::Range(0, kMaxExponent))
      ->capture_default_str();
  basis->add_option("-k", o.k, "Haar level")->capture_default_str();
  basis->add_option("-j", o.j, "Haar position")->capture_default_str();
  basis->add_flag("--fourier", o.fourier, "Closed-form Fourier coefficients instead of samples");
  basis->add_option("--output,-o", o.output, "Output CSV path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*basis) return cmd_basis(o);
    input_spec(o).validate();
    quantizer_config(o).validate();
    warn_dither(o);
    if (*quantize) return cmd_quantize(o);
    if (*verify) return cmd_verify(o);
    if (*spectrum) return cmd_spectrum(o);
  } catch (const IoError& e) {
    std::cerr << "haarq: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::overflow_error& e) {
    std::cerr << "haarq: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "haarq: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
