#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "haarq/quantizer.hpp"
#include "haarq/report_io.hpp"
#include "oracles.hpp"

using namespace haarq;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "haarq_io_XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 0.1 * static_cast<double>(i) - 0.3;
  return v;
}

TEST(Segment, ZeroPadLast) {
  InputSpec spec;
  spec.block_exponent = 3;
  const auto input = ramp(10);
  const SignalBlocks b = segment_samples(input, spec);
  ASSERT_EQ(b.blocks.size(), 2u);
  EXPECT_EQ(b.pad_count, 6u);
  EXPECT_EQ(b.original_length, 10u);
  for (std::size_t i = 2; i < 8; ++i) EXPECT_EQ(b.blocks[1][i], 0.0);
}

TEST(Segment, ExactMultiple) {
  InputSpec spec;
  spec.block_exponent = 3;
  const SignalBlocks b = segment_samples(ramp(8), spec);
  EXPECT_EQ(b.blocks.size(), 1u);
  EXPECT_EQ(b.pad_count, 0u);
}

TEST(Segment, RejectPartial) {
  InputSpec spec;
  spec.block_exponent = 3;
  spec.pad_policy = PadPolicy::reject_partial;
  EXPECT_THROW(segment_samples(ramp(10), spec), IoError);
  EXPECT_NO_THROW(segment_samples(ramp(16), spec));
}

TEST(Segment, EmptyInput) {
  InputSpec spec;
  spec.block_exponent = 2;
  const auto b = segment_samples(std::vector<double>{}, spec);
  EXPECT_TRUE(b.blocks.empty());
  EXPECT_EQ(b.pad_count, 0u);
}

TEST(Segment, InvalidSpec) {
  InputSpec spec;
  spec.scale_delta = 0.0;
  EXPECT_THROW(segment_samples(ramp(4), spec), std::invalid_argument);
  spec.scale_delta = 1.0;
  spec.block_exponent = 25;
  EXPECT_THROW(segment_samples(ramp(4), spec), std::invalid_argument);
}

TEST(Segment, ConcatenationReproducesInput) {
  std::mt19937_64 rng(17);
  for (const double delta : {1.0, 0.25, 4.0}) {
    for (std::size_t len : {1u, 7u, 64u, 100u}) {
      const auto input = oracle::uniform_values(rng, len, -100.0, 100.0);
      InputSpec spec;
      spec.block_exponent = 4;
      spec.scale_delta = delta;
      const auto b = segment_samples(input, spec);
      EXPECT_EQ(b.blocks.size(), (len + 15) / 16);
      std::vector<double> back;
      for (const auto& s : b.blocks)
        for (double v : s.values()) back.push_back(v * delta);
      back.resize(back.size() - b.pad_count);
      EXPECT_EQ(back, input);
    }
  }
}

TEST(ReadCsv, CommentsAndBlankLines) {
  std::istringstream in("# header\n0.5\n\n  -1.25  # trailing\n+3\n1e-3\r\n");
  EXPECT_EQ(read_samples(in, InputFormat::csv), (std::vector<double>{0.5, -1.25, 3.0, 1e-3}));
}

TEST(ReadCsv, ReportsLineNumber) {
  std::istringstream in("1.0\n2.0\nabc\n");
  try {
    read_samples(in, InputFormat::csv, "sig.csv");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("sig.csv:3"), std::string::npos) << e.what();
  }
  std::istringstream nan_in("1.0\nnan\n");
  EXPECT_THROW(read_samples(nan_in, InputFormat::csv), IoError);
  std::istringstream partial("1.0 2.0\n");
  EXPECT_THROW(read_samples(partial, InputFormat::csv), IoError);
}

TEST(ReadCsv, SeventeenDigitRoundTrip) {
  std::mt19937_64 rng(23);
  const auto values = oracle::uniform_values(rng, 500, -1e6, 1e6);
  std::ostringstream out;
  for (double v : values) out << format_real(v) << '\n';
  std::istringstream in(out.str());
  EXPECT_EQ(read_samples(in, InputFormat::csv), values);
}

TEST(ReadRaw, LittleEndianDoubles) {
  TempDir dir;
  const std::vector<std::int64_t> levels{0, -3, 7, 1, 2};
  write_samples((dir / "a.raw").string(), levels, InputFormat::raw_f64_le);
  const std::string bytes = slurp(dir / "a.raw");
  ASSERT_EQ(bytes.size(), 40u);
  // -3.0 = 0xC008000000000000, least significant byte first.
  EXPECT_EQ(static_cast<unsigned char>(bytes[8 + 7]), 0xC0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8 + 6]), 0x08);
  EXPECT_EQ(read_integers((dir / "a.raw").string(), InputFormat::raw_f64_le), levels);

  std::istringstream truncated(bytes.substr(0, 13));
  EXPECT_THROW(read_samples(truncated, InputFormat::raw_f64_le), IoError);
}

TEST(ReadFile, Errors) {
  EXPECT_THROW(read_samples("/nonexistent/dir/x.csv", InputFormat::csv), IoError);
  TempDir dir;
  std::ofstream((dir / "f.csv")) << "1.5\n";
  EXPECT_THROW(read_integers((dir / "f.csv").string(), InputFormat::csv), IoError);
  EXPECT_THROW(write_samples("/nonexistent/dir/out.csv", std::vector<std::int64_t>{1}, InputFormat::csv), IoError);
}

RunReport worked_example_report() {
  InputSpec spec;
  spec.block_exponent = 2;
  const SignalBlocks b = segment_samples(std::vector<double>{0.3, -0.2, 0.4, 0.1}, spec);
  RunReport report;
  report.config.block_exponent = 2;
  report.original_length = b.original_length;
  report.blocks.push_back(
      summarize_block(0, b.blocks[0], quantize_haar_optimal(b.blocks[0]).signal, 0, true));
  return report;
}

TEST(WriteReport, WorkedExampleContents) {
  const auto j = nlohmann::json::parse(render_json(to_json(worked_example_report())));
  EXPECT_EQ(j["blocks"][0]["g"], nlohmann::json({0, 0, 1, 0}));
  EXPECT_EQ(j["blocks"][0]["quantized_total"], 1);
  EXPECT_NEAR(j["blocks"][0]["haar_dc_input"].get<double>(), 0.15, 1e-15);
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(WriteReport, Deterministic) {
  TempDir dir;
  write_report(worked_example_report(), (dir / "a.json").string());
  write_report(worked_example_report(), (dir / "b.json").string());
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
}

TEST(WriteReport, EmptyIsVacuousPass) {
  RunReport report;
  const auto j = nlohmann::json::parse(render_json(to_json(report)));
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["block_count"], 0);
  EXPECT_TRUE(j["blocks"].empty());
}

TEST(WriteReport, SchemaStableAndSorted) {
  const std::string text = render_json(to_json(worked_example_report()));
  const auto j = nlohmann::json::parse(text);
  for (const char* key : {"block_count", "blocks", "config", "original_length", "pad_count", "pass"})
    EXPECT_TRUE(j.contains(key)) << key;
  for (const char* key : {"block_exponent", "delta", "dither", "quantizer", "seed", "tie_break"})
    EXPECT_TRUE(j["config"].contains(key)) << key;
  for (const char* key : {"dc_error", "dc_bound", "level_max_error", "level_bound", "sup_error", "sup_bound",
                          "sup_error_unpadded", "spectrum_pass", "spectrum_csv", "g", "pass"})
    EXPECT_TRUE(j["blocks"][0].contains(key)) << key;
  EXPECT_LT(text.find("\"block_count\""), text.find("\"blocks\""));
  EXPECT_LT(text.find("\"blocks\""), text.find("\"config\""));
  // 0.15 as 17 significant digits
  EXPECT_NE(text.find("0.14999999999999999"), std::string::npos);
}

TEST(RenderJson, FloatsRoundTrip) {
  std::mt19937_64 rng(29);
  const auto values = oracle::uniform_values(rng, 100, -1.0, 1.0);
  const auto back = nlohmann::json::parse(render_json(nlohmann::json(values))).get<std::vector<double>>();
  EXPECT_EQ(back, values);
}

TEST(SpectrumCsv, Layout) {
  const Signal f({0.3, 0.7});
  std::ostringstream out;
  write_spectrum_csv(spectrum_error(f, quantize_haar_optimal(f).signal), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "xi,measured,bound_exact,bound_linear,baseline_bound");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
  EXPECT_NE(line.find(",0.25,0.25,0.5"), std::string::npos) << line;
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "1,");
  EXPECT_FALSE(std::getline(in, line));
}

TEST(SpectrumCsv, IntegerSignalMeasuresZero) {
  const Signal f({1.0, 2.0, -1.0, 4.0});
  std::ostringstream out;
  write_spectrum_csv(spectrum_error(f, QuantizedSignal({1, 2, -1, 4})), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    EXPECT_EQ(line.substr(first + 1, second - first - 1), "0");
  }
}

TEST(SpectrumCsv, RandomSignalWithinExactBound) {
  std::mt19937_64 rng(37);
  const Signal f = oracle::random_signal(rng, 6);
  std::ostringstream out;
  write_spectrum_csv(spectrum_error(f, quantize_haar_optimal(f).signal), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string xi, measured, exact;
    std::getline(fields, xi, ',');
    std::getline(fields, measured, ',');
    std::getline(fields, exact, ',');
    EXPECT_LE(std::stod(measured), std::stod(exact) + kSpectralBoundSlack) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 64);
}

TEST(SummarizeBlock, PaddingExcludedFromUnpaddedSup) {
  InputSpec spec;
  spec.block_exponent = 3;
  const SignalBlocks b = segment_samples(std::vector<double>{0.45, 0.45, 0.45}, spec);
  const auto g = quantize_haar_optimal(b.blocks[0]).signal;
  const auto s = summarize_block(0, b.blocks[0], g, b.pad_count, false);
  EXPECT_LE(s.sup_error_unpadded, s.haar.sup_error);
  EXPECT_FALSE(s.spectrum_checked);
  EXPECT_TRUE(s.pass());
}

}  // namespace
