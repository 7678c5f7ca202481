#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "haarq/haar.hpp"
#include "haarq/quantizer.hpp"
#include "haarq/spectral.hpp"

namespace py = pybind11;
using namespace haarq;

namespace {

template <typename T>
std::vector<std::vector<T>> levels_of(const TotalsPyramid<T>& p) {
  std::vector<std::vector<T>> out;
  for (int k = 0; k <= p.n_exponent(); ++k) out.emplace_back(p.level(k).begin(), p.level(k).end());
  return out;
}

std::vector<double> values_of(const Signal& s) { return {s.values().begin(), s.values().end()}; }

TieBreak parse_tie(const std::string& s) {
  if (s == "down") return TieBreak::toward_negative;
  if (s == "up") return TieBreak::toward_positive;
  throw std::invalid_argument("tie_break must be 'down' or 'up'");
}

QuantizedSignal quantized_of(const Signal& f, std::vector<std::int64_t> g) {
  return QuantizedSignal(f.grid(), std::move(g));
}

}  // namespace

PYBIND11_MODULE(_haarq, m) {
  m.doc() = "Haar-optimal quantization of sampled signals with verified error bounds";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::overflow_error& e) {
      PyErr_SetString(PyExc_OverflowError, e.what());
    }
  });

  m.attr("MAX_EXPONENT") = kMaxExponent;

  m.def("grid_samples", [](int n) { return make_grid(n).samples(); }, py::arg("n_exponent"),
        "Midpoint samples t[n] of the 2^N-point grid.");
  m.def("inner_product", [](std::vector<double> f, std::vector<double> g) {
    return inner_product(Signal(std::move(f)), Signal(std::move(g)));
  });
  m.def("haar_basis", [](int k, std::int64_t j, int n) { return values_of(haar_basis({k, j}, TimeGrid(n))); },
        py::arg("k"), py::arg("j"), py::arg("n_exponent"));
  m.def("totals_pyramid", [](std::vector<double> f) { return levels_of(totals_pyramid(Signal(std::move(f)))); },
        "Levels V[k, .] for k = 0..N.");
  m.def("haar_analyze", [](std::vector<double> f) {
    const auto c = haar_analyze(Signal(std::move(f)));
    return std::vector<double>(c.flat().begin(), c.flat().end());
  }, "Haar coefficients in level order: (0,1), (1,1), (2,1), (2,2), ...");
  m.def("haar_synthesize", [](std::vector<double> c) {
    const int n = exponent_for_length(c.size());
    return values_of(haar_synthesize(HaarCoefficients(n, std::move(c))));
  });
  m.def("haar_index", [](std::size_t flat) {
    const auto i = index_at(flat);
    return std::make_pair(i.k, i.j);
  });

  m.def("choose_parity_constrained", [](double target, bool odd, const std::string& tie) {
    return choose_parity_constrained(target, odd ? Parity::odd : Parity::even, parse_tie(tie));
  }, py::arg("target"), py::arg("odd"), py::arg("tie_break") = "down");

  m.def("quantize_haar_optimal",
        [](std::vector<double> f, const std::string& tie, double dither, std::uint64_t seed) {
          QuantizerConfig config;
          config.tie_break = parse_tie(tie);
          config.dither_amplitude = dither;
          config.dither_seed = seed;
          auto r = quantize_haar_optimal(Signal(std::move(f)), config);
          return std::make_pair(std::vector<std::int64_t>(r.signal.values().begin(), r.signal.values().end()),
                                levels_of(r.pyramid));
        },
        py::arg("f"), py::arg("tie_break") = "down", py::arg("dither") = 0.0, py::arg("seed") = 0,
        "Returns (g, pyramid levels G[k, .]).");
  m.def("quantize_simple", [](std::vector<double> f) {
    const auto q = quantize_simple(Signal(std::move(f)));
    return std::vector<std::int64_t>(q.values().begin(), q.values().end());
  });

  py::class_<HaarErrorReport>(m, "HaarErrorReport")
      .def_property_readonly("errors", [](const HaarErrorReport& r) {
        return std::vector<double>(r.errors.flat().begin(), r.errors.flat().end());
      })
      .def_readonly("hf_dc", &HaarErrorReport::hf_dc)
      .def_readonly("hg_dc", &HaarErrorReport::hg_dc)
      .def_readonly("sup_error", &HaarErrorReport::sup_error)
      .def_readonly("sup_bound", &HaarErrorReport::sup_bound)
      .def_readonly("level_max_error", &HaarErrorReport::level_max_error)
      .def_readonly("level_bound", &HaarErrorReport::level_bound)
      .def_readonly("level_ok", &HaarErrorReport::level_ok)
      .def_readonly("dc_ok", &HaarErrorReport::dc_ok)
      .def_readonly("sup_ok", &HaarErrorReport::sup_ok)
      .def_property_readonly("levels_ok", &HaarErrorReport::levels_ok)
      .def_property_readonly("all_ok", &HaarErrorReport::all_ok);

  m.def("verify_theorem1", [](std::vector<double> f, std::vector<std::int64_t> g) {
    const Signal s(std::move(f));
    return verify_theorem1(s, quantized_of(s, std::move(g)));
  });
  m.def("check_range", [](std::vector<double> f, std::int64_t ell, std::int64_t mm, std::vector<std::int64_t> g) {
    const Signal s(std::move(f));
    return check_range(s, ell, mm, quantized_of(s, std::move(g)));
  }, py::arg("f"), py::arg("ell"), py::arg("m"), py::arg("g"));

  m.def("frequencies", [](int n) { return FrequencyGrid(n).frequencies(); });
  m.def("dft", [](std::vector<double> f) {
    const auto s = dft(f);
    return std::vector<std::complex<double>>(s.values().begin(), s.values().end());
  }, "Spectrum in ascending frequency order, see frequencies().");
  m.def("haar_fourier_coefficient", [](std::int64_t xi, int k, std::int64_t j, int n) {
    return haar_fourier_coefficient(xi, {k, j}, n);
  }, py::arg("xi"), py::arg("k"), py::arg("j"), py::arg("n_exponent"));
  m.def("fourier_error_bound_exact", &fourier_error_bound_exact, py::arg("xi"), py::arg("n_exponent"));
  m.def("fourier_error_bound_linear", &fourier_error_bound_linear, py::arg("xi"), py::arg("n_exponent"));

  py::class_<NoiseBoundRow>(m, "NoiseBoundRow")
      .def_readonly("xi", &NoiseBoundRow::xi)
      .def_readonly("measured", &NoiseBoundRow::measured)
      .def_readonly("bound_exact", &NoiseBoundRow::bound_exact)
      .def_readonly("bound_linear", &NoiseBoundRow::bound_linear)
      .def_readonly("baseline_bound", &NoiseBoundRow::baseline_bound)
      .def_readonly("passed", &NoiseBoundRow::pass);
  py::class_<NoiseBoundTable>(m, "NoiseBoundTable")
      .def_readonly("rows", &NoiseBoundTable::rows)
      .def_property_readonly("all_pass", &NoiseBoundTable::all_pass)
      .def("low_band_mean", &NoiseBoundTable::low_band_mean)
      .def("rms", &NoiseBoundTable::rms);
  m.def("spectrum_error", [](std::vector<double> f, std::vector<std::int64_t> g) {
    const Signal s(std::move(f));
    return spectrum_error(s, quantized_of(s, std::move(g)));
  });
}
