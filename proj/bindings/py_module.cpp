// Python bindings for the main pipeline operations and core statistics.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gaitxai/data_ingest.hpp"
#include "gaitxai/eval.hpp"
#include "gaitxai/pipeline.hpp"
#include "gaitxai/run_config.hpp"
#include "gaitxai/spm1d.hpp"

namespace py = pybind11;
using namespace gaitxai;

namespace {

RunConfig config_from_dict(const py::dict& overrides) {
  RunConfig config;
  for (const auto& item : overrides) {
    apply_override(config, py::cast<std::string>(item.first),
                   py::cast<std::string>(py::str(item.second)));
  }
  return config;
}

CurveGroup to_group(const std::vector<std::vector<double>>& curves,
                    const std::string& label) {
  return CurveGroup{label, curves};
}

}  // namespace

PYBIND11_MODULE(_gaitxai, m) {
  m.doc() = "GRF gait classification, LRP explanations and 1D SPM";

  py::register_exception<Error>(m, "GaitxaiError");

  m.def(
      "synth",
      [](const std::string& out_path, std::uint64_t seed,
         std::size_t n_subjects_class0, std::size_t n_subjects_class1,
         std::size_t trials_per_subject, std::size_t series_length,
         std::size_t bump_center, std::size_t bump_width,
         double bump_amplitude, double noise_sd) {
        SyntheticSpec spec;
        spec.n_subjects_class0 = n_subjects_class0;
        spec.n_subjects_class1 = n_subjects_class1;
        spec.trials_per_subject = trials_per_subject;
        spec.series_length = series_length;
        spec.bump_center = bump_center;
        spec.bump_width = bump_width;
        spec.bump_amplitude = bump_amplitude;
        spec.noise_sd = noise_sd;
        cmd_synth(spec, seed, out_path);
      },
      py::arg("out_path"), py::arg("seed") = 42,
      py::arg("n_subjects_class0") = 20, py::arg("n_subjects_class1") = 20,
      py::arg("trials_per_subject") = 5, py::arg("series_length") = 100,
      py::arg("bump_center") = 50, py::arg("bump_width") = 16,
      py::arg("bump_amplitude") = 0.3, py::arg("noise_sd") = 0.05,
      "Generate a synthetic dataset CSV with a planted class difference.");

  m.def(
      "train", [](const py::dict& config) { cmd_train(config_from_dict(config)); },
      py::arg("config"),
      "Cross-validated training; config keys as in the key=value file.");
  m.def(
      "explain",
      [](const py::dict& config) { cmd_explain(config_from_dict(config)); },
      py::arg("config"), "Per-trial LRP relevance maps from saved checkpoints.");
  m.def(
      "spm", [](const py::dict& config) { cmd_spm(config_from_dict(config)); },
      py::arg("config"), "Per-channel two-sample SPM statistics.");
  m.def(
      "report",
      [](const py::dict& config) { cmd_report(config_from_dict(config)); },
      py::arg("config"), "Figure panels and region-overlap table.");

  m.def(
      "min_max_normalize",
      [](const std::vector<double>& series) { return min_max_normalize(series); },
      py::arg("series"));

  m.def(
      "t_curve",
      [](const std::vector<std::vector<double>>& a,
         const std::vector<std::vector<double>>& b) {
        const TCurve t = two_sample_t_curve(to_group(a, "a"), to_group(b, "b"));
        return py::make_tuple(t.t, t.nu);
      },
      py::arg("group_a"), py::arg("group_b"),
      "Pointwise pooled-variance two-sample t curve; returns (t, nu).");

  m.def(
      "cohens_d",
      [](const std::vector<std::vector<double>>& a,
         const std::vector<std::vector<double>>& b) {
        return cohens_d_curve(to_group(a, "a"), to_group(b, "b"));
      },
      py::arg("group_a"), py::arg("group_b"));

  m.def("rft_threshold", &rft_threshold, py::arg("nu"), py::arg("resels"),
        py::arg("alpha"),
        "Random-field-theory critical height; pass alpha/2 for two-sided use.");

  m.def(
      "permutation_threshold",
      [](const std::vector<std::vector<double>>& a,
         const std::vector<std::vector<double>>& b, double alpha,
         std::size_t n_perm, std::uint64_t seed) {
        return permutation_threshold(to_group(a, "a"), to_group(b, "b"), alpha,
                                     n_perm, seed);
      },
      py::arg("group_a"), py::arg("group_b"), py::arg("alpha") = 0.05,
      py::arg("n_perm") = 10000, py::arg("seed") = 0);

  m.def(
      "estimate_fwhm",
      [](const std::vector<std::vector<double>>& a,
         const std::vector<std::vector<double>>& b) {
        return estimate_fwhm(pooled_residuals(to_group(a, "a"), to_group(b, "b")));
      },
      py::arg("group_a"), py::arg("group_b"),
      "Gradient-based smoothness (FWHM, nodes) of the pooled residuals.");

  m.def(
      "zero_rule",
      [](const std::string& data_path) {
        return zero_rule(parse_trials_file(data_path));
      },
      py::arg("data_path"), "Majority-class share of a dataset CSV.");
}
