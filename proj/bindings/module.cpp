// Python bindings for the core operations: field models, renewal-process
// trials, empirical CDF machinery, and the analytic error bounds.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fieldcdf/cdf_estimation.hpp"
#include "fieldcdf/dataset_io.hpp"
#include "fieldcdf/error_bounds.hpp"
#include "fieldcdf/experiment_harness.hpp"
#include "fieldcdf/field_model.hpp"
#include "fieldcdf/renewal_sampling.hpp"

namespace py = pybind11;
using namespace fieldcdf;

namespace {

double estimate_from_values(const std::vector<double>& values, double s) {
    TrialView view{0, &values, static_cast<std::int64_t>(values.size())};
    return estimate_field_at(view, s);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Distribution learning for fields sampled at unknown "
              "renewal-process locations";

    py::class_<FieldSpec>(m, "FieldSpec")
        .def_static("cosine_sum", &FieldSpec::cosine_sum, py::arg("a0"),
                    py::arg("f"), py::arg("num_harmonics"),
                    py::arg("amp_scale"), py::arg("envelope_period") = 24.0)
        .def_static("cosine_sum_explicit", &FieldSpec::cosine_sum_explicit,
                    py::arg("a0"), py::arg("f"), py::arg("amp_ceiling"),
                    py::arg("envelope_period") = 24.0)
        .def_static(
            "user_table",
            [](const std::vector<std::pair<double, double>>& points) {
                std::vector<TablePoint> pts;
                pts.reserve(points.size());
                for (const auto& [s, v] : points)
                    pts.push_back(TablePoint{s, v});
                return FieldSpec::user_table(std::move(pts));
            },
            py::arg("points"))
        .def_property_readonly("declared_bound", &FieldSpec::declared_bound)
        .def_property_readonly("declared_lipschitz",
                               &FieldSpec::declared_lipschitz)
        .def_property_readonly("a0", &FieldSpec::a0)
        .def_property_readonly("frequency", &FieldSpec::frequency)
        .def_property_readonly("num_harmonics", &FieldSpec::num_harmonics);

    py::class_<FieldRealization>(m, "FieldRealization")
        .def("evaluate", &FieldRealization::evaluate, py::arg("s"))
        .def_property_readonly("epoch_time", &FieldRealization::epoch_time)
        .def_property_readonly("amplitudes", &FieldRealization::amplitudes);

    m.def(
        "realize_field",
        [](const FieldSpec& spec, double t, std::uint64_t seed) {
            Rng rng(seed);
            return realize(spec, t, rng);
        },
        py::arg("spec"), py::arg("t"), py::arg("seed"));
    m.def("eval_field", &eval_field, py::arg("spec"), py::arg("s"),
          py::arg("t"), py::arg("seed"));
    m.def("estimate_lipschitz", &estimate_lipschitz, py::arg("spec"),
          py::arg("grid_size"), py::arg("t"), py::arg("seed"));
    m.def(
        "verify_bounded",
        [](const FieldSpec& spec, int grid_size, int num_time_draws,
           std::uint64_t seed) {
            BoundCheckReport report =
                verify_bounded(spec, grid_size, num_time_draws, seed);
            std::vector<std::tuple<double, double, double>> violations;
            for (const FieldSample& v : report.violations)
                violations.emplace_back(v.value, v.time, v.true_location);
            return py::make_tuple(report.pass, violations);
        },
        py::arg("spec"), py::arg("grid_size"), py::arg("num_time_draws"),
        py::arg("seed"));

    py::class_<IntersampleDistribution>(m, "IntersampleDistribution")
        .def_static("triangular", &IntersampleDistribution::triangular,
                    py::arg("n"))
        .def_static("scaled_beta", &IntersampleDistribution::scaled_beta,
                    py::arg("n"), py::arg("lambda_"), py::arg("shape") = 2.0)
        .def_static("deterministic", &IntersampleDistribution::deterministic,
                    py::arg("n"))
        .def_property_readonly("n", &IntersampleDistribution::n)
        .def_property_readonly("lambda_", &IntersampleDistribution::lambda)
        .def_property_readonly("max_gap", &IntersampleDistribution::max_gap);

    py::class_<LocationSequence>(m, "LocationSequence")
        .def_readonly("locations", &LocationSequence::locations)
        .def_readonly("intervals", &LocationSequence::intervals)
        .def_readonly("overshoot_interval",
                      &LocationSequence::overshoot_interval)
        .def_property_readonly("sample_count",
                               &LocationSequence::sample_count);

    m.def(
        "generate_locations",
        [](const IntersampleDistribution& dist, std::uint64_t seed) {
            Rng rng(seed);
            return generate_locations(dist, rng);
        },
        py::arg("dist"), py::arg("seed"));

    py::class_<TimingModel>(m, "TimingModel")
        .def(py::init<>())
        .def_readwrite("epoch_spacing", &TimingModel::epoch_spacing)
        .def_readwrite("sample_period", &TimingModel::sample_period);

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("trial_id", &TrialRecord::trial_id)
        .def_readonly("values", &TrialRecord::values)
        .def_readonly("sample_count", &TrialRecord::sample_count)
        .def_readonly("hidden_locations", &TrialRecord::hidden_locations)
        .def_readonly("overshoot_interval", &TrialRecord::overshoot_interval)
        .def_readonly("epoch_time", &TrialRecord::epoch_time);

    m.def("run_trial", &run_trial, py::arg("spec"), py::arg("dist"),
          py::arg("trial_id"), py::arg("seed"),
          py::arg("timing") = TimingModel{});
    m.def(
        "mean_sample_count",
        [](const IntersampleDistribution& dist, std::int64_t repetitions,
           std::uint64_t seed) {
            SampleCountStats stats = mean_sample_count(dist, repetitions, seed);
            return py::make_tuple(stats.mean, stats.std_error);
        },
        py::arg("dist"), py::arg("repetitions"), py::arg("seed"));

    py::class_<EmpiricalCdf>(m, "EmpiricalCdf")
        .def(py::init<std::vector<double>>(), py::arg("values"))
        .def("__call__", &EmpiricalCdf::operator(), py::arg("x"))
        .def_property_readonly("count", &EmpiricalCdf::count)
        .def_property_readonly("sorted_values", &EmpiricalCdf::sorted_values);

    m.def("select_index",
          py::overload_cast<std::int64_t, double>(&select_index),
          py::arg("sample_count"), py::arg("s"));
    m.def("select_index_fraction",
          py::overload_cast<std::int64_t, std::int64_t, std::int64_t>(
              &select_index),
          py::arg("sample_count"), py::arg("s_num"), py::arg("s_den"));
    m.def("estimate_field_at", &estimate_from_values, py::arg("values"),
          py::arg("s"));
    m.def("avg_pointwise_diff", &avg_pointwise_diff, py::arg("a"), py::arg("b"),
          py::arg("grid"));
    m.def("max_pointwise_diff", &max_pointwise_diff, py::arg("a"),
          py::arg("b"));
    m.def("make_metric_grid", &make_metric_grid, py::arg("a"), py::arg("b"),
          py::arg("size"));

    py::class_<BoundParams>(m, "BoundParams")
        .def(py::init([](double alpha, double n, double lambda_, double C,
                         double beta, double eps, double delta, double N,
                         double max_pdf) {
                 return BoundParams{alpha, n, lambda_, C, beta,
                                    eps,   delta, N, max_pdf};
             }),
             py::arg("alpha"), py::arg("n"), py::arg("lambda_"),
             py::arg("C") = 1.0, py::arg("beta") = 1.0, py::arg("eps") = 1.0,
             py::arg("delta") = 0.05, py::arg("N") = 50.0,
             py::arg("max_pdf") = 1.0)
        .def_readwrite("alpha", &BoundParams::alpha)
        .def_readwrite("n", &BoundParams::n)
        .def_readwrite("lambda_", &BoundParams::lambda)
        .def_readwrite("C", &BoundParams::C)
        .def_readwrite("beta", &BoundParams::beta)
        .def_readwrite("eps", &BoundParams::eps)
        .def_readwrite("delta", &BoundParams::delta)
        .def_readwrite("N", &BoundParams::N)
        .def_readwrite("max_pdf", &BoundParams::max_pdf)
        .def("validate", &BoundParams::validate);

    m.def("location_mse_bound", &location_mse_bound, py::arg("params"),
          py::arg("s"));
    m.def("value_deviation_prob_bound", &value_deviation_prob_bound,
          py::arg("params"), py::arg("s"));
    m.def("value_deviation_prob_sup_bound", &value_deviation_prob_sup_bound,
          py::arg("params"));
    m.def("cdf_shift_bound", &cdf_shift_bound, py::arg("params"), py::arg("s"));
    m.def("cdf_pointwise_error_bound", &cdf_pointwise_error_bound,
          py::arg("params"), py::arg("s"));
    m.def(
        "cdf_sup_error_bound",
        [](const BoundParams& p, double s) {
            SupErrorBound b = cdf_sup_error_bound(p, s);
            return py::make_tuple(b.value, b.amplitude, b.dkw_term);
        },
        py::arg("params"), py::arg("s"));
    m.def("dkw_epsilon", &dkw_epsilon, py::arg("N"), py::arg("delta"));
    m.def(
        "minimize_pointwise_bound",
        [](const BoundParams& p, double s, const std::vector<double>& grid) {
            EpsChoice choice = minimize_pointwise_bound(p, s, grid);
            return py::make_tuple(choice.eps, choice.bound);
        },
        py::arg("params"), py::arg("s"), py::arg("eps_grid"));
    m.def("estimate_max_pdf", &estimate_max_pdf, py::arg("values"),
          py::arg("safety_factor") = 1.25);
    m.def("is_vacuous", &is_vacuous, py::arg("bound_value"));

    m.def(
        "simulate_csv",
        [](const std::string& config_text, const std::string& out_path) {
            KeyValueConfig kv = KeyValueConfig::parse_string(config_text);
            ExperimentConfig cfg = ExperimentConfig::from_config(kv);
            ExperimentResult result = run_sweep(cfg);
            export_results(result, cfg.to_entries(), out_path);
            return static_cast<std::int64_t>(result.rows.size());
        },
        py::arg("config_text"), py::arg("out_path"),
        "Run a sweep described by config text and write the results CSV; "
        "returns the number of rows written.");
}
