// Copyright 2026 The dsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Python bindings for the dsest library. All information quantities are in
// nats; convert with dsest.to_bits.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <sstream>

#include "dsest/errors.h"
#include "dsest/evaluate.h"
#include "dsest/mc_oracle.h"
#include "dsest/network_model.h"
#include "dsest/outer_bounds.h"
#include "dsest/protocols.h"
#include "dsest/validation.h"

namespace py = pybind11;

namespace dsest {
namespace {

void BindErrors(py::module_& m) {
  static py::exception<Error> base(m, "DsestError", PyExc_RuntimeError);
  static py::exception<InvalidArgumentError> invalid(
      m, "InvalidArgumentError", base.ptr());
  static py::exception<SingularMatrixError> singular(
      m, "SingularMatrixError", base.ptr());
  static py::exception<InfeasibleError> infeasible(m, "InfeasibleError",
                                                   base.ptr());
  static py::exception<OutsideValidityError> outside(
      m, "OutsideValidityError", base.ptr());
  // Most-derived first: pybind11 tries translators in reverse registration.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgumentError& e) {
      invalid(e.what());
    } catch (const SingularMatrixError& e) {
      singular(e.what());
    } catch (const InfeasibleError& e) {
      infeasible(e.what());
    } catch (const OutsideValidityError& e) {
      outside(e.what());
    } catch (const Error& e) {
      base(e.what());
    }
  });
}

void BindModel(py::module_& m) {
  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&ModelParams::Create), py::arg("k"), py::arg("h"),
           py::arg("sigma_x2") = 1.0)
      .def_readonly("k", &ModelParams::k)
      .def_readonly("h", &ModelParams::h)
      .def_readonly("sigma_x2", &ModelParams::sigma_x2)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream s;
        s << "ModelParams(k=" << p.k << ", h=" << p.h
          << ", sigma_x2=" << p.sigma_x2 << ")";
        return s.str();
      });

  py::class_<Moments>(m, "Moments")
      .def_readonly("alpha", &Moments::alpha)
      .def_readonly("beta", &Moments::beta);

  m.def("compute_moments", &ComputeMoments, py::arg("params"));
  m.def("d_max", &DMax, py::arg("params"));
  m.def("d_min", &DMin, py::arg("params"));
  m.def("d_min_limit", &DMinLimit, py::arg("params"));
  m.def(
      "joint_covariance",
      [](const ModelParams& p, double q) {
        return JointCovariance(p, q).entries();
      },
      py::arg("params"), py::arg("sigma_q2"));
}

void BindProtocols(py::module_& m) {
  m.def("achievable_distortion", &AchievableDistortion, py::arg("params"),
        py::arg("sigma_q2"));
  m.def("sigma_q2_for_distortion", &SigmaQ2ForDistortion, py::arg("params"),
        py::arg("d_target"));
  m.def(
      "distributed_rates",
      [](const ModelParams& p, double q) { return DistributedRates(p, q); },
      py::arg("params"), py::arg("sigma_q2"));
  m.def("distributed_rates_structured", &DistributedRatesStructured,
        py::arg("params"), py::arg("sigma_q2"));
  m.def("distributed_sum_rate", &DistributedSumRate, py::arg("params"),
        py::arg("sigma_q2"));
  m.def(
      "ceo_rates", [](const ModelParams& p, double q) { return CeoRates(p, q); },
      py::arg("params"), py::arg("sigma_q2"));
  m.def("ceo_rates_structured", &CeoRatesStructured, py::arg("params"),
        py::arg("sigma_q2"));
  m.def("ceo_sum_rate", &CeoSumRate, py::arg("params"), py::arg("sigma_q2"));
  m.def("per_user_rate_limit", &PerUserRateLimit, py::arg("h"),
        py::arg("sigma_x2"), py::arg("sigma_q2"));
  m.def("leakage_formula", &LeakageFormula, py::arg("params"));
  m.def("leakage_exact", &LeakageExact, py::arg("params"),
        py::arg("sigma_q2"));
  m.def("leakage_exact_structured", &LeakageExactStructured,
        py::arg("params"), py::arg("sigma_q2"));

  py::class_<ProtocolComparison>(m, "ProtocolComparison")
      .def_readonly("dist_sum", &ProtocolComparison::dist_sum)
      .def_readonly("ceo_sum", &ProtocolComparison::ceo_sum)
      .def_readonly("gap", &ProtocolComparison::gap)
      .def_readonly("per_user_gap", &ProtocolComparison::per_user_gap);
  m.def("compare_protocols", &CompareProtocols, py::arg("params"),
        py::arg("sigma_q2"));
}

void BindOuterBounds(py::module_& m) {
  py::class_<EstimatorCalibration>(m, "EstimatorCalibration")
      .def_readonly("d_target", &EstimatorCalibration::d_target)
      .def_readonly("sigma_q2", &EstimatorCalibration::sigma_q2)
      .def_readonly("b", &EstimatorCalibration::b)
      .def_readonly("sigma_z2", &EstimatorCalibration::sigma_z2)
      .def_readonly("gain", &EstimatorCalibration::gain)
      .def_readonly("g", &EstimatorCalibration::g)
      .def_readonly("g1", &EstimatorCalibration::g1)
      .def_readonly("q1", &EstimatorCalibration::q1)
      .def_readonly("q2", &EstimatorCalibration::q2)
      .def_readonly("q3", &EstimatorCalibration::q3);
  m.def("calibrate", &Calibrate, py::arg("params"), py::arg("d_target"));
  m.def("calibrate_at_sigma_q2", &CalibrateAtSigmaQ2, py::arg("params"),
        py::arg("sigma_q2"));
  m.def("rate_outer_bound", &RateOuterBound, py::arg("params"),
        py::arg("calibration"));
  m.def("leakage_outer_bound", &LeakageOuterBound, py::arg("params"),
        py::arg("calibration"));
  m.def("per_user_outer_rate", &PerUserOuterRate, py::arg("params"),
        py::arg("calibration"));
}

void BindMonteCarlo(py::module_& m) {
  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("d_hat", &McEstimate::d_hat)
      .def_readonly("d_stderr", &McEstimate::d_stderr)
      .def_readonly("leakage_hat", &McEstimate::leakage_hat)
      .def_readonly("leakage_stderr", &McEstimate::leakage_stderr)
      .def_readonly("rates_hat", &McEstimate::rates_hat);
  m.def(
      "simulate",
      [](const ModelParams& p, double q, std::int64_t n, std::uint64_t seed,
         int trials) {
        McConfig cfg;
        cfg.n = n;
        cfg.seed = seed;
        cfg.trials = trials;
        cfg.Validate();
        py::gil_scoped_release release;
        return Simulate(p, q, cfg);
      },
      py::arg("params"), py::arg("sigma_q2"), py::arg("n") = 200000,
      py::arg("seed") = 42, py::arg("trials") = 1);
}

void BindEvaluate(py::module_& m) {
  py::class_<RdlPoint>(m, "RdlPoint")
      .def_readonly("sigma_q2", &RdlPoint::sigma_q2)
      .def_readonly("alpha", &RdlPoint::alpha)
      .def_readonly("beta", &RdlPoint::beta)
      .def_readonly("d_min", &RdlPoint::d_min)
      .def_readonly("d_max", &RdlPoint::d_max)
      .def_readonly("d_achievable", &RdlPoint::d_achievable)
      .def_readonly("r_sum_dist", &RdlPoint::r_sum_dist)
      .def_readonly("r_per_user_dist", &RdlPoint::r_per_user_dist)
      .def_readonly("r_sum_ceo", &RdlPoint::r_sum_ceo)
      .def_readonly("r_per_user_ceo", &RdlPoint::r_per_user_ceo)
      .def_readonly("r_per_user_limit", &RdlPoint::r_per_user_limit)
      .def_readonly("leakage_formula", &RdlPoint::leakage_formula)
      .def_readonly("leakage_exact", &RdlPoint::leakage_exact)
      .def_readonly("r1_outer", &RdlPoint::r1_outer)
      .def_readonly("leakage_outer", &RdlPoint::leakage_outer);
  m.def(
      "evaluate_point",
      [](const ModelParams& p, double q, bool include_outer,
         bool include_exact_leakage) {
        EvaluateOptions o;
        o.include_outer = include_outer;
        o.include_exact_leakage = include_exact_leakage;
        return EvaluatePoint(p, q, o);
      },
      py::arg("params"), py::arg("sigma_q2"), py::arg("include_outer") = true,
      py::arg("include_exact_leakage") = true);
}

void BindValidation(py::module_& m) {
  py::class_<SuiteResult>(m, "SuiteResult")
      .def_readonly("name", &SuiteResult::name)
      .def_readonly("max_error", &SuiteResult::max_error)
      .def_readonly("tolerance", &SuiteResult::tolerance)
      .def_readonly("checks", &SuiteResult::checks)
      .def_readonly("worst", &SuiteResult::worst)
      .def_readonly("note", &SuiteResult::note)
      .def_readonly("passed", &SuiteResult::passed);
  m.def(
      "run_validation",
      [](const std::string& grid, std::int64_t mc_samples,
         std::uint64_t seed) {
        ValidationOptions o;
        if (grid == "small") {
          o.grid = ValidationGrid::kSmall;
        } else if (grid == "full") {
          o.grid = ValidationGrid::kFull;
        } else {
          throw InvalidArgumentError("grid", "must be 'small' or 'full'");
        }
        o.mc_samples = mc_samples;
        o.seed = seed;
        py::gil_scoped_release release;
        return RunValidation(o).suites;
      },
      py::arg("grid") = "small", py::arg("mc_samples") = 200000,
      py::arg("seed") = 42);
}

}  // namespace
}  // namespace dsest

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rate, distortion and leakage of the Gaussian K-agent model.";
  dsest::BindErrors(m);
  dsest::BindModel(m);
  dsest::BindProtocols(m);
  dsest::BindOuterBounds(m);
  dsest::BindMonteCarlo(m);
  dsest::BindEvaluate(m);
  dsest::BindValidation(m);
  m.attr("LN2") = std::numbers::ln2;
}
