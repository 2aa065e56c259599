// Python bindings for the constrained-game pricing engine.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ccbond/closed_form.hpp"
#include "ccbond/errors.hpp"
#include "ccbond/fd_solver.hpp"
#include "ccbond/model.hpp"
#include "ccbond/simulate.hpp"
#include "ccbond/verify.hpp"

namespace py = pybind11;
using namespace ccb;

namespace {

std::string describe(const StrategyDescriptor& d) {
    std::ostringstream os;
    if (d.kind == StrategyDescriptor::Kind::Threshold) {
        os << "threshold:" << d.level;
    } else {
        os << "arrival:" << d.arrival;
    }
    return os.str();
}

const char* regime_name(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::LowK: return "LowK";
        case RegimeTag::MidK: return "MidK";
        case RegimeTag::HighK: return "HighK";
    }
    return "?";
}

}  // namespace

PYBIND11_MODULE(_ccbond, m) {
    m.doc() =
        "Pricing and verification engine for a perpetual callable convertible "
        "bond whose holder and issuer may act only at Poisson arrival times.";

    py::register_exception_translator([](std::exception_ptr ep) {
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const InvalidParamError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const NonPositiveXError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const RegimeMismatchError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const EmptyGridError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double r, double q, double sigma, double lambda_, double c,
                         double gamma, double K) {
                 ModelParams p;
                 p.r = r;
                 p.q = q;
                 p.sigma = sigma;
                 p.lambda = lambda_;
                 p.c = c;
                 p.gamma = gamma;
                 p.K = K;
                 validate_params(p);
                 return p;
             }),
             py::arg("r"), py::arg("q"), py::arg("sigma"), py::arg("lambda_"), py::arg("c"),
             py::arg("gamma"), py::arg("K"))
        .def_readwrite("r", &ModelParams::r)
        .def_readwrite("q", &ModelParams::q)
        .def_readwrite("sigma", &ModelParams::sigma)
        .def_readwrite("lambda_", &ModelParams::lambda)
        .def_readwrite("c", &ModelParams::c)
        .def_readwrite("gamma", &ModelParams::gamma)
        .def_readwrite("K", &ModelParams::K)
        .def("__repr__", [](const ModelParams& p) {
            std::ostringstream os;
            os << "ModelParams(r=" << p.r << ", q=" << p.q << ", sigma=" << p.sigma
               << ", lambda_=" << p.lambda << ", c=" << p.c << ", gamma=" << p.gamma
               << ", K=" << p.K << ")";
            return os.str();
        });

    py::class_<RootPair>(m, "RootPair")
        .def_readonly("alpha", &RootPair::alpha)
        .def_readonly("beta", &RootPair::beta)
        .def_readonly("lambda_used", &RootPair::lambda_used);

    m.def("char_roots", &char_roots, py::arg("params"), py::arg("lambda_"),
          "Roots (alpha > 1, beta < 0) of the killed characteristic quadratic.");

    m.def(
        "regime",
        [](const ModelParams& p) {
            const Regime reg = classify_regime(p);
            return py::make_tuple(regime_name(reg.tag), reg.cut_low, reg.cut_high);
        },
        py::arg("params"),
        "Call-price regime as (name, c/r cut, gamma*x_co(lambda) cut).");

    py::class_<StoppingStrategy>(m, "StoppingStrategy")
        .def_static("threshold", &StoppingStrategy::threshold, py::arg("level"))
        .def_static("fixed_arrival", &StoppingStrategy::fixed_arrival, py::arg("k"))
        .def_static("never", &StoppingStrategy::never)
        .def("__repr__", [](const StoppingStrategy& s) {
            std::ostringstream os;
            os << "StoppingStrategy(";
            switch (s.kind) {
                case StoppingStrategy::Kind::Threshold: os << "threshold:" << s.level; break;
                case StoppingStrategy::Kind::FixedArrival: os << "arrival:" << s.arrival; break;
                case StoppingStrategy::Kind::Never: os << "never"; break;
            }
            os << ")";
            return os.str();
        });

    py::class_<PricingSolution>(m, "PricingSolution")
        .def_property_readonly(
            "regime", [](const PricingSolution& s) { return regime_name(s.regime.tag); })
        .def_property_readonly("cut_low",
                               [](const PricingSolution& s) { return s.regime.cut_low; })
        .def_property_readonly("cut_high",
                               [](const PricingSolution& s) { return s.regime.cut_high; })
        .def_readonly("x_co_lambda", &PricingSolution::x_co_lambda)
        .def_readonly("x_co_unconstrained", &PricingSolution::x_co_unconstrained)
        .def_property_readonly("x_ca",
                               [](const PricingSolution& s) -> py::object {
                                   if (s.firm) return py::float_(s.firm->x_ca);
                                   return py::none();
                               })
        .def_property_readonly("z",
                               [](const PricingSolution& s) -> py::object {
                                   if (s.z) return py::float_(*s.z);
                                   return py::none();
                               })
        .def_property_readonly(
            "firm_strategy", [](const PricingSolution& s) { return describe(s.firm_strategy); })
        .def_property_readonly(
            "holder_strategy",
            [](const PricingSolution& s) { return describe(s.holder_strategy); })
        .def("value", &PricingSolution::value, py::arg("x"),
             "Equilibrium bond value at price x under the Poisson clock.")
        .def("value_unconstrained", &PricingSolution::value_unconstrained, py::arg("x"),
             "Bond value with unrestricted stopping (high-rate limit).");

    m.def("solve", &solve, py::arg("params"),
          "Full constrained-game solution: regime, thresholds, strategies, value curve.");
    m.def("value_co", &value_co, py::arg("params"), py::arg("x"),
          "Holder-only value (issuer never calls).");
    m.def("value_f", py::overload_cast<const ModelParams&, double>(&value_f), py::arg("params"),
          py::arg("x"), "Issuer-optimal value in the middle call-price regime.");
    m.def("value_ca", &value_ca, py::arg("params"), py::arg("x"),
          "Constrained game value at price x.");
    m.def("value_ca_unconstrained", &value_ca_unconstrained, py::arg("params"), py::arg("x"),
          "Game value with unrestricted stopping.");
    m.def("threshold_co", &threshold_co, py::arg("params"),
          "Holder-only conversion threshold under the Poisson clock.");
    m.def("threshold_co_unconstrained", &threshold_co_unconstrained, py::arg("params"),
          "Holder-only conversion threshold with unrestricted stopping.");
    m.def("forced_conversion_boundary", &forced_conversion_boundary, py::arg("params"),
          py::arg("x"), "Curve below which conversion is forced at the next arrival.");

    py::class_<EstimatorResult>(m, "EstimatorResult")
        .def_readonly("mean", &EstimatorResult::mean)
        .def_property_readonly("stderr",
                               [](const EstimatorResult& e) { return e.stderr_; })
        .def_readonly("n_paths", &EstimatorResult::n_paths)
        .def_readonly("seed", &EstimatorResult::seed)
        .def_readonly("n_truncated", &EstimatorResult::n_truncated)
        .def("__repr__", [](const EstimatorResult& e) {
            std::ostringstream os;
            os << "EstimatorResult(mean=" << e.mean << ", stderr=" << e.stderr_
               << ", n_paths=" << e.n_paths << ")";
            return os.str();
        });

    m.def("estimate_J", &estimate_J, py::arg("params"), py::arg("x0"), py::arg("firm"),
          py::arg("holder"), py::arg("modified"), py::arg("n_paths"), py::arg("seed"),
          "Monte Carlo estimate of the discounted game payoff for a strategy pair.");

    py::class_<BatteryRow>(m, "BatteryRow")
        .def_readonly("firm_side", &BatteryRow::firm_side)
        .def_readonly("mean", &BatteryRow::mean)
        .def_readonly("deficit", &BatteryRow::deficit)
        .def_readonly("deficit_se", &BatteryRow::deficit_se)
        .def_readonly("passed", &BatteryRow::pass);

    py::class_<SaddleReport>(m, "SaddleReport")
        .def_property_readonly("regime",
                               [](const SaddleReport& r) { return regime_name(r.regime); })
        .def_readonly("center_modified", &SaddleReport::center_modified)
        .def_readonly("center_unmodified", &SaddleReport::center_unmodified)
        .def_readonly("pair_gap_mean", &SaddleReport::pair_gap_mean)
        .def_readonly("pair_gap_se", &SaddleReport::pair_gap_se)
        .def_readonly("rows", &SaddleReport::rows)
        .def_readonly("passed", &SaddleReport::pass);

    m.def(
        "saddle_battery",
        [](const ModelParams& p, double x0, std::int64_t n_paths, std::uint64_t seed) {
            return saddle_battery(p, x0, n_paths, seed);
        },
        py::arg("params"), py::arg("x0"), py::arg("n_paths"), py::arg("seed"),
        "Deviation battery around the equilibrium strategy pair.");

    py::enum_<DppSide>(m, "DppSide")
        .value("Bondholder", DppSide::Bondholder)
        .value("Firm", DppSide::Firm);

    py::class_<DppReport>(m, "DppReport")
        .def_readonly("eta_cap", &DppReport::eta_cap)
        .def_readonly("lhs", &DppReport::lhs)
        .def_readonly("rhs", &DppReport::rhs)
        .def_readonly("continuation_fraction", &DppReport::continuation_fraction)
        .def_readonly("passed", &DppReport::pass);

    m.def("dpp_check", &dpp_check, py::arg("params"), py::arg("x0"), py::arg("side"),
          py::arg("eta_cap"), py::arg("n_paths"), py::arg("seed"),
          "One-step dynamic-programming identity check.");

    py::class_<SweepViolation>(m, "SweepViolation")
        .def_readonly("claim", &SweepViolation::claim)
        .def_readonly("margin", &SweepViolation::margin)
        .def_readonly("params", &SweepViolation::p);

    py::class_<SweepReport>(m, "SweepReport")
        .def_readonly("n_draws", &SweepReport::n_draws)
        .def_readonly("violations", &SweepReport::violations);

    m.def("property_sweep", &property_sweep, py::arg("n_draws"), py::arg("seed"),
          "Random-parameter sweep of the analytic inequalities.");

    py::class_<AsymptoticsRow>(m, "AsymptoticsRow")
        .def_readonly("lambda_", &AsymptoticsRow::lambda)
        .def_property_readonly("regime",
                               [](const AsymptoticsRow& r) { return regime_name(r.regime); })
        .def_readonly("x_co_lambda", &AsymptoticsRow::x_co_lambda)
        .def_readonly("x_ca_lambda", &AsymptoticsRow::x_ca_lambda)
        .def_readonly("value_gap_max", &AsymptoticsRow::value_gap_max);

    py::class_<AsymptoticsReport>(m, "AsymptoticsReport")
        .def_readonly("rows", &AsymptoticsReport::rows)
        .def_readonly("x_co_unconstrained", &AsymptoticsReport::x_co_unconstrained)
        .def_readonly("co_gap_decreasing", &AsymptoticsReport::co_gap_decreasing)
        .def_readonly("co_gap_final", &AsymptoticsReport::co_gap_final)
        .def_readonly("ca_gap_final", &AsymptoticsReport::ca_gap_final)
        .def_readonly("value_gap_final", &AsymptoticsReport::value_gap_final)
        .def_readonly("passed", &AsymptoticsReport::pass);

    m.def("asymptotics_check", &asymptotics_check, py::arg("params"), py::arg("lambdas"),
          py::arg("xs") = std::vector<double>{},
          "Convergence of thresholds and values along an increasing rate ladder.");

    py::class_<GridCurve>(m, "GridCurve")
        .def_readonly("x", &GridCurve::x)
        .def_readonly("v", &GridCurve::v)
        .def_readonly("residual", &GridCurve::residual)
        .def_readonly("iterations", &GridCurve::iterations);

    m.def(
        "solve_hjb_co", [](const ModelParams& p) { return solve_hjb_co(p); }, py::arg("params"),
        "Finite-difference solution of the holder-only problem.");
    m.def(
        "solve_hjb_f", [](const ModelParams& p) { return solve_hjb_f(p); }, py::arg("params"),
        "Finite-difference solution of the issuer problem (middle regime).");
    m.def(
        "solve_hjb_ca_low", [](const ModelParams& p) { return solve_hjb_ca_low(p); },
        py::arg("params"), "Finite-difference solution of the low-call-price game.");
}
