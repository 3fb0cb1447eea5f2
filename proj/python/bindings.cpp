#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wptmec/algorithm.hpp"
#include "wptmec/lambertw.hpp"
#include "wptmec/model.hpp"
#include "wptmec/oracle.hpp"
#include "wptmec/types.hpp"

namespace py = pybind11;
using namespace wptmec;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cooling-aware wireless-powered MEC energy minimization";

    py::register_exception<Infeasible>(m, "Infeasible");
    py::register_exception<NonConvergence>(m, "NonConvergence");
    py::register_exception<ValidationError>(m, "ValidationError");

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("T", &SystemConfig::T)
        .def_readwrite("phi", &SystemConfig::phi)
        .def_readwrite("W", &SystemConfig::W)
        .def_readwrite("I", &SystemConfig::I)
        .def_readwrite("f_s_max", &SystemConfig::f_s_max)
        .def_readwrite("P_b_max", &SystemConfig::P_b_max)
        .def_readwrite("sigma2", &SystemConfig::sigma2)
        .def_readwrite("delta", &SystemConfig::delta)
        .def_readwrite("eps1", &SystemConfig::eps1)
        .def_readwrite("eps2", &SystemConfig::eps2)
        .def_readwrite("P_a_max", &SystemConfig::P_a_max)
        .def("validate", &SystemConfig::validate);

    py::class_<UserParams>(m, "UserParams")
        .def(py::init<>())
        .def_readwrite("R", &UserParams::R)
        .def_readwrite("B", &UserParams::B)
        .def_readwrite("k", &UserParams::k)
        .def_readwrite("f_u_max", &UserParams::f_u_max)
        .def_readwrite("theta", &UserParams::theta)
        .def_readwrite("H", &UserParams::H)
        .def_readwrite("g", &UserParams::g)
        .def("validate", &UserParams::validate);

    py::class_<UserAllocation>(m, "UserAllocation")
        .def(py::init<>())
        .def_readwrite("a", &UserAllocation::a)
        .def_readwrite("f_u", &UserAllocation::f_u)
        .def_readwrite("f_s", &UserAllocation::f_s)
        .def_readwrite("P_b", &UserAllocation::P_b)
        .def_readwrite("T_off", &UserAllocation::T_off);

    py::class_<Allocation>(m, "Allocation")
        .def(py::init<>())
        .def_readwrite("users", &Allocation::users)
        .def("__len__", &Allocation::size)
        .def("__getitem__",
             [](const Allocation& a, std::size_t i) {
                 if (i >= a.size()) throw py::index_error();
                 return a[i];
             });

    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("E_h", &EnergyReport::E_h)
        .def_readonly("E_loc", &EnergyReport::E_loc)
        .def_readonly("E_off", &EnergyReport::E_off)
        .def_readonly("E_comp", &EnergyReport::E_comp)
        .def_readonly("E_wpt", &EnergyReport::E_wpt)
        .def_readonly("E_cool", &EnergyReport::E_cool)
        .def_readonly("E_total", &EnergyReport::E_total);

    py::class_<DualVars>(m, "DualVars")
        .def(py::init<std::size_t>(), py::arg("n") = 0)
        .def_readwrite("lam", &DualVars::lambda)
        .def_readwrite("mu", &DualVars::mu)
        .def_readwrite("nu", &DualVars::nu)
        .def_readwrite("pi", &DualVars::pi);

    py::enum_<Scheme>(m, "Scheme")
        .value("proposed", Scheme::proposed)
        .value("local", Scheme::local)
        .value("full", Scheme::full)
        .value("half", Scheme::half)
        .value("oracle", Scheme::oracle);

    py::class_<Solution>(m, "Solution")
        .def_readonly("allocation", &Solution::allocation)
        .def_readonly("report", &Solution::report)
        .def_readonly("dual", &Solution::dual)
        .def_readonly("iterations", &Solution::iterations)
        .def_readonly("converged", &Solution::converged)
        .def_readonly("scheme", &Solution::scheme)
        .def_readonly("objective_history", &Solution::objective_history);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("a_points", &GridSpec::a_points)
        .def_readwrite("t_points", &GridSpec::t_points)
        .def_readwrite("refinement_levels", &GridSpec::refinement_levels)
        .def_readwrite("max_evals", &GridSpec::max_evals);

    py::class_<KktReport>(m, "KktReport")
        .def_readonly("slack_lambda", &KktReport::slack_lambda)
        .def_readonly("slack_mu", &KktReport::slack_mu)
        .def_readonly("slack_nu", &KktReport::slack_nu)
        .def_readonly("slack_pi", &KktReport::slack_pi)
        .def_readonly("stationarity", &KktReport::stationarity)
        .def_readonly("max_residual", &KktReport::max_residual);

    m.def("lambert_w0",
          [](double x) { return lambert_w0(x).value; },
          py::arg("x"), "Principal-branch Lambert W");

    m.def(
        "run_joint",
        [](const SystemConfig& cfg, const std::vector<UserParams>& users) {
            return run_joint(cfg, users);
        },
        py::arg("cfg"), py::arg("users"),
        "Proposed alternating dual-decomposition solver");

    m.def(
        "run_baseline",
        [](const SystemConfig& cfg, const std::vector<UserParams>& users,
           Scheme scheme) { return run_baseline(cfg, users, scheme); },
        py::arg("cfg"), py::arg("users"), py::arg("scheme"),
        "Fixed-ratio baselines (local / full / half offloading)");

    m.def("grid_search", &grid_search, py::arg("cfg"), py::arg("users"),
          py::arg("spec") = GridSpec{}, "Brute-force verification oracle");

    m.def("kkt_residuals", &kkt_residuals, py::arg("sol"), py::arg("cfg"),
          py::arg("users"), "KKT residuals of a solution with duals");

    m.def(
        "total_ap_energy",
        [](const Allocation& x, const SystemConfig& cfg,
           const std::vector<UserParams>& users) {
            return total_ap_energy(x, cfg, users);
        },
        py::arg("allocation"), py::arg("cfg"), py::arg("users"),
        "AP-side energy decomposition of an allocation");
}
