#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "corrosim/calibration.hpp"
#include "corrosim/errors.hpp"
#include "corrosim/mechanics.hpp"
#include "corrosim/params.hpp"
#include "corrosim/rust_layer.hpp"
#include "corrosim/simulator.hpp"
#include "corrosim/sweep.hpp"
#include "corrosim/transport.hpp"
#include "corrosim/version.hpp"

namespace py = pybind11;
using namespace corrosim;

namespace {

ParameterSet params_from_json_str(const std::string& text) {
    return config_from_json(nlohmann::json::parse(text));
}

std::string params_to_json_str(const ParameterSet& p) {
    return to_json(p).dump(2);
}

std::string summary_json_str(const SimulationOutcome& out,
                             const ParameterSet& p) {
    return summary_json(out, p).dump(2);
}

std::string series_csv_str(const SimulationOutcome& out,
                           const ParameterSet& p) {
    std::ostringstream os;
    write_series_csv(os, out, p);
    return os.str();
}

std::string safety_map_csv_str(const SweepResult& r, const ParameterSet& p) {
    std::ostringstream os;
    write_safety_map_csv(os, r, p);
    return os.str();
}

std::string sweep_summary_json_str(const SweepResult& r,
                                   const ParameterSet& p) {
    return sweep_summary_json(r, p).dump(2);
}

SweepGrid sweep_grid_from_json_str(const std::string& text) {
    return sweep_grid_from_json(nlohmann::json::parse(text));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Chemo-mechanical simulation of corrosion-induced cracking and "
              "corrosion concealment in porous reinforced concrete";
    m.attr("__version__") = version;

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<UnitError>(m, "UnitError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<DatasetError>(m, "DatasetError", PyExc_ValueError);

    // --- parameters -------------------------------------------------------
    py::class_<ConcreteParams>(m, "ConcreteParams")
        .def(py::init<>())
        .def_readwrite("porosity", &ConcreteParams::porosity)
        .def_readwrite("youngs_modulus", &ConcreteParams::youngs_modulus)
        .def_readwrite("poisson_ratio", &ConcreteParams::poisson_ratio)
        .def_readwrite("tensile_strength", &ConcreteParams::tensile_strength)
        .def_readwrite("water_diffusivity",
                       &ConcreteParams::water_diffusivity)
        .def_readwrite("diffusivity_exponent",
                       &ConcreteParams::diffusivity_exponent)
        .def_readwrite("transport_depth", &ConcreteParams::transport_depth)
        .def_readwrite("solid_density", &ConcreteParams::solid_density)
        .def("validate", &ConcreteParams::validate);

    py::class_<RustParams>(m, "RustParams")
        .def(py::init<>())
        .def_readwrite("expansion_ratio", &RustParams::expansion_ratio)
        .def_readwrite("youngs_modulus", &RustParams::youngs_modulus)
        .def_readwrite("poisson_ratio", &RustParams::poisson_ratio)
        .def_readwrite("diffusivity", &RustParams::diffusivity)
        .def_readwrite("rate_precipitation", &RustParams::rate_precipitation)
        .def_readwrite("rate_oxidation", &RustParams::rate_oxidation)
        .def_readwrite("oxygen_concentration",
                       &RustParams::oxygen_concentration)
        .def("rate_sum", &RustParams::rate_sum)
        .def("validate", &RustParams::validate);

    py::class_<SteelParams>(m, "SteelParams")
        .def(py::init<>())
        .def_readwrite("molar_mass", &SteelParams::molar_mass)
        .def_readwrite("density", &SteelParams::density)
        .def_readwrite("electrons", &SteelParams::electrons)
        .def_readwrite("faraday_constant", &SteelParams::faraday_constant)
        .def_readwrite("corrosion_current_density",
                       &SteelParams::corrosion_current_density)
        .def("validate", &SteelParams::validate);

    py::class_<Geometry>(m, "Geometry")
        .def(py::init<>())
        .def_readwrite("rebar_radius", &Geometry::rebar_radius)
        .def_readwrite("outer_radius", &Geometry::outer_radius)
        .def_readwrite("rebar_length", &Geometry::rebar_length)
        .def_property_readonly("cover", &Geometry::cover)
        .def("validate", &Geometry::validate);

    py::class_<SolverSettings>(m, "SolverSettings")
        .def(py::init<>())
        .def_readwrite("dt_cor_max", &SolverSettings::dt_cor_max)
        .def_readwrite("pressure_match_tol",
                       &SolverSettings::pressure_match_tol)
        .def_readwrite("t_cor_max", &SolverSettings::t_cor_max)
        .def_readwrite("fd_verify_every", &SolverSettings::fd_verify_every)
        .def_readwrite("grid_n", &SolverSettings::grid_n)
        .def_readwrite("kf_step_tol", &SolverSettings::kf_step_tol)
        .def("validate", &SolverSettings::validate);

    py::class_<ParameterSet>(m, "ParameterSet")
        .def(py::init<>())
        .def_readwrite("concrete", &ParameterSet::concrete)
        .def_readwrite("rust", &ParameterSet::rust)
        .def_readwrite("steel", &ParameterSet::steel)
        .def_readwrite("geometry", &ParameterSet::geometry)
        .def_readwrite("solver", &ParameterSet::solver)
        .def_readonly("provenance", &ParameterSet::provenance)
        .def("validate", &ParameterSet::validate)
        .def("to_json", &params_to_json_str);

    m.def("default_parameters", &default_parameters);
    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_from_json", &params_from_json_str, py::arg("text"));
    m.def("porosity_from_density", &porosity_from_density,
          py::arg("rho_dry"), py::arg("rho_s"));
    m.def("density_from_porosity", &density_from_porosity, py::arg("phi"),
          py::arg("rho_s"));

    // --- transport --------------------------------------------------------
    py::class_<TransportState>(m, "TransportState")
        .def(py::init<>())
        .def_readwrite("t_cor", &TransportState::t_cor)
        .def_readwrite("escaped_moles_per_area",
                       &TransportState::escaped_moles_per_area)
        .def_readwrite("t_unc", &TransportState::t_unc)
        .def_readwrite("k_f", &TransportState::k_f)
        .def_readwrite("time", &TransportState::time);

    m.def("faraday_flux", &faraday_flux, py::arg("steel"));
    m.def("penetration_rate", &penetration_rate, py::arg("steel"));
    m.def("concrete_diffusivity", &concrete_diffusivity, py::arg("concrete"));
    m.def("flux_reduction_coefficient", &flux_reduction_coefficient,
          py::arg("t_cor"), py::arg("concrete"), py::arg("rust"));
    m.def("advance_transport", &advance_transport, py::arg("state"),
          py::arg("dt_cor"), py::arg("concrete"), py::arg("rust"),
          py::arg("steel"), py::arg("kf_step_tol") = 0.01);

    // --- rust layer thermodynamics -----------------------------------------
    py::enum_<V0Convention>(m, "V0Convention")
        .value("CorrodedSurfaceAnchored",
               V0Convention::CorrodedSurfaceAnchored)
        .value("OriginalInterfaceAnchored",
               V0Convention::OriginalInterfaceAnchored);

    m.def("bulk_modulus", &bulk_modulus, py::arg("rust"));
    m.def("confined_volume", &confined_volume, py::arg("u_c"),
          py::arg("t_cor"), py::arg("geometry"));
    m.def("unconstrained_volume", &unconstrained_volume, py::arg("t_unc"),
          py::arg("t_cor"), py::arg("geometry"),
          py::arg("convention") = V0Convention::CorrodedSurfaceAnchored);
    m.def("thermo_pressure", &thermo_pressure, py::arg("u_c"),
          py::arg("t_cor"), py::arg("t_unc"), py::arg("rust"),
          py::arg("geometry"),
          py::arg("convention") = V0Convention::CorrodedSurfaceAnchored);

    // --- cylinder mechanics -------------------------------------------------
    py::class_<MechanicalField>(m, "MechanicalField")
        .def_readonly("r", &MechanicalField::r)
        .def_readonly("u", &MechanicalField::u)
        .def_readonly("sigma_r", &MechanicalField::sigma_r)
        .def_readonly("sigma_theta", &MechanicalField::sigma_theta)
        .def_readonly("eps_cr", &MechanicalField::eps_cr)
        .def_readonly("crack_front", &MechanicalField::crack_front);

    py::class_<PressureDisplacementPoint>(m, "PressureDisplacementPoint")
        .def_readonly("u_c", &PressureDisplacementPoint::u_c)
        .def_readonly("p", &PressureDisplacementPoint::p)
        .def_readonly("p_n", &PressureDisplacementPoint::p_n)
        .def_readonly("r_c", &PressureDisplacementPoint::r_c)
        .def_readonly("saturated", &PressureDisplacementPoint::saturated);

    py::class_<FdOptions>(m, "FdOptions")
        .def(py::init<>())
        .def_readwrite("grid_n", &FdOptions::grid_n)
        .def_readwrite("max_sweeps", &FdOptions::max_sweeps)
        .def_readwrite("refine_front", &FdOptions::refine_front);

    py::class_<FdResult>(m, "FdResult")
        .def_readonly("point", &FdResult::point)
        .def_readonly("field", &FdResult::field)
        .def_readonly("sweeps", &FdResult::sweeps);

    m.def("crack_initiation_pressure", &crack_initiation_pressure,
          py::arg("geometry"), py::arg("concrete"));
    m.def("limit_pressure", &limit_pressure, py::arg("geometry"),
          py::arg("concrete"));
    m.def("nondimensional_pressure", &nondimensional_pressure, py::arg("p"),
          py::arg("geometry"), py::arg("concrete"));
    m.def("elastic_lame", &elastic_lame, py::arg("p"), py::arg("geometry"),
          py::arg("concrete"), py::arg("grid_n") = 200);
    m.def("elastic_inner_displacement", &elastic_inner_displacement,
          py::arg("p"), py::arg("geometry"), py::arg("concrete"));
    m.def("cracked_point", &cracked_point, py::arg("r_c"),
          py::arg("geometry"), py::arg("concrete"));
    m.def("cracked_field", &cracked_field, py::arg("r_c"),
          py::arg("geometry"), py::arg("concrete"), py::arg("grid_n") = 200);
    m.def("pressure_from_displacement", &pressure_from_displacement,
          py::arg("u_c"), py::arg("geometry"), py::arg("concrete"));
    m.def("fd_bvp_verify", &fd_bvp_verify, py::arg("u_c"),
          py::arg("geometry"), py::arg("concrete"),
          py::arg("options") = FdOptions{});

    // --- coupled simulation --------------------------------------------------
    py::class_<CorrosionState>(m, "CorrosionState")
        .def_readonly("time", &CorrosionState::time)
        .def_readonly("t_cor", &CorrosionState::t_cor)
        .def_readonly("t_unc", &CorrosionState::t_unc)
        .def_readonly("u_c", &CorrosionState::u_c)
        .def_readonly("p", &CorrosionState::p)
        .def_readonly("p_n", &CorrosionState::p_n)
        .def_readonly("k_f", &CorrosionState::k_f)
        .def_readonly("r_c", &CorrosionState::r_c);

    py::enum_<Termination>(m, "Termination")
        .value("ReachedCriterion", Termination::ReachedCriterion)
        .value("HorizonExhausted", Termination::HorizonExhausted)
        .value("Error", Termination::Error);

    py::class_<SimulationOutcome>(m, "SimulationOutcome")
        .def_readonly("series", &SimulationOutcome::series)
        .def_readonly("t_crit", &SimulationOutcome::t_crit)
        .def_readonly("T_crit", &SimulationOutcome::T_crit)
        .def_readonly("termination", &SimulationOutcome::termination)
        .def_readonly("message", &SimulationOutcome::message);

    py::class_<EquilibriumPoint>(m, "EquilibriumPoint")
        .def_readonly("u_c", &EquilibriumPoint::u_c)
        .def_readonly("p", &EquilibriumPoint::p)
        .def_readonly("r_c", &EquilibriumPoint::r_c)
        .def_readonly("saturated", &EquilibriumPoint::saturated);

    m.def("equilibrium_solve", &equilibrium_solve, py::arg("t_cor"),
          py::arg("t_unc"), py::arg("params"));
    m.def(
        "run_simulation",
        [](const ParameterSet& p) {
            py::gil_scoped_release release;
            return run_simulation(p);
        },
        py::arg("params"));
    m.def("concealment_time", &concealment_time, py::arg("outcome"),
          py::arg("steel"));
    m.def("series_csv", &series_csv_str, py::arg("outcome"),
          py::arg("params"));
    m.def("summary_json", &summary_json_str, py::arg("outcome"),
          py::arg("params"));

    // --- sweeps and calibration ---------------------------------------------
    py::enum_<AxisQuantity>(m, "AxisQuantity")
        .value("Porosity", AxisQuantity::Porosity)
        .value("DryDensity", AxisQuantity::DryDensity)
        .value("Cover", AxisQuantity::Cover)
        .value("RebarDiameter", AxisQuantity::RebarDiameter);

    py::class_<AxisSpec>(m, "AxisSpec")
        .def(py::init<>())
        .def_readwrite("quantity", &AxisSpec::quantity)
        .def_readwrite("min", &AxisSpec::min)
        .def_readwrite("max", &AxisSpec::max)
        .def_readwrite("count", &AxisSpec::count)
        .def_readwrite("log_scale", &AxisSpec::log_scale)
        .def("values", &AxisSpec::values);

    py::class_<SweepGrid>(m, "SweepGrid")
        .def(py::init<>())
        .def_readwrite("axes", &SweepGrid::axes)
        .def_readwrite("threshold", &SweepGrid::threshold)
        .def("validate", &SweepGrid::validate)
        .def("cell_count", &SweepGrid::cell_count);

    py::enum_<SafetyClass>(m, "SafetyClass")
        .value("AtRiskConcealed", SafetyClass::AtRiskConcealed)
        .value("CracksFirst", SafetyClass::CracksFirst)
        .value("Undetermined", SafetyClass::Undetermined)
        .value("Error", SafetyClass::Error);

    py::class_<SafetyCell>(m, "SafetyCell")
        .def_readonly("coords", &SafetyCell::coords)
        .def_readonly("t_crit", &SafetyCell::t_crit)
        .def_readonly("T_crit", &SafetyCell::T_crit)
        .def_readonly("classification", &SafetyCell::classification)
        .def_readonly("message", &SafetyCell::message);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("cells", &SweepResult::cells)
        .def_readonly("error_count", &SweepResult::error_count);

    m.def(
        "run_sweep",
        [](const SweepGrid& grid, const ParameterSet& p, int workers) {
            py::gil_scoped_release release;
            return run_sweep(grid, p, workers);
        },
        py::arg("grid"), py::arg("params"), py::arg("workers") = 0);
    m.def("safety_map_csv", &safety_map_csv_str, py::arg("result"),
          py::arg("params"));
    m.def("sweep_summary_json", &sweep_summary_json_str, py::arg("result"),
          py::arg("params"));
    m.def("sweep_grid_from_json", &sweep_grid_from_json_str,
          py::arg("text"));

    py::class_<ExponentialFit>(m, "ExponentialFit")
        .def_readonly("prefactor", &ExponentialFit::prefactor)
        .def_readonly("growth_rate", &ExponentialFit::growth_rate)
        .def_readonly("r_squared", &ExponentialFit::r_squared);

    m.def("exponential_fit", &exponential_fit, py::arg("phi"),
          py::arg("t_crit"));

    py::class_<CalibrationRecord>(m, "CalibrationRecord")
        .def(py::init<>())
        .def_readwrite("porosity", &CalibrationRecord::porosity)
        .def_readwrite("cover", &CalibrationRecord::cover)
        .def_readwrite("rebar_diameter", &CalibrationRecord::rebar_diameter)
        .def_readwrite("current_density", &CalibrationRecord::current_density)
        .def_readwrite("t_crit_observed", &CalibrationRecord::t_crit_observed)
        .def_readwrite("weight", &CalibrationRecord::weight);

    py::class_<CalibrationOptions>(m, "CalibrationOptions")
        .def(py::init<>())
        .def_readwrite("m_min", &CalibrationOptions::m_min)
        .def_readwrite("m_max", &CalibrationOptions::m_max)
        .def_readwrite("m_tol", &CalibrationOptions::m_tol)
        .def_readwrite("fit_rate_multiplier",
                       &CalibrationOptions::fit_rate_multiplier)
        .def_readwrite("rate_multiplier_min",
                       &CalibrationOptions::rate_multiplier_min)
        .def_readwrite("rate_multiplier_max",
                       &CalibrationOptions::rate_multiplier_max)
        .def_readwrite("workers", &CalibrationOptions::workers);

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("m", &CalibrationResult::m)
        .def_readonly("rate_multiplier", &CalibrationResult::rate_multiplier)
        .def_readonly("objective", &CalibrationResult::objective)
        .def_readonly("residuals", &CalibrationResult::residuals)
        .def_readonly("skipped_records",
                      &CalibrationResult::skipped_records);

    m.def(
        "fit_exponent",
        [](const std::vector<CalibrationRecord>& records,
           const ParameterSet& base, const CalibrationOptions& options) {
            py::gil_scoped_release release;
            return fit_exponent(records, base, options);
        },
        py::arg("records"), py::arg("base"),
        py::arg("options") = CalibrationOptions{});
    m.def("load_dataset", &load_dataset, py::arg("path"));
}
