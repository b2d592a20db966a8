"""Driven two-level quantum Otto engine between a positive- and an
effective-negative-temperature reservoir.

The working medium is a qubit in a rotating in-plane magnetic field
with a linear frequency ramp plus a constant z-axis field.  The
package computes the expansion-stroke propagator by two independent
routes, the transition probability between the reservoir eigenbases,
the per-cycle work / heat / efficiency ledger (by direct simulation
and by closed forms), the l1 coherence generated in the work strokes,
and quenched disorder averages of the efficiency, plus a sweep runner
and CLI to tabulate all of it.
"""

__version__ = "0.1.0"

from .errors import DegeneracyError, EngineError, NumericsError, ParameterError
from .mat2 import (DensityOp, EigenPair, HermitianOp, UnitaryOp, conjugate,
                   dagger, eig_herm2, expm_i_herm2, mul, trace_prod)
from .model import EngineParams, h_cold, h_comp, h_exp, h_hot, nu_of_t
from .thermal import (SpinTemperature, beta_from_population, gibbs_state,
                      partition_function, population_from_state)
from .evolution import (PropagatorResult, RotatingFrameState,
                        adiabatic_connector, analytic_propagator_g1,
                        propagator_lab, propagator_rotating,
                        rotating_frame_trajectory, transition_probability)
from .cycle import (CycleResult, efficiency_advantage, efficiency_closed_form,
                    heat_cold_closed_form, heat_hot_closed_form,
                    otto_threshold, reservoir_energies, run_cycle,
                    run_cycle_trace, work_closed_form)
from .coherence import CoherenceReport, l1_coherence, stroke_coherence
from .disorder import (DisorderSpec, QuenchedResult, quenched_efficiency,
                       sample_delta)
from .sweep import (RunRecord, SweepSpec, emit_csv, emit_json, read_csv,
                    read_json, run_sweep, verify_dual_route)

__all__ = [
    "__version__",
    "EngineError", "ParameterError", "DegeneracyError", "NumericsError",
    "HermitianOp", "UnitaryOp", "DensityOp", "EigenPair",
    "eig_herm2", "expm_i_herm2", "mul", "dagger", "conjugate", "trace_prod",
    "EngineParams", "nu_of_t", "h_cold", "h_hot", "h_exp", "h_comp",
    "SpinTemperature", "beta_from_population", "population_from_state",
    "gibbs_state", "partition_function",
    "PropagatorResult", "RotatingFrameState", "propagator_lab",
    "propagator_rotating", "rotating_frame_trajectory",
    "analytic_propagator_g1", "transition_probability", "adiabatic_connector",
    "CycleResult", "run_cycle", "run_cycle_trace", "work_closed_form",
    "heat_hot_closed_form", "heat_cold_closed_form",
    "efficiency_closed_form", "efficiency_advantage", "otto_threshold",
    "reservoir_energies",
    "CoherenceReport", "l1_coherence", "stroke_coherence",
    "DisorderSpec", "QuenchedResult", "sample_delta", "quenched_efficiency",
    "SweepSpec", "RunRecord", "run_sweep", "emit_csv", "emit_json",
    "read_csv", "read_json", "verify_dual_route",
]
