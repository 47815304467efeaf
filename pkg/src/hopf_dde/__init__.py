"""Hopf bifurcation analysis of a delayed P53-MDM2 feedback model.

Library layout:

- model: parameters, Hill nonlinearity, right-hand side
- equilibrium: positive steady states via the reduced polynomial
- stability: linearization, characteristic coefficients, crossing
  frequencies, critical delays, transversality
- normal_form: center-manifold reduction, first Lyapunov coefficient,
  bifurcation classification
- simulation: method-of-steps RK4, histories, orbit reconstruction
- pipeline/report/cli: orchestration and deterministic text outputs
"""

from .config import AnalysisConfig, SimSpec, SweepSpec, load_config
from .equilibrium import (Equilibrium, build_equilibrium, equilibrium_poly_coeffs,
                          find_equilibria, find_positive_roots)
from .errors import (ConfigError, ConvergenceError, DivergenceError, DomainError,
                     HopfDdeError, NumericalError, SingularSystemError)
from .model import (IX1, IX2, IY1, IY2, PRESETS, STATE_NAMES, ModelParams,
                    hill_derivs, hill_eval, rhs)
from .normal_form import (Eigenpair, FormulaVariants, NormalForm,
                          compute_eigenpair, compute_normal_form, g_cubic,
                          g_quadratic, hopf_quantities, solve_E_vectors)
from .pipeline import BranchResult, RunResult, analyze_params, run_analysis
from .report import parse_report, render_report
from .simulation import (History, Trajectory, integrate, make_z_path,
                         oscillation_summary, reconstruct_center_manifold,
                         upward_crossings)
from .stability import (CharCoeffs, HopfPoint, LinearPair, char_coeffs,
                        characteristic_residual, classify_stability,
                        critical_delays, first_hopf, hopf_candidates,
                        hopf_point, linearize, omega_candidates,
                        routh_hurwitz_stable, transversality,
                        transversality_closed_form)

__version__ = "0.1.0"
