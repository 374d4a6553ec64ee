"""Static graphon games: Nash equilibria on graphons, closed forms, price of anarchy and finite-game studies."""

from ._core import (
    ConditionViolation,
    ConfigError,
    NonConvergence,
    convergence_study,
    eigenvalues,
    epsilon_nash,
    finite_nash,
    game_spec,
    grid_points,
    operator_norm,
    poa_closed_form,
    price_of_anarchy,
    resolvent,
    run,
    sample_graph,
    solve_nash,
)

__all__ = [
    "ConditionViolation",
    "ConfigError",
    "NonConvergence",
    "convergence_study",
    "eigenvalues",
    "epsilon_nash",
    "finite_nash",
    "game_spec",
    "grid_points",
    "operator_norm",
    "poa_closed_form",
    "price_of_anarchy",
    "resolvent",
    "run",
    "sample_graph",
    "solve_nash",
]
