"""Collisional decoherence and its crossover with gravitational dephasing."""

from src.collisional.model import (
    ATMOSPHERIC_DENSITY_PER_CM3,
    CollisionalBath,
    CrossoverReport,
    atmospheric_ratio,
    collisional_time,
    collisional_visibility,
    compare_timescales,
    crossover_density,
    lambda_rate,
    matching_density,
    q2v_thermal,
)

__all__ = [
    "ATMOSPHERIC_DENSITY_PER_CM3",
    "CollisionalBath",
    "CrossoverReport",
    "atmospheric_ratio",
    "collisional_time",
    "collisional_visibility",
    "compare_timescales",
    "crossover_density",
    "lambda_rate",
    "matching_density",
    "q2v_thermal",
]
