import json
import logging
import os
from typing import List

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

MAX_PANELS_ENV = "FHT_MAX_PANELS"


class SpectralConfig(BaseModel):
    fit_order: int = Field(64, ge=1)
    recurrence_n_max: int = Field(64, ge=1)
    recurrence_t_max: float = Field(0.99, gt=0.0, lt=1.0)
    instability_ratio: float = Field(1e8, gt=1.0)


class QuadratureConfig(BaseModel):
    gauss_order: int = Field(15, ge=2)
    max_panels: int = Field(2 ** 16, ge=1)
    default_tol: float = Field(1e-11, ge=1e-13)
    breakpoint_guard: float = Field(1e-12, gt=0.0)


class NormsConfig(BaseModel):
    grid: int = Field(4096, ge=64)
    ladder_depth: int = Field(96, ge=1)
    ladder_per_octave: int = Field(4, ge=1)
    dyadic_levels: int = Field(20, ge=2)
    equivalence_bracket: float = Field(8.0, gt=1.0)


class AirfoilConfig(BaseModel):
    check_points: int = Field(201, ge=3)
    probe_points: int = Field(33, ge=3)
    probe_distances: List[float] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8]
    bounded_rel_change: float = Field(0.01, gt=0.0)
    growing_rel_increase: float = Field(0.10, gt=0.0)
    solver_tol: float = Field(1e-7, gt=0.0)


class VerificationConfig(BaseModel):
    workers: int = Field(1, ge=1)
    lower_bound_grid: int = Field(8192, ge=64)
    probe_cap: float = Field(5.0, gt=0.0)
    probe_ladder_octaves: int = Field(1000, ge=10)


class OutputConfig(BaseModel):
    significant_digits: int = Field(17, ge=1, le=17)
    tool_version: str = "1.0.0"


class ToolkitConfig(BaseModel):
    spectral: SpectralConfig = SpectralConfig()
    quadrature: QuadratureConfig = QuadratureConfig()
    norms: NormsConfig = NormsConfig()
    airfoil: AirfoilConfig = AirfoilConfig()
    verification: VerificationConfig = VerificationConfig()
    output: OutputConfig = OutputConfig()


def _apply_environment(config):
    override = os.environ.get(MAX_PANELS_ENV)
    if override:
        try:
            config.quadrature.max_panels = max(1, int(override))
            logger.info(f"[config] {MAX_PANELS_ENV} overrides panel budget: {config.quadrature.max_panels}")
        except ValueError:
            logger.warning(f"[config] Ignoring non-integer {MAX_PANELS_ENV}={override!r}")
    return config


def load_config(config_path="config.json"):
    """Load configuration from JSON file, falling back to defaults."""
    try:
        with open(config_path, "r") as f:
            config = ToolkitConfig(**json.load(f))
        logger.info(f"[config] Configuration loaded from {config_path}")
    except FileNotFoundError:
        logger.info(f"[config] {config_path} not found, using defaults")
        config = ToolkitConfig()
    except Exception as e:
        logger.warning(f"[config] Error loading configuration: {str(e)}; using defaults")
        config = ToolkitConfig()
    return _apply_environment(config)


_active = None


def get_config():
    """The process-wide configuration (defaults plus environment overrides)."""
    global _active
    if _active is None:
        _active = _apply_environment(ToolkitConfig())
    return _active


def set_config(config):
    global _active
    _active = config
    return config
