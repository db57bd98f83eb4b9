"""
Configuration settings for the co-growth toolkit
Defaults live in the dicts below; config.yaml next to this file overrides them.
"""

import os
import logging
from typing import Dict, Optional

import yaml

logger = logging.getLogger(__name__)

# Walk engines and ball construction
ENGINE_CONFIG = {
    'max_vertices': 10_000_000,     # size cap for tree balls and cover balls
    'work_cap': 100_000_000,        # step cap for brute-force enumerators
    'log_threshold_bits': 10_000,   # exact values above this size go to log space
}

# Power iteration and operator norms
SPECTRAL_CONFIG = {
    'power_tol': 1e-10,
    'power_max_iter': 100_000,
}

# Identity verification
IDENTITY_CONFIG = {
    'arithmetic_tol': 1e-10,   # added to every tail bound
    'singular_cond': 1e12,     # condition number treated as singular
    'spectrum_margin': 1e-9,   # relative margin required outside the spectrum
    'default_terms': 80,
}

# Growth-rate estimation
GROWTH_CONFIG = {
    'default_method': 'ratio2',
    'window_fraction': 0.1,    # final 10% of the series
    'bisection_tol': 1e-12,
}

# Terminal output
DISPLAY_CONFIG = {
    'use_colors': True,
    'float_digits': 12,
    'colors': {
        'pass': 'green',
        'fail': 'red',
        'header': 'cyan',
        'warning': 'yellow',
    },
}

_SECTIONS = {
    'engine': ENGINE_CONFIG,
    'spectral': SPECTRAL_CONFIG,
    'identity': IDENTITY_CONFIG,
    'growth': GROWTH_CONFIG,
    'display': DISPLAY_CONFIG,
}

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config.yaml')


def apply_overrides(overrides: Optional[Dict]):
    """Merge a parsed YAML mapping into the config dicts in place"""
    if not overrides:
        return
    for section, values in overrides.items():
        target = _SECTIONS.get(section)
        if target is None:
            logger.warning(f"Ignoring unknown config section '{section}'")
            continue
        if not isinstance(values, dict):
            logger.warning(f"Config section '{section}' must be a mapping, got {type(values).__name__}")
            continue
        for key, value in values.items():
            if key not in target:
                logger.warning(f"Ignoring unknown config key '{section}.{key}'")
                continue
            target[key] = value


def load_config(path: str = DEFAULT_CONFIG_PATH) -> bool:
    """Load a YAML config file and apply it; returns False when the file is absent"""
    if not os.path.exists(path):
        return False
    with open(path, 'r') as file:
        apply_overrides(yaml.safe_load(file))
    logger.info(f"Loaded configuration from {path}")
    return True


# Load config file at module level
load_config()
