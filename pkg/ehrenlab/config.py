#!/usr/bin/env python3
"""
Runtime configuration for ehrenlab
"""

import os
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from dotenv import load_dotenv

from ehrenlab.exceptions import ConfigurationError

# Load settings from .env
load_dotenv()


def _env_bool(key: str, default: str) -> bool:
    return os.getenv(key, default).lower() in ('true', '1', 'yes', 'on')


class BaseConfig:
    """Base configuration with safe defaults"""

    # ================================
    # LOGGING
    # ================================

    LOG_LEVEL = os.getenv('EHRENLAB_LOG_LEVEL', 'INFO')
    LOG_DIR = os.getenv('EHRENLAB_LOG_DIR', 'logs')
    LOG_TO_FILE = _env_bool('EHRENLAB_LOG_TO_FILE', 'False')
    LOG_MAX_SIZE = int(os.getenv('EHRENLAB_LOG_MAX_SIZE', 10485760))  # 10MB
    LOG_BACKUP_COUNT = int(os.getenv('EHRENLAB_LOG_BACKUP_COUNT', 5))

    # ================================
    # OUTPUT AND WORKERS
    # ================================

    OUTPUT_DIR = os.getenv('EHRENLAB_OUTPUT_DIR', 'results')
    MAX_WORKERS = int(os.getenv('EHRENLAB_MAX_WORKERS', os.cpu_count() or 1))

    # ================================
    # RUN GUARDS
    # ================================

    # Edge density allowed relative to the peak
    CLEARANCE_RATIO = float(os.getenv('EHRENLAB_CLEARANCE_RATIO', 1e-10))
    # Amplitude growth relative to the initial maximum
    BLOWUP_FACTOR = float(os.getenv('EHRENLAB_BLOWUP_FACTOR', 1e6))
    # RK4 reach on the imaginary axis
    RK4_STABILITY_REACH = float(os.getenv('EHRENLAB_RK4_STABILITY_REACH', 2.8))

    # ================================
    # NUMERICS
    # ================================

    NODE_EPSILON = float(os.getenv('EHRENLAB_NODE_EPSILON', 1e-12))
    SUPPORT_FRACTION = float(os.getenv('EHRENLAB_SUPPORT_FRACTION', 1e-6))
    FD_SAFETY = float(os.getenv('EHRENLAB_FD_SAFETY', 2.0))
    FD_FLOOR = float(os.getenv('EHRENLAB_FD_FLOOR', 1e-9))
    CROSS_SCHEME_REFINEMENT = int(os.getenv('EHRENLAB_CROSS_SCHEME_REFINEMENT', 4))
    # Fastest growth (per unit time) allowed for ripples under the filtered current term
    DG_GROWTH_RATE = float(os.getenv('EHRENLAB_DG_GROWTH_RATE', 10.0))

    @classmethod
    def validate(cls):
        """Validate configuration values"""
        errors = []
        warnings = []

        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f"EHRENLAB_LOG_LEVEL invalid: {cls.LOG_LEVEL}")

        if cls.MAX_WORKERS < 1:
            errors.append("EHRENLAB_MAX_WORKERS must be >= 1")

        if not 0 < cls.CLEARANCE_RATIO < 1:
            errors.append("EHRENLAB_CLEARANCE_RATIO must lie in (0, 1)")

        if cls.BLOWUP_FACTOR <= 1:
            errors.append("EHRENLAB_BLOWUP_FACTOR must be > 1")

        if not 0 < cls.RK4_STABILITY_REACH <= 2 * 2 ** 0.5:
            errors.append("EHRENLAB_RK4_STABILITY_REACH must lie in (0, 2.83]")

        if cls.NODE_EPSILON < 0:
            errors.append("EHRENLAB_NODE_EPSILON must be >= 0")

        if cls.FD_SAFETY < 1:
            errors.append("EHRENLAB_FD_SAFETY must be >= 1")

        if cls.CROSS_SCHEME_REFINEMENT < 1:
            errors.append("EHRENLAB_CROSS_SCHEME_REFINEMENT must be >= 1")

        if not cls.DG_GROWTH_RATE > 0:
            errors.append("EHRENLAB_DG_GROWTH_RATE must be > 0")

        if cls.LOG_TO_FILE and not Path(cls.LOG_DIR).parent.exists():
            warnings.append(f"LOG_DIR parent does not exist: {cls.LOG_DIR}")

        if cls.NODE_EPSILON == 0:
            warnings.append("NODE_EPSILON is 0: velocity field is singular at nodes")

        return {
            'errors': errors,
            'warnings': warnings,
            'valid': len(errors) == 0
        }


class DevelopmentConfig(BaseConfig):
    """Development configuration"""

    LOG_LEVEL = os.getenv('EHRENLAB_LOG_LEVEL', 'DEBUG')


class TestingConfig(BaseConfig):
    """Configuration for tests"""

    TESTING = True
    LOG_TO_FILE = False
    MAX_WORKERS = 1


# ================================
# CONFIGURATION SELECTION
# ================================

config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'default': BaseConfig
}


def get_config(env: str = None):
    """Return the configuration class for the environment"""
    if env is None:
        env = os.getenv('EHRENLAB_ENV', 'default')

    config_class = config.get(env, config['default'])

    validation = config_class.validate()

    if not validation['valid']:
        error_msg = "Configuration errors found:\n"
        for error in validation['errors']:
            error_msg += f"  - {error}\n"
        raise ConfigurationError(error_msg)

    for warning in validation['warnings']:
        logging.warning(f"Configuration: {warning}")

    return config_class


def setup_logging(config_obj=None):
    """Configure logging from the configuration"""
    if config_obj is None:
        config_obj = get_config()

    log_level = getattr(logging, config_obj.LOG_LEVEL.upper(), logging.INFO)

    handlers = [logging.StreamHandler()]
    if config_obj.LOG_TO_FILE:
        Path(config_obj.LOG_DIR).mkdir(parents=True, exist_ok=True)
        handlers.append(RotatingFileHandler(
            os.path.join(config_obj.LOG_DIR, 'ehrenlab.log'),
            maxBytes=config_obj.LOG_MAX_SIZE,
            backupCount=config_obj.LOG_BACKUP_COUNT
        ))

    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )
