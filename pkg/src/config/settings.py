"""
Settings for the rjd-nest project.

Every value can be overridden through the environment or a `.env` file
next to the working directory (read by python-decouple).
"""

import logging.config
from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Default directory for CLI artefacts (one sub-directory per invocation)
OUTPUT_DIR = Path(config("RJD_OUTPUT_DIR", default="runs"))

# Nested sampling defaults
NUM_LIVE = config("RJD_NUM_LIVE", cast=int, default=400)
BOOTSTRAP_ROUNDS = config("RJD_BOOTSTRAP_ROUNDS", cast=int, default=30)
TERMINATION_FRAC = config("RJD_TERMINATION_FRAC", cast=float, default=0.01)

# Above this many K*d cost units the reference radius is only refreshed
# every ceil(K/10) iterations.
RADIUS_COST_LIMIT = config("RJD_RADIUS_COST_LIMIT", cast=int, default=10_000)

# Reporting
BINS_PER_DECADE = config("RJD_BINS_PER_DECADE", cast=int, default=10)

# Logging
LOG_LEVEL = config("RJD_LOG_LEVEL", default="INFO")
LOG_INTERVAL = config("RJD_LOG_INTERVAL", cast=int, default=1000)

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "apps": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
    },
}


def configure_logging(level=None):
    """
    Apply the LOGGING dictionary.

    Args:
        level (str, optional): Overrides RJD_LOG_LEVEL for the `apps` logger.
    """
    logging_config = {**LOGGING, "loggers": {**LOGGING["loggers"]}}
    if level:
        logging_config["loggers"]["apps"] = {
            **logging_config["loggers"]["apps"],
            "level": level.upper(),
        }
    logging.config.dictConfig(logging_config)
