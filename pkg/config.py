"""
Runtime settings read from the environment (and a local .env file).
"""
import os

from dotenv import load_dotenv

from errors import ConfigurationError

load_dotenv()

DEFAULT_STEPS = os.getenv('QSG_DEFAULT_STEPS', '10000')
LOG_LEVEL = os.getenv('QSG_LOG_LEVEL', 'WARNING')
TRAJECTORY_POINTS = os.getenv('QSG_TRAJECTORY_POINTS', '1001')


def env_int(name: str, default: str, minimum: int) -> int:
    """
    Parse an integer setting, re-reading the environment so overrides made
    after import are honoured.

    Raises:
        ConfigurationError: value is not an integer or is below minimum
    """
    raw = os.getenv(name, default)
    try:
        value = int(str(raw).strip())
    except ValueError:
        raise ConfigurationError(f"{name}={raw!r} is not an integer") from None
    if value < minimum:
        raise ConfigurationError(f"{name}={value} is below the minimum {minimum}")
    return value


def default_steps() -> int:
    return env_int('QSG_DEFAULT_STEPS', DEFAULT_STEPS, 100)


def trajectory_points() -> int:
    return env_int('QSG_TRAJECTORY_POINTS', TRAJECTORY_POINTS, 3)


def log_level() -> str:
    level = os.getenv('QSG_LOG_LEVEL', LOG_LEVEL).strip().upper()
    if level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        raise ConfigurationError(f"QSG_LOG_LEVEL={level!r} is not a logging level name")
    return level
