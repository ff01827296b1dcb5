"""
Configuration management for the ascents toolkit.

Only LUKAS_DIGITS is read from the environment; a .env file in the working
directory is loaded first. Everything else is a constant or a CLI flag.
"""

import os

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

DEFAULT_DIGITS = 30
MIN_DIGITS = 15
MAX_DIGITS = 1000
BRUTE_FORCE_CAP = 14


class ConfigurationError(Exception):
    """Raised when configuration is missing or invalid."""

    pass


class Settings:
    """
    Toolkit settings.

    Optional environment variables:
    - LUKAS_DIGITS: significant decimal digits for asymptotic constants (default: 30)

    Everything else is fixed here or passed as a command line flag:
    - brute_force_cap: longest path the brute-force oracle will enumerate (14)
    - log_level: logging level (default: WARNING, CLI flag --log-level)
    """

    def __init__(self, log_level: str = "WARNING"):
        """
        Initialize settings from the environment.

        Raises:
            ConfigurationError: If LUKAS_DIGITS is not an integer
        """
        self.digits = self._get_int_env("LUKAS_DIGITS", DEFAULT_DIGITS)
        self.brute_force_cap = BRUTE_FORCE_CAP
        self.log_level = log_level

    def _get_int_env(self, key: str, default: int) -> int:
        """
        Retrieve an optional integer environment variable.

        Args:
            key: Environment variable name
            default: Value used when the variable is unset or empty

        Returns:
            Parsed integer value

        Raises:
            ConfigurationError: If the variable is set but not an integer
        """
        value = os.getenv(key)
        if not value:
            return default
        try:
            return int(value)
        except ValueError as e:
            raise ConfigurationError(
                f"{key} must be an integer, got {value!r}\n"
                f"Unset {key} to use the default of {default}."
            ) from e

    def validate(self) -> bool:
        """
        Check the digit range and the log level.

        Returns:
            True when both are acceptable

        Raises:
            ConfigurationError: On the first value out of range
        """
        if not MIN_DIGITS <= self.digits <= MAX_DIGITS:
            raise ConfigurationError(
                f"LUKAS_DIGITS must be between {MIN_DIGITS} and {MAX_DIGITS}, got {self.digits}"
            )

        if self.log_level.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ConfigurationError(f"Unknown log level: {self.log_level}")

        return True


def get_settings() -> Settings:
    """
    Create a fresh settings instance.

    Useful in tests where the environment is patched between calls.
    """
    return Settings()


# Global settings instance - initialized on first access
_settings: Settings | None = None


def settings() -> Settings:
    """Return the process-wide settings, created on first use."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings
