"""
Unit tests for configuration module.

Tests environment variable loading, validation, and error handling.
"""

import os
from unittest.mock import patch

import pytest

from config.settings import DEFAULT_DIGITS, ConfigurationError, Settings


class TestSettings:
    """Test suite for Settings class."""

    @patch.dict(os.environ, {}, clear=True)
    def test_settings_defaults(self):
        """Test defaults when no environment variables are set."""
        settings = Settings()

        assert settings.digits == DEFAULT_DIGITS == 30
        assert settings.brute_force_cap == 14
        assert settings.log_level == "WARNING"

    @patch.dict(os.environ, {"LUKAS_DIGITS": "60"})
    def test_custom_digits(self):
        """Test that LUKAS_DIGITS is read from the environment."""
        assert Settings().digits == 60

    @patch.dict(os.environ, {"LUKAS_DIGITS": ""})
    def test_empty_digits_uses_default(self):
        """An empty variable counts as unset."""
        assert Settings().digits == DEFAULT_DIGITS

    @patch.dict(os.environ, {"LUKAS_DIGITS": "thirty"})
    def test_non_integer_digits(self):
        """Test that a non-integer LUKAS_DIGITS raises ConfigurationError."""
        with pytest.raises(ConfigurationError) as exc_info:
            Settings()

        assert "LUKAS_DIGITS" in str(exc_info.value)
        assert "integer" in str(exc_info.value)

    @pytest.mark.parametrize("digits", ["14", "1001"])
    def test_validate_digits_out_of_range(self, digits):
        """Test validation fails outside 15..1000 digits."""
        with patch.dict(os.environ, {"LUKAS_DIGITS": digits}):
            settings = Settings()

        with pytest.raises(ConfigurationError) as exc_info:
            settings.validate()

        assert "between 15 and 1000" in str(exc_info.value)

    @patch.dict(os.environ, {}, clear=True)
    def test_validate_bad_log_level(self):
        """Test validation fails for an unknown log level."""
        settings = Settings(log_level="LOUD")

        with pytest.raises(ConfigurationError) as exc_info:
            settings.validate()

        assert "LOUD" in str(exc_info.value)

    @patch.dict(os.environ, {"LUKAS_DIGITS": "1000"})
    def test_validate_success(self):
        """Test successful validation with valid settings."""
        settings = Settings(log_level="debug")

        assert settings.validate() is True
