"""Small experiment configs for the suite and report tests."""

import pytest

from cphi.config import CphiConfig
from cphi.experiments import ExperimentConfig


@pytest.fixture
def settings():
    """Default workbench settings, independent of any config file."""
    return CphiConfig()


@pytest.fixture
def make_config(settings):
    """Build a resolved config from section overrides."""

    def build(**sections):
        return ExperimentConfig.model_validate({"schema_version": 1, **sections}).resolve(settings)

    return build
