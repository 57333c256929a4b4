"""
CLI package initialization.
Contains the click command group and the experiment configuration.
"""
from .commands import InvalidInput, main
from .config import ExperimentConfig

__all__ = ['ExperimentConfig', 'InvalidInput', 'main']
