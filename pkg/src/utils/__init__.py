"""
Utils package initialization.
Contains logging, configuration, error types and process monitoring.
"""
from .config import Settings, read_config_file
from .errors import DatasetFormatError, DomainError, ValidationError
from .logger import AppLogger
from .monitor import PerformanceMonitor

__all__ = [
    'AppLogger',
    'DatasetFormatError',
    'DomainError',
    'PerformanceMonitor',
    'Settings',
    'ValidationError',
    'read_config_file',
]
