"""
Configuration module for the EqM action decoder.
"""
from .config import Config, config

__all__ = ["Config", "config"]
