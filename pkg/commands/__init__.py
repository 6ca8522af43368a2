"""
Command-line subcommands: simulate, spectrum and sweep.
"""

from .common import CONFIG_FILE_KEYS, build_run_config, parse_float_list, parse_model
from .simulate import cmd_simulate
from .spectrum import cmd_spectrum
from .sweep import cmd_sweep

__all__ = [
    "CONFIG_FILE_KEYS",
    "build_run_config",
    "parse_float_list",
    "parse_model",
    "cmd_simulate",
    "cmd_spectrum",
    "cmd_sweep"
]
