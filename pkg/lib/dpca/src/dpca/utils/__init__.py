"""
Utils Library
Data I/O, run logging and seeded random streams.
"""

from .data_io import load_json, read_jsonl, save_dataframe, save_json, write_jsonl
from .rng import derive_seed, generator_seed, substream
from .run_log import RunLog

__all__ = [
    # Data I/O
    "save_json",
    "load_json",
    "read_jsonl",
    "write_jsonl",
    "save_dataframe",
    # Run log
    "RunLog",
    # Random streams
    "substream",
    "derive_seed",
    "generator_seed",
]
