# CLI package initialization
from src.cli.cache import cache_spectrum, load_spectrum, lookup_spectrum
from src.cli.manifest import RunManifest, file_digest
from src.cli.output import format_float, to_csv, to_json, write_csv, write_json

__all__ = [
    "RunManifest", "file_digest",
    "cache_spectrum", "load_spectrum", "lookup_spectrum",
    "format_float", "to_csv", "to_json", "write_csv", "write_json",
]
