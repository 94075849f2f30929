"""
Configuration settings for the Discrepancy Laboratory
"""

import os
from pathlib import Path

from dotenv import load_dotenv


class Config:
    """Configuration class for the discrepancy laboratory"""

    def __init__(self):
        load_dotenv()

        # Base directory
        self.BASE_DIR = Path(os.getenv("DISCLAB_HOME", str(Path(__file__).parent)))
        self.CACHE_DIR = self.BASE_DIR / "cache"
        self.OUTPUT_DIR = self.BASE_DIR / "output"
        self.LOGS_DIR = self.BASE_DIR / "logs"

        # Create directories
        self.BASE_DIR.mkdir(parents=True, exist_ok=True)
        self.CACHE_DIR.mkdir(exist_ok=True)
        self.OUTPUT_DIR.mkdir(exist_ok=True)
        self.LOGS_DIR.mkdir(exist_ok=True)

        # Worker settings
        default_threads = min(8, os.cpu_count() or 1)
        self.THREADS = max(1, int(os.getenv("DISCLAB_THREADS", default_threads)))
        self.SHOW_PROGRESS = os.getenv("DISCLAB_PROGRESS", "1") != "0"

        # Body construction
        self.MAX_CIRCUMRADIUS = 0.45  # every dilate lambda*C, lambda <= 1, fits a torus cell

        # Profile and spectrum sampling
        self.PROFILE_NODES = 2 ** 16
        self.SPECTRUM_OVERSAMPLE = 8
        self.PARSEVAL_OVERSAMPLE = 16
        self.OMEGA2_GRID_POINTS = 64

        # Verifier settings
        self.TEST_CEILING = 100.0
        self.PODKORYTOV_SLACK = 1e-6
        self.CASSELS_C3 = 4.0
        self.CASSELS_RU = 2.0

        # Discrepancy engines
        self.MC_SAMPLES = 100_000
        self.MC_BLOCK_SIZE = 4096
        self.POLICY_INITIAL_RADIUS = 8.0
        self.POLICY_GROWTH = 1.25
        self.POLICY_EPS_REL = 1e-3
        self.POLICY_WINDOW = 3
        self.POLICY_MAX_RADIUS = 128.0

        # Experiment settings
        self.SLOPE_TOLERANCE = 0.08
        self.ENVELOPE_SLOPE_FLOOR = -0.05
        self.CHORD_RATIO_WINDOW = 10.0

        self.VERSION = "0.3.0"
