#!/usr/bin/env python3
"""
Experiment Runner Service
Schedules the cells of a sweep on a worker pool, assembles rows in config
order and writes the rows CSV and report JSON
"""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

from tqdm import tqdm

from src.cli.output import write_csv, write_json
from src.discrepancy.budget import body_for_sigma
from src.discrepancy.parseval import PARSEVAL_OVERSAMPLE, DilationAverager
from src.experiments.models import ExperimentConfig
from src.experiments.scaling import (body_for_config, budget_row, evaluate_cell, plan_cells, resolve_seed,
                                     summarize_budget, summarize_envelope, summarize_scaling)

logger = logging.getLogger(__name__)

ROW_COLUMNS = ["N", "D2", "err", "ratio", "generator", "size", "K", "L", "flagged", "seed", "engine"]
BUDGET_COLUMNS = ["N", "size", "K", "L", "S_G1", "S_G2", "S_G3", "S_G1_over_L", "S_G2_over_L", "S_G3_over_L",
                  "S_G1_normalized", "S_G2_normalized", "S_G3_normalized", "total"]


class ExperimentRunner:
    def __init__(self, config: ExperimentConfig, threads: int = 1, progress: bool = False,
                 oversample: int = PARSEVAL_OVERSAMPLE):
        self.config = resolve_seed(config)
        self.threads = max(1, threads)
        self.progress = progress
        self.oversample = oversample
        self.body = None
        self.averager: Optional[DilationAverager] = None
        self.rows: List[Dict[str, Any]] = []

    async def initialize(self) -> bool:
        """Build the body and the shared frequency table"""
        try:
            logger.info(f"Initializing experiment {self.config.name} ({self.config.kind})...")
            if self.config.kind == "budget":
                self.body = body_for_sigma(self.config.sigma)
            else:
                self.body = body_for_config(self.config)
            if self.config.kind == "budget" or self.config.engine == "parseval":
                self.averager = DilationAverager(self.body, self.config.lam, oversample=self.oversample,
                                                 threads=self.threads)
            logger.info(f"Experiment {self.config.name} initialized on {self.body!r}")
            return True
        except Exception as e:
            logger.error(f"Failed to initialize experiment {self.config.name}: {e}")
            return False

    def _jobs(self) -> List[tuple]:
        if self.config.kind == "budget":
            return [(budget_row, self.config, size, self.averager) for size in self.config.sizes]
        return [(evaluate_cell, self.config, self.body, cell["generator"], cell["size"], cell["seed"], self.averager)
                for cell in plan_cells(self.config)]

    async def run(self) -> Dict[str, Any]:
        """Run every cell; rows come back in config order whatever the completion order"""
        if self.body is None and not await self.initialize():
            raise RuntimeError(f"experiment {self.config.name} could not be initialized")

        loop = asyncio.get_running_loop()
        jobs = self._jobs()
        bar = tqdm(total=len(jobs), desc=self.config.name, disable=not self.progress)
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            futures = [loop.run_in_executor(executor, job[0], *job[1:]) for job in jobs]
            for future in futures:
                future.add_done_callback(lambda _: bar.update(1))
            self.rows = list(await asyncio.gather(*futures))
        bar.close()

        if self.config.kind == "scaling":
            report = summarize_scaling(self.config, self.rows).to_dict()
        elif self.config.kind == "envelope":
            report = summarize_envelope(self.rows, self.config.theoretical_exponent, self.config.slope_floor,
                                        self.config.model_dump(mode="json"))
        else:
            report = summarize_budget(self.config, self.rows)
        logger.info(f"Experiment {self.config.name} finished: {'PASS' if report['pass'] else 'FAIL'}")
        return report

    def write_outputs(self, report: Dict[str, Any], out_dir: Path) -> List[Path]:
        out_dir = Path(out_dir)
        columns = BUDGET_COLUMNS if self.config.kind == "budget" else ROW_COLUMNS
        rows_path = write_csv(out_dir / f"{self.config.name}_rows.csv", report["rows"], columns)
        report_path = write_json(out_dir / f"{self.config.name}_report.json", report)
        logger.info(f"Experiment outputs written to {out_dir}")
        return [rows_path, report_path]


def run_experiment(config: ExperimentConfig, threads: int = 1, progress: bool = False) -> Dict[str, Any]:
    runner = ExperimentRunner(config, threads=threads, progress=progress)
    return asyncio.run(runner.run())
