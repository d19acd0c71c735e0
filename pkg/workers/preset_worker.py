import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import List, Optional

from ehrenlab.config import get_config
from ehrenlab.services.experiments import run_experiment

logger = logging.getLogger(__name__)


def preset_task(name: str, out_dir: Optional[str]) -> dict:
    """Run a single preset; returns the report as a plain dict"""
    report = run_experiment(name, out_dir)
    return report.to_dict()


def _failed(name: str, error: Exception) -> dict:
    return {
        'preset': name,
        'passed': False,
        'criteria': [],
        'diagnostic': f"worker error: {type(error).__name__}: {error}",
    }


def run_presets(names: List[str], out_dir: Optional[str] = None,
                max_workers: Optional[int] = None) -> List[dict]:
    """
    Run presets in worker processes. Each preset is independent; the reports
    are collected here and returned in the order of `names`.
    """
    if max_workers is None:
        max_workers = get_config().MAX_WORKERS
    workers = max(1, min(max_workers, len(names)))

    reports = {}
    if workers == 1:
        for name in names:
            try:
                reports[name] = preset_task(name, out_dir)
            except Exception as e:
                logger.error(f"Preset {name} crashed: {str(e)}")
                reports[name] = _failed(name, e)
    else:
        logger.info(f"Running {len(names)} presets on {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(preset_task, name, out_dir): name for name in names}
            for future in as_completed(futures):
                name = futures[future]
                try:
                    reports[name] = future.result()
                except Exception as e:
                    logger.error(f"Preset {name} crashed: {str(e)}")
                    reports[name] = _failed(name, e)

    return [reports[name] for name in names]
