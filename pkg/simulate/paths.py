import logging
import multiprocessing as mp

import numpy as np
from tqdm import tqdm

from simulate.config import PathEnsemble
from simulate.samplers import path_rng, sample_subordinator, draw_noise, fgn_from_noise, noise_plan
from utils.utils import worker_count

logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 1024


def simulate_chunk(config, start, stop):
    """Paths ``start..stop-1`` of the ensemble; path i only reads its own (seed, i) stream."""
    hurst = config.params.hurst()
    subordinators = np.empty(stop - start)
    noises = []
    for row, index in enumerate(range(start, stop)):
        rng = path_rng(config.seed, index)
        subordinators[row] = sample_subordinator(config.params.beta, rng)
        noises.append(draw_noise(hurst, config.n_steps, config.d, rng))

    increments = fgn_from_noise(hurst, config.n_steps, config.dt, np.stack(noises))
    paths = np.zeros((stop - start, config.d, config.n_steps + 1))
    paths[:, :, 1:] = np.cumsum(increments, axis=-1)
    paths *= np.sqrt(subordinators)[:, None, None]
    return paths


def sample_paths(config, workers=None, chunk_size=DEFAULT_CHUNK, progress=False):
    """Sample a PathEnsemble: each path is sqrt(Y) (W_1, ..., W_d) with one subordinator Y per path.

    Chunks are fixed by ``chunk_size`` and every path has its own random
    stream, so the result does not depend on the number of workers.
    """
    bounds = [(start, min(start + chunk_size, config.n_paths)) for start in range(0, config.n_paths, chunk_size)]
    n_workers = min(worker_count(workers), len(bounds))
    logger.info(f"sampling {config.n_paths} paths x {config.d} dims x {config.n_steps} steps "
                f"({noise_plan(config.params.hurst(), config.n_steps)} noise) on {n_workers} worker(s)")

    if n_workers <= 1:
        results = [simulate_chunk(config, start, stop)
                   for start, stop in tqdm(bounds, desc="[simulate]", disable=not progress)]
    else:
        pool = mp.Pool(n_workers)
        jobs = [pool.apply_async(simulate_chunk, args=(config, start, stop)) for start, stop in bounds]
        pool.close()
        results = [job.get() for job in tqdm(jobs, desc="[simulate]", disable=not progress)]
        pool.join()
    return PathEnsemble(config, np.concatenate(results, axis=0))
