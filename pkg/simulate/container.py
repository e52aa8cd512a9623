"""Flat binary ensemble file with a JSON sidecar.

Layout, little-endian: magic ``GGBM``, u16 version, the config record
(beta f64, alpha f64, d u32, n_steps u32, horizon f64, n_paths u64, seed u64),
then n_paths * d * (n_steps + 1) f64 values in row-major order.
"""
import os
import json
import struct

import numpy as np

from simulate.config import SimConfig, PathEnsemble
from utils.errors import ContainerError, GgbmError
from utils.utils import mkdir

MAGIC = b"GGBM"
VERSION = 1
HEADER = struct.Struct("<4sHddIIdQQ")


def sidecar_path(path):
    return f"{path}.json"


def save_ensemble(ens, path):
    c = ens.config
    mkdir(os.path.dirname(os.path.abspath(path)))
    header = HEADER.pack(MAGIC, VERSION, c.params.beta, c.params.alpha, c.d, c.n_steps, c.horizon, c.n_paths, c.seed)
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(ens.paths, dtype="<f8").tobytes())
    with open(sidecar_path(path), "w") as f:
        json.dump({"format": "GGBM", "version": VERSION, "config": c.to_dict(),
                   "shape": list(ens.paths.shape), "dtype": "<f8", "order": "C"}, f, indent=2, sort_keys=True)
    return path


def load_ensemble(path):
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < HEADER.size:
        raise ContainerError(f"{path}: file shorter than the {HEADER.size}-byte header")
    magic, version, beta, alpha, d, n_steps, horizon, n_paths, seed = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ContainerError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ContainerError(f"{path}: unsupported version {version}")
    try:
        config = SimConfig.from_dict(dict(beta=beta, alpha=alpha, d=d, n_steps=n_steps,
                                          horizon=horizon, n_paths=n_paths, seed=seed))
    except GgbmError as err:
        raise ContainerError(f"{path}: invalid config record ({err})") from err
    shape = (n_paths, d, n_steps + 1)
    expected = HEADER.size + 8 * n_paths * d * (n_steps + 1)
    if len(blob) != expected:
        raise ContainerError(f"{path}: {len(blob)} bytes, expected {expected} for shape {shape}")
    paths = np.frombuffer(blob, dtype="<f8", offset=HEADER.size).reshape(shape).astype(float)
    try:
        return PathEnsemble(config, paths)
    except GgbmError as err:
        raise ContainerError(f"{path}: {err}") from err
