# coding: utf-8
"""
Streams de números aleatórios por trial e execução em blocos.

- trial_rng(seed, stream, trial) -> Generator(Philox) com chave (seed, stream, trial)
- run_blocks(func, trials, block_size, n_jobs) -> lista de resultados na ordem dos trials

O layout dos blocos depende só de (trials, block_size), nunca de n_jobs,
então o resultado é o mesmo com 1 ou 4 workers.
"""

import os
from typing import Callable, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

# ids de stream fixos por finalidade; mudar um valor muda todos os resultados
STREAM_ORBIT = 0
STREAM_SAMPLER = 1
STREAM_THINNING = 2
STREAM_BOOTSTRAP = 3
STREAM_ORACLE = 4


def trial_rng(seed: int, stream: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(stream), int(trial)])
    return np.random.Generator(np.random.Philox(ss))


def trial_rngs(seed: int, stream: int, trials: Sequence[int]) -> List[np.random.Generator]:
    return [trial_rng(seed, stream, t) for t in trials]


def worker_count(requested: Optional[int] = None) -> int:
    """
    Número de workers: o pedido explícito, limitado por EXTREMA_THREADS.
    """
    cap_env = os.environ.get("EXTREMA_THREADS")
    cap = None
    if cap_env:
        try:
            cap = max(1, int(cap_env))
        except ValueError:
            print(f"[streams] EXTREMA_THREADS inválido ({cap_env!r}); ignorando")
    n = requested if requested and requested > 0 else (cap or 1)
    if cap is not None:
        n = min(n, cap)
    return n


def block_ranges(trials: int, block_size: int) -> List[range]:
    block_size = max(1, int(block_size))
    return [range(lo, min(lo + block_size, trials)) for lo in range(0, trials, block_size)]


def run_blocks(
    func: Callable[[range], list],
    trials: int,
    block_size: int,
    n_jobs: int = 1,
    desc: str = "trials",
    quiet: bool = False,
) -> list:
    """
    Executa func(range_de_trials) por bloco e concatena os resultados por trial.
    func deve devolver uma lista com um item por trial do bloco.
    """
    blocks = block_ranges(trials, block_size)
    it = tqdm(blocks, desc=desc, disable=quiet, leave=False)
    if n_jobs <= 1:
        parts = [func(b) for b in it]
    else:
        parts = Parallel(n_jobs=n_jobs)(delayed(func)(b) for b in it)
    out = []
    for part in parts:
        out.extend(part)
    return out
