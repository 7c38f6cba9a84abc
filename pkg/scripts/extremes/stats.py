# coding: utf-8
"""
Estimadores e testes que viram veredito pass/fail:
KS (uma e duas amostras), qui-quadrado de contagens Poisson, diagnóstico D'
por Monte Carlo, tabela de independência de blocos e oráculo de massa de cauda.
"""

import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats as sps

from scripts.extremes.errors import InputError
from scripts.extremes.observables import scaling, threshold
from scripts.extremes.streams import STREAM_BOOTSTRAP, STREAM_ORBIT, run_blocks, trial_rng, trial_rngs

MIN_KS_SAMPLES = 30
MIN_POISSON_COUNTS = 200
MIN_EXPECTED_PER_CELL = 5.0
# células de contagem até a probabilidade de cauda ficar abaixo disso
POISSON_TAIL_EPS = 1e-9
ORBIT_CELLS_PER_BLOCK = 4_000_000


def _samples(x, what="amostras") -> np.ndarray:
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.size < MIN_KS_SAMPLES:
        raise InputError(f"{what}: {arr.size} < {MIN_KS_SAMPLES} pontos")
    return arr


def ecdf(samples) -> Callable:
    res = sps.ecdf(_samples(samples))
    return res.cdf.evaluate


def ks_test(samples, cdf: Callable) -> Tuple[float, float]:
    """KS de uma amostra com p assintótico (série de Kolmogorov)."""
    r = sps.kstest(_samples(samples), cdf, method="asymp")
    return float(r.statistic), float(r.pvalue)


def ks_statistic(samples, cdf: Callable) -> float:
    return ks_test(samples, cdf)[0]


def ks_two_sample(a, b) -> Tuple[float, float]:
    r = sps.ks_2samp(_samples(a, "amostra a"), _samples(b, "amostra b"), method="asymp")
    return float(r.statistic), float(r.pvalue)


def poisson_count_test(counts, mean: float) -> Tuple[float, float]:
    """
    Qui-quadrado contra Poisson(mean). Células k = 0, 1, ... e cauda;
    junta da esquerda para a direita até cada célula esperar >= 5.
    """
    c = np.asarray(counts).reshape(-1)
    if c.size < MIN_POISSON_COUNTS:
        raise InputError(f"poisson_count_test exige >= {MIN_POISSON_COUNTS} contagens (recebido {c.size})")
    if not (math.isfinite(mean) and mean > 0.0):
        raise InputError(f"média deve ser > 0 (recebido {mean})")
    c = c.astype(np.int64)
    if np.any(c < 0):
        raise InputError("contagens negativas")
    total = c.size
    kmax = int(max(c.max(), sps.poisson.ppf(1.0 - POISSON_TAIL_EPS, mean), 1))
    observed = np.bincount(np.minimum(c, kmax), minlength=kmax + 1).astype(float)
    expected = total * sps.poisson.pmf(np.arange(kmax + 1), mean)
    expected[kmax] = total * sps.poisson.sf(kmax - 1, mean)

    cells_o: List[float] = []
    cells_e: List[float] = []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= MIN_EXPECTED_PER_CELL:
            cells_o.append(acc_o)
            cells_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0.0 or acc_o > 0.0:
        if cells_e:
            cells_o[-1] += acc_o
            cells_e[-1] += acc_e
        else:
            cells_o.append(acc_o)
            cells_e.append(acc_e)
    if len(cells_e) < 2:
        return 0.0, 1.0
    o = np.array(cells_o)
    e = np.array(cells_e)
    chi2 = float(np.sum((o - e) ** 2 / e))
    return chi2, float(sps.chi2.sf(chi2, len(cells_e) - 1))


def count_correlation(a, b) -> float:
    """Correlação de Pearson entre contagens; 0 se alguma é constante."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.std() == 0.0 or y.std() == 0.0:
        return 0.0
    return float(np.corrcoef(x, y)[0, 1])


def verdict(test: str, statistic: float, p_value: Optional[float], n: int, trials: int, seed: int,
            passed: bool, asserted: bool = True, **extra) -> Dict:
    rec = {
        "test": test,
        "statistic": None if statistic is None else float(statistic),
        "p_value": None if p_value is None else float(p_value),
        "n": int(n),
        "trials": int(trials),
        "seed": int(seed),
        "pass": bool(passed),
        "asserted": bool(asserted),
    }
    rec.update(extra)
    return rec


def orbit_block_size(length: int) -> int:
    return int(max(1, min(64, ORBIT_CELLS_PER_BLOCK // max(1, int(length)))))


# ---------------------------------------------------------------------------
# D' (recorrência de curto alcance)
# ---------------------------------------------------------------------------
def dprime_estimate(
    source,
    u: float,
    n: int,
    k_block: int,
    trials: int,
    seed: int,
    segment_length: Optional[int] = None,
    n_jobs: int = 1,
    bootstrap: int = 1000,
    quiet: bool = True,
) -> Tuple[float, float]:
    """
    n sum_{j=2}^{m} mu{X_1 > u, X_j > u}, m = floor(n/k), por média temporal em
    trechos estacionários (um por trial). Erro padrão por bootstrap dos trials.
    """
    n, k_block, trials = int(n), int(k_block), int(trials)
    m = n // k_block if k_block > 0 else 0
    if m < 2:
        raise InputError(f"n/k_block deve ser >= 2 (n={n}, k={k_block})")
    if trials < 2:
        raise InputError("dprime_estimate exige >= 2 trials")
    T = int(segment_length or n)
    length = T + m

    def work(block):
        X = source.series_block(length, trial_rngs(seed, STREAM_ORBIT, block))
        out = []
        for row in X:
            exc = row > u
            cum = np.concatenate(([0], np.cumsum(exc)))
            pos = np.flatnonzero(exc[:T])
            # parceiros j = i+1 .. i+m-1 (defasagens 1..m-1)
            partners = cum[pos + m] - cum[pos + 1]
            out.append((n * float(partners.sum()) / T, int(exc.sum())))
        return out

    res = run_blocks(work, trials, orbit_block_size(length), n_jobs=n_jobs, desc="dprime", quiet=quiet)
    est = np.array([r[0] for r in res])
    frac = sum(r[1] for r in res) / float(trials * length)
    if frac <= 0.0 or frac >= 1.0:
        raise InputError(f"limiar degenerado: frequência de excedência {frac}")
    rng = trial_rng(seed, STREAM_BOOTSTRAP, 0)
    idx = rng.integers(0, trials, size=(int(bootstrap), trials))
    se = float(est[idx].mean(axis=1).std(ddof=1))
    return float(est.mean()), se


# ---------------------------------------------------------------------------
# Independência de blocos
# ---------------------------------------------------------------------------
def _check_intervals(intervals: Sequence[Tuple[float, float]]):
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    for a, b in ivs:
        if not (0.0 <= a < b):
            raise InputError(f"intervalo inválido ({a}, {b})")
    for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
        if a2 < b1:
            raise InputError(f"intervalos sobrepostos ({a1}, {b1}) e ({a2}, {b2})")


def block_independence_test(
    source,
    intervals: Sequence[Tuple[float, float]],
    xs_levels: Sequence[float],
    n: int,
    trials: int,
    seed: int,
    n_jobs: int = 1,
    quiet: bool = True,
) -> pd.DataFrame:
    """
    Tabela com uma linha por intervalo (marginal) e uma linha "joint":
    empírico mu(cap_j {M(n I_j) <= u_n^(j)}) contra prod_j e^{-x_j (b_j - a_j)}.
    """
    if len(intervals) != len(xs_levels) or not intervals:
        raise InputError("um nível x_j por intervalo")
    _check_intervals(intervals)
    if any(not x > 0.0 for x in xs_levels):
        raise InputError("níveis x_j devem ser > 0")
    n, trials = int(n), int(trials)
    g = source.limit()
    u = [threshold(source.obs, g, n, float(x)) for x in xs_levels]
    slices = [(int(math.floor(n * a)), int(math.floor(n * b))) for a, b in intervals]
    length = max(hi for _, hi in slices)
    if any(hi <= lo for lo, hi in slices):
        raise InputError("intervalo sem índices para este n")

    def work(block):
        X = source.series_block(length, trial_rngs(seed, STREAM_ORBIT, block))
        return [tuple(bool(row[lo:hi].max() <= uj) for (lo, hi), uj in zip(slices, u)) for row in X]

    res = np.array(run_blocks(work, trials, orbit_block_size(length), n_jobs=n_jobs, desc="block-indep", quiet=quiet))
    rows = []
    for j, ((a, b), x) in enumerate(zip(intervals, xs_levels)):
        emp = float(res[:, j].mean())
        pred = math.exp(-float(x) * (b - a))
        rows.append({"event": f"I{j + 1}", "a": a, "b": b, "x": float(x), "u_n": u[j],
                     "empirical": emp, "predicted": pred, "abs_error": abs(emp - pred),
                     "stderr": math.sqrt(emp * (1.0 - emp) / trials)})
    joint = float(res.all(axis=1).mean())
    pred = math.exp(-sum(float(x) * (b - a) for (a, b), x in zip(intervals, xs_levels)))
    rows.append({"event": "joint", "a": math.nan, "b": math.nan, "x": math.nan, "u_n": math.nan,
                 "empirical": joint, "predicted": pred, "abs_error": abs(joint - pred),
                 "stderr": math.sqrt(joint * (1.0 - joint) / trials)})
    return pd.DataFrame(rows)


# ---------------------------------------------------------------------------
# Oráculo de cauda
# ---------------------------------------------------------------------------
def tail_mass_estimate(source, u: float, n: int, samples: int, seed: int, chunk: int = 100_000) -> Tuple[float, float]:
    """
    n mu{X_1 > u/a_n + b_n} estimado sobre `samples` estados estacionários,
    com erro padrão binomial. Compara com Q(u) da lei limite.
    """
    n, samples = int(n), int(samples)
    if samples < 1:
        raise InputError("samples deve ser >= 1")
    a_n, b_n = scaling(source.obs, n)
    level = u / a_n + b_n
    hits = 0
    drawn = 0
    trial = 0
    while drawn < samples:
        size = min(chunk, samples - drawn)
        row = source.series_block(size, [trial_rng(seed, STREAM_ORBIT, trial)])[0]
        hits += int(np.count_nonzero(row > level))
        drawn += size
        trial += 1
    p = hits / samples
    return n * p, n * math.sqrt(p * (1.0 - p) / samples)
