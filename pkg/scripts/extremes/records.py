# coding: utf-8
"""
Tempos e valores de recorde, padrões R_n / V_n e diagnósticos de crescimento.

tau_1 = 1 e tau_k = inf{j > tau_{k-1} : X_j > M_{j-1}} (desigualdade estrita).
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import special, stats

from scripts.extremes.errors import InputError
from scripts.extremes.maxima import record_mask
from scripts.extremes.pointproc import FULL_LINE, PointPattern1D

Z95 = float(stats.norm.ppf(0.975))


@dataclass(frozen=True)
class RecordSummary:
    taus: np.ndarray      # 1-based
    values: np.ndarray
    length: int

    def W(self, n) -> np.ndarray:
        """W(n) = #{k : tau_k <= n}; aceita escalar ou vetor."""
        out = np.searchsorted(self.taus, np.asarray(n), side="right")
        return int(out) if np.ndim(n) == 0 else out

    def to_frame(self, trial: int) -> pd.DataFrame:
        return pd.DataFrame({
            "trial": trial,
            "k": np.arange(1, len(self.taus) + 1),
            "tau_k": self.taus,
            "value_k": self.values,
        })


def record_times(xs: Sequence[float]) -> RecordSummary:
    arr = np.asarray(xs, dtype=float)
    idx = np.flatnonzero(record_mask(arr))
    taus = idx + 1
    taus.setflags(write=False)
    vals = arr[idx]
    vals.setflags(write=False)
    return RecordSummary(taus, vals, int(arr.size))


def extend_records(summary: RecordSummary, tail: Sequence[float]) -> RecordSummary:
    """Recordes da série concatenada summary + tail, sem guardar a série inteira."""
    arr = np.asarray(tail, dtype=float)
    if arr.size == 0:
        return summary
    # o máximo corrente é sempre o último recorde
    seen = np.maximum.accumulate(np.concatenate(([summary.values[-1]], arr)))
    idx = np.flatnonzero(arr > seen[:-1])
    taus = np.concatenate((summary.taus, summary.length + idx + 1))
    vals = np.concatenate((summary.values, arr[idx]))
    taus.setflags(write=False)
    vals.setflags(write=False)
    return RecordSummary(taus, vals, summary.length + int(arr.size))


def record_time_pattern(summary: RecordSummary, n: int) -> PointPattern1D:
    n = int(n)
    if summary.length < n:
        raise InputError(f"série com {summary.length} pontos; são necessários n={n}")
    taus = summary.taus[summary.taus <= n]
    return PointPattern1D((0.0, 1.0), taus / n)


def record_value_pattern(summary: RecordSummary, a_n: float, b_n: float, n: int,
                         horizon: Optional[float] = 1.0) -> PointPattern1D:
    """
    a_n (X_tau - b_n) para os recordes com tau <= horizon * n (None: todos).
    O V_n completo usa todos os recordes; um horizonte T finito só perde os
    valores acima de um nível que Y(T) ainda não passou (prob. G(nível)^T).
    """
    n = int(n)
    if summary.length < n:
        raise InputError(f"série com {summary.length} pontos; são necessários n={n}")
    if horizon is None:
        vals = summary.values
    else:
        if not horizon >= 1.0:
            raise InputError(f"horizonte deve ser >= 1 (recebido {horizon})")
        vals = summary.values[summary.taus <= horizon * n]
    return PointPattern1D(FULL_LINE, a_n * (vals - b_n))


def harmonic_number(n: int) -> float:
    """H_n = sum_{j<=n} 1/j, média exata de W_n para séries iid contínuas."""
    return float(special.digamma(n + 1) + np.euler_gamma)


def log_checkpoints(length: int, base: int = 10) -> List[int]:
    """Checkpoints 10, 100, ... <= length, mais o próprio length."""
    out = []
    c = base
    while c < length:
        out.append(c)
        c *= base
    out.append(int(length))
    return out


def _mean_ci(x: np.ndarray):
    x = x[np.isfinite(x)]
    if x.size == 0:
        return math.nan, math.nan, math.nan
    m = float(x.mean())
    if x.size < 2:
        return m, math.nan, math.nan
    half = Z95 * float(x.std(ddof=1)) / math.sqrt(x.size)
    return m, m - half, m + half


def growth_diagnostics(summaries: Sequence[RecordSummary], checkpoints: Sequence[int], ks: Sequence[int] = (5, 10)) -> pd.DataFrame:
    """
    W_n / log n nos checkpoints e tau_k^{1/k} (média e mediana), com IC de 95%
    por aproximação normal. Os limites (1 e e) são conjecturais para mapas:
    a tabela é diagnóstico, não asserção.
    """
    if not summaries:
        raise InputError("nenhum trial")
    rows = []
    for c in checkpoints:
        if c < 2:
            continue
        w = np.array([s.W(c) for s in summaries], dtype=float)
        ratio = w / math.log(c)
        m, lo, hi = _mean_ci(ratio)
        rows.append({
            "stat": "W_n/log_n", "index": int(c), "mean": m, "ci_lo": lo, "ci_hi": hi,
            "median": float(np.median(ratio)), "mean_W": float(w.mean()), "harmonic": harmonic_number(c),
            "trials": int(w.size),
        })
    for k in ks:
        vals = np.array([s.taus[k - 1] ** (1.0 / k) if len(s.taus) >= k else math.nan for s in summaries])
        m, lo, hi = _mean_ci(vals)
        finite = vals[np.isfinite(vals)]
        rows.append({
            "stat": "tau_k^(1/k)", "index": int(k), "mean": m, "ci_lo": lo, "ci_hi": hi,
            "median": float(np.median(finite)) if finite.size else math.nan,
            "mean_W": math.nan, "harmonic": math.nan, "trials": int(finite.size),
        })
    return pd.DataFrame(rows)
