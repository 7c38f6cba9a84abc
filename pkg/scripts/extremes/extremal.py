# coding: utf-8
"""
Processo extremal-G: CDFs finito-dimensionais e amostrador exato pela cadeia de saltos.

Cadeia de saltos a partir do estado y:
  - tempo de permanência ~ Exp(taxa Q(y));
  - novo estado x > y com Q(x) = Q(y) U, U uniforme;
  - Q(y) = 0 (topo do domínio) encerra o caminho.
"""

import math
from typing import List, Sequence

import numpy as np

from scripts.extremes.errors import InputError
from scripts.extremes.maxima import CadlagStepPath
from scripts.extremes.observables import GevLimit, gev_Q, gev_Q_inverse
from scripts.extremes.pointproc import PointPattern1D

DEFAULT_T_START = 0.05


def fdd_cdf(g: GevLimit, times: Sequence[float], values: Sequence[float]) -> float:
    """
    P(Y(t_1) <= u_1, ..., Y(t_k) <= u_k)
      = prod_i G^{t_i - t_{i-1}}(min_{j >= i} u_j),  t_0 = 0.
    """
    t = np.asarray(times, dtype=float)
    u = np.asarray(values, dtype=float)
    if t.size == 0 or t.size != u.size:
        raise InputError("times e values devem ter o mesmo tamanho (>= 1)")
    if t[0] <= 0.0 or np.any(np.diff(t) <= 0.0):
        raise InputError("times devem ser positivos e estritamente crescentes")
    suffix_min = np.minimum.accumulate(u[::-1])[::-1]
    dt = np.diff(np.concatenate(([0.0], t)))
    # a CDF do scipy cobre a reta toda (0 abaixo e 1 acima do suporte)
    return float(np.prod(np.power(g.dist.cdf(suffix_min), dt)))


def _open_unit(rng: np.random.Generator) -> float:
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u


def sample_path(
    g: GevLimit,
    t_start: float = DEFAULT_T_START,
    t_end: float = 1.0,
    rng: np.random.Generator = None,
) -> CadlagStepPath:
    if rng is None:
        raise InputError("sample_path exige um gerador explícito")
    if not (0.0 < t_start < t_end):
        raise InputError(f"exige 0 < t_start < t_end (recebido {t_start}, {t_end})")
    # Y(t_start) ~ G^{t_start}  <=>  t_start Q(Y) ~ Exp(1)
    q = rng.exponential() / t_start
    y0 = float(gev_Q_inverse(g, q))
    times: List[float] = []
    values: List[float] = []
    t = t_start
    while q > 0.0 and math.isfinite(q):
        t += rng.exponential(1.0 / q)
        if t > t_end:
            break
        q *= _open_unit(rng)
        y = float(gev_Q_inverse(g, q))
        if y <= (values[-1] if values else y0):
            continue  # incremento abaixo da resolução do float
        times.append(t)
        values.append(y)
    return CadlagStepPath((t_start, t_end), times, values, y0)


def sample_paths(g: GevLimit, t_start: float, t_end: float, rngs: Sequence[np.random.Generator]) -> List[CadlagStepPath]:
    return [sample_path(g, t_start, t_end, r) for r in rngs]


def conditional_no_jump_prob(g: GevLimit, y: float, t: float) -> float:
    """P(Y(s + t) = Y(s) | Y(s) = y) = G(y)^t = exp(-t Q(y))."""
    if not t >= 0.0:
        raise InputError(f"t deve ser >= 0 (recebido {t})")
    q = float(gev_Q(g, y))
    if t == 0.0:
        return 1.0
    return math.exp(-t * q)


def inverse_cdf(g: GevLimit, level: float, t: float) -> float:
    """Lei da inversa: P(Y<-(level) <= t) = P(Y(t) > level) = 1 - G(level)^t."""
    if not t >= 0.0:
        raise InputError(f"t deve ser >= 0 (recebido {t})")
    return 1.0 - float(g.dist.cdf(level)) ** t


def jump_value_pattern(path: CadlagStepPath) -> PointPattern1D:
    """Níveis visitados pelo caminho (valor inicial + valores dos saltos)."""
    pts = np.concatenate(([path.initial_value], path.values))
    return PointPattern1D((-math.inf, math.inf), pts[np.isfinite(pts)])
