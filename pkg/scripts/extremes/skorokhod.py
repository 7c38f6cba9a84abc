# coding: utf-8
"""
Distâncias J1 entre caminhos escada.

d_ab: ínfimo sobre mudanças de tempo h de max(sup|p o h - q|, sup|h - id|).
Para caminhos escada basta escolher, para cada salto de p, a posição da sua
pré-imagem na ordem dos saltos de q: casado com um salto de q (custo de tempo
|s - t|) ou solto num intervalo (t_j, t_{j+1}) (custo dist(s, [t_j, t_{j+1}])).
O termo de valor é a diferença entre os patamares que ficam lado a lado.
A busca é um caminho minimax na grade (i, j) de saltos consumidos.

d_0inf: int_0^1 int_1^inf e^-t (1 ^ d_{s,t}) dt ds por quadratura de Gauss-Legendre,
com t truncado em T_MAX (erro de truncamento <= e^-T_MAX).
"""

import math
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from scripts.extremes.errors import InputError
from scripts.extremes.maxima import CadlagStepPath

S_NODES = 32
T_NODES = 64
T_MAX = 8.0


def _gap(x: float, y: float) -> float:
    # inclui +-inf iguais (marcadores de caminho vazio)
    return 0.0 if x == y else abs(x - y)


def _segment(p: CadlagStepPath, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    sel = (p.times > a) & (p.times <= b)
    levels = np.concatenate(([p.value_at(a)], p.values[sel]))
    return p.times[sel], levels


def _alignment_cost(p: CadlagStepPath, q: CadlagStepPath, a: float, b: float) -> float:
    s, pv = _segment(p, a, b)
    t, qv = _segment(q, a, b)
    m, l = len(s), len(t)
    edges = np.concatenate(([a], t, [b]))
    D = np.full((m + 1, l + 1), math.inf)
    D[0, 0] = _gap(pv[0], qv[0])
    for i in range(m + 1):
        for j in range(l + 1):
            if i == 0 and j == 0:
                continue
            best = math.inf
            if i > 0:
                si = s[i - 1]
                lone = max(edges[j] - si, si - edges[j + 1], 0.0)
                best = min(best, max(D[i - 1, j], lone))
            if j > 0:
                best = min(best, D[i, j - 1])
            if i > 0 and j > 0:
                best = min(best, max(D[i - 1, j - 1], abs(s[i - 1] - t[j - 1])))
            D[i, j] = max(_gap(pv[i], qv[j]), best)
    return float(D[m, l])


def _check_cover(p: CadlagStepPath, a: float, b: float, name: str):
    lo, hi = p.window
    if a < lo or b > hi:
        raise InputError(f"caminho {name} (janela {p.window}) não cobre [{a}, {b}]")


def d_ab(p: CadlagStepPath, q: CadlagStepPath, a: float, b: float) -> float:
    a, b = float(a), float(b)
    if not a < b:
        raise InputError(f"exige a < b (recebido {a}, {b})")
    _check_cover(p, a, b, "p")
    _check_cover(q, a, b, "q")
    # o ínfimo é simétrico; o mínimo dos dois sentidos torna isso exato em float
    return min(_alignment_cost(p, q, a, b), _alignment_cost(q, p, a, b))


def sup_distance(p: CadlagStepPath, q: CadlagStepPath, a: float, b: float) -> float:
    """sup |p - q| em [a, b] (h = id)."""
    grid = np.unique(np.concatenate(([a], p.times, q.times)))
    grid = grid[(grid >= a) & (grid <= b)]
    return max(_gap(x, y) for x, y in zip(p.value_at(grid), q.value_at(grid)))


def _nodes(lo: float, hi: float, k: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(k)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def d_0inf(p: CadlagStepPath, q: CadlagStepPath, s_nodes: int = S_NODES, t_nodes: int = T_NODES, t_max: float = T_MAX) -> float:
    s, ws = _nodes(0.0, 1.0, s_nodes)
    t, wt = _nodes(1.0, t_max, t_nodes)
    for path, name in ((p, "p"), (q, "q")):
        if path.window[0] > s[0]:
            raise InputError(f"caminho {name} começa em {path.window[0]}; precisa cobrir s={s[0]:.4g}")
        if path.window[1] < t_max:
            raise InputError(f"horizonte do caminho {name} ({path.window[1]}) menor que {t_max}")
    total = 0.0
    for si, wsi in zip(s, ws):
        for tj, wtj in zip(t, wt):
            total += wsi * wtj * math.exp(-tj) * min(1.0, d_ab(p, q, si, tj))
    return total
