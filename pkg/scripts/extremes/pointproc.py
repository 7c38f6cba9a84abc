# coding: utf-8
"""
Processos pontuais: padrões 1D/2D, PRMs com as intensidades do laboratório,
afinamento independente, o processo planar xi_n e os funcionais H1/H2/H3.

Intensidades:
  - record_time      gamma(t) = 1/t em (0, inf)
  - planar(G)        Leb x lambda_G, lambda_G((c, d]) = Q(c) - Q(d)
  - record_value(G)  lambda_V([a, b]) = log Q(a) - log Q(b)
  - uniform(c)       c Leb
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from scripts.extremes.errors import DomainError, InputError
from scripts.extremes.maxima import CadlagStepPath
from scripts.extremes.observables import GevLimit, gev_Q, gev_Q_inverse

Window = Tuple[float, float]
Rect = Tuple[Window, Window]

FULL_LINE: Window = (-math.inf, math.inf)


def _window(w) -> Window:
    lo, hi = float(w[0]), float(w[1])
    if not lo < hi:
        raise InputError(f"janela inválida ({lo}, {hi})")
    return lo, hi


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# Padrões
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PointPattern1D:
    window: Window
    points: np.ndarray

    def __post_init__(self):
        w = _window(self.window)
        pts = np.sort(np.array(self.points, dtype=float).reshape(-1))
        if pts.size and (pts[0] < w[0] or pts[-1] > w[1]):
            raise InputError(f"ponto fora da janela {w}")
        object.__setattr__(self, "window", w)
        object.__setattr__(self, "points", _readonly(pts))

    def __len__(self) -> int:
        return int(self.points.size)

    def count(self, a: float, b: float) -> int:
        """Número de pontos em (a, b]."""
        return int(np.searchsorted(self.points, b, side="right") - np.searchsorted(self.points, a, side="right"))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.points})

    def header_lines(self) -> list:
        return [f"window={self.window[0]!r},{self.window[1]!r}"]

    def to_csv(self, path: str, extra_header: Iterable[str] = ()):
        from scripts.tools import write_csv

        write_csv(path, self.to_frame(), header=list(extra_header) + self.header_lines())

    @classmethod
    def from_csv(cls, path: str) -> "PointPattern1D":
        from scripts.tools import read_csv_with_header

        df, header = read_csv_with_header(path)
        if "window" not in header:
            raise InputError(f"{path}: cabeçalho sem window")
        lo, hi = (float(v) for v in header["window"].split(","))
        return cls((lo, hi), df["t"].to_numpy(float))


@dataclass(frozen=True)
class PointPattern2D:
    """Pontos (t, y) ordenados por t; janela ((t_lo, t_hi), (y_lo, y_hi))."""
    window: Rect
    points: np.ndarray

    def __post_init__(self):
        tw, yw = _window(self.window[0]), _window(self.window[1])
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        if pts.size:
            pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
            if (pts[:, 0].min() < tw[0] or pts[:, 0].max() > tw[1]
                    or pts[:, 1].min() < yw[0] or pts[:, 1].max() > yw[1]):
                raise InputError(f"ponto fora da janela {(tw, yw)}")
        object.__setattr__(self, "window", (tw, yw))
        object.__setattr__(self, "points", _readonly(pts))

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def t(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.points[:, 1]

    def count(self, rect: Rect) -> int:
        """Número de pontos em (a, b] x (c, d]."""
        (a, b), (c, d) = rect
        t, y = self.t, self.y
        return int(np.count_nonzero((t > a) & (t <= b) & (y > c) & (y <= d)))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.t, "y": self.y})

    def header_lines(self) -> list:
        (a, b), (c, d) = self.window
        return [f"window={a!r},{b!r},{c!r},{d!r}"]

    def to_csv(self, path: str, extra_header: Iterable[str] = ()):
        from scripts.tools import write_csv

        write_csv(path, self.to_frame(), header=list(extra_header) + self.header_lines())

    @classmethod
    def from_csv(cls, path: str) -> "PointPattern2D":
        from scripts.tools import read_csv_with_header

        df, header = read_csv_with_header(path)
        if "window" not in header:
            raise InputError(f"{path}: cabeçalho sem window")
        a, b, c, d = (float(v) for v in header["window"].split(","))
        return cls(((a, b), (c, d)), df[["t", "y"]].to_numpy(float))


PointPattern = Union[PointPattern1D, PointPattern2D]


# ---------------------------------------------------------------------------
# Intensidades
# ---------------------------------------------------------------------------
class IntensityKind(str, Enum):
    RECORD_TIME = "record-time"
    PLANAR = "planar"
    RECORD_VALUE = "record-value"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class IntensityMeasure:
    kind: IntensityKind
    g: Optional[GevLimit] = None
    rate: float = 1.0

    def __post_init__(self):
        kind = IntensityKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (IntensityKind.PLANAR, IntensityKind.RECORD_VALUE) and self.g is None:
            raise InputError(f"intensidade {kind.value} exige a lei G")
        if kind is IntensityKind.UNIFORM and not (math.isfinite(self.rate) and self.rate > 0.0):
            raise InputError(f"taxa deve ser > 0 (recebido {self.rate})")

    @property
    def is_planar(self) -> bool:
        return self.kind is IntensityKind.PLANAR

    @classmethod
    def record_time(cls) -> "IntensityMeasure":
        return cls(IntensityKind.RECORD_TIME)

    @classmethod
    def planar(cls, g: GevLimit) -> "IntensityMeasure":
        return cls(IntensityKind.PLANAR, g)

    @classmethod
    def record_value(cls, g: GevLimit) -> "IntensityMeasure":
        return cls(IntensityKind.RECORD_VALUE, g)

    @classmethod
    def uniform(cls, rate: float = 1.0) -> "IntensityMeasure":
        return cls(IntensityKind.UNIFORM, rate=rate)


def _clamp_levels(g: GevLimit, c: float, d: float) -> Tuple[float, float]:
    lo, hi = g.domain
    return max(c, lo), min(d, hi)


def _planar_level_mass(g: GevLimit, c: float, d: float) -> Tuple[float, float]:
    c, d = _clamp_levels(g, c, d)
    if c >= d:
        return 0.0, 0.0
    qc, qd = float(gev_Q(g, c)), float(gev_Q(g, d))
    if math.isinf(qc):
        raise DomainError(f"nível inferior {c} na borda do domínio de G: massa infinita")
    return qc, qd


def measure_of(intensity: IntensityMeasure, window) -> float:
    kind = intensity.kind
    if kind is IntensityKind.PLANAR:
        (a, b), (c, d) = _window(window[0]), _window(window[1])
        if a < 0.0:
            raise DomainError(f"tempo negativo na janela planar ({a}, {b}]")
        qc, qd = _planar_level_mass(intensity.g, c, d)
        return (b - a) * (qc - qd)

    a, b = _window(window)
    if kind is IntensityKind.RECORD_TIME:
        if a <= 0.0:
            raise DomainError("janela de tempos de recorde deve ter a > 0 (massa diverge em 0)")
        return math.log(b / a)
    if kind is IntensityKind.UNIFORM:
        return intensity.rate * (b - a)
    # record-value: log Q(a) - log Q(b), finito só no interior do domínio
    lo, hi = intensity.g.domain
    if not (lo < a and b < hi):
        raise DomainError(f"[{a}, {b}] toca a borda do domínio de G {intensity.g.domain}")
    return math.log(float(gev_Q(intensity.g, a))) - math.log(float(gev_Q(intensity.g, b)))


def sample_prm(intensity: IntensityMeasure, window, rng: np.random.Generator) -> PointPattern:
    mass = measure_of(intensity, window)
    if not math.isfinite(mass):
        raise DomainError(f"massa infinita na janela {window}")
    k = int(rng.poisson(mass))
    kind = intensity.kind
    if kind is IntensityKind.PLANAR:
        (a, b), (c, d) = _window(window[0]), _window(window[1])
        t = a + (b - a) * rng.random(k)
        if k:
            qc, qd = _planar_level_mass(intensity.g, c, d)
            y = gev_Q_inverse(intensity.g, qd + (qc - qd) * rng.random(k))
            y = np.clip(y, c, d)
        else:
            y = np.empty(0)
        return PointPattern2D(((a, b), (c, d)), np.column_stack((t, np.asarray(y, dtype=float))))

    a, b = _window(window)
    u = rng.random(k)
    if kind is IntensityKind.RECORD_TIME:
        pts = a * np.power(b / a, u)
    elif kind is IntensityKind.UNIFORM:
        pts = a + (b - a) * u
    else:
        # uniforme em v = -log Q(y), depois volta para y
        g = intensity.g
        va, vb = -math.log(float(gev_Q(g, a))), -math.log(float(gev_Q(g, b)))
        pts = np.asarray(gev_Q_inverse(g, np.exp(-(va + (vb - va) * u))), dtype=float)
        pts = np.clip(pts, a, b)
    return PointPattern1D((a, b), pts)


def thin(pattern: PointPattern, p: float, rng: np.random.Generator) -> PointPattern:
    if not (0.0 < p < 1.0):
        raise InputError(f"probabilidade de retenção deve estar em (0,1); recebido {p}")
    keep = rng.random(len(pattern)) < p
    return type(pattern)(pattern.window, pattern.points[keep])


# ---------------------------------------------------------------------------
# Processo planar e funcionais
# ---------------------------------------------------------------------------
def build_xi_n(xs: Sequence[float], a_n: float, b_n: float, n: int,
               floor: Optional[float] = None) -> PointPattern2D:
    """
    xi_n = {(i/n, a_n (X_i - b_n)) : 1 <= i <= n}. Com floor, só os pontos com
    y > floor, na janela (0,1] x (floor, inf): basta para contar retângulos acima dele.
    """
    arr = np.asarray(xs, dtype=float)
    n = int(n)
    if n < 1 or arr.size < n:
        raise InputError(f"série com {arr.size} pontos; são necessários n={n}")
    y = a_n * (arr[:n] - b_n)
    if floor is None:
        t = np.arange(1, n + 1) / n
        return PointPattern2D(((0.0, 1.0), FULL_LINE), np.column_stack((t, y)))
    idx = np.flatnonzero(y > floor)
    return PointPattern2D(((0.0, 1.0), (float(floor), math.inf)), np.column_stack(((idx + 1) / n, y[idx])))


def functional_H1(pattern: PointPattern2D, window: Window) -> CadlagStepPath:
    """
    H1(xi)(t) = sup{y_i : t_i <= t} em (t_lo, t_hi]; -inf antes do primeiro ponto.
    """
    t_lo, t_hi = _window(window)
    t, y = pattern.t, pattern.y
    before = y[t <= t_lo]
    current = float(before.max()) if before.size else -math.inf
    initial = current
    times: List[float] = []
    values: List[float] = []
    sel = (t > t_lo) & (t <= t_hi)
    for ti, yi in zip(t[sel], y[sel]):
        if yi > current:
            current = float(yi)
            if times and times[-1] == ti:
                values[-1] = current
            else:
                times.append(float(ti))
                values.append(current)
    return CadlagStepPath((t_lo, t_hi), times, values, initial)


def functional_H2(pattern: PointPattern2D, level: float) -> float:
    """H2(xi)(level) = inf{t_i : y_i > level}; +inf se nenhum ponto passa."""
    hit = pattern.t[pattern.y > level]
    return float(hit.min()) if hit.size else math.inf


def functional_H3(path: CadlagStepPath, interval: Window) -> int:
    """Número de saltos do caminho em (lo, hi]."""
    lo, hi = float(interval[0]), float(interval[1])
    return int(np.count_nonzero((path.times > lo) & (path.times <= hi)))


# ---------------------------------------------------------------------------
# Processo de várias linhas (excedências de limiares ordenados)
# ---------------------------------------------------------------------------
def build_line_patterns(xs: Sequence[float], thresholds: Sequence[float], n: int) -> List[PointPattern1D]:
    """
    Linha k: {j/n : X_j > u^(k)}, j <= n. Os limiares vêm em ordem decrescente
    (u^(1) > ... > u^(r)), correspondendo a níveis x_1 < ... < x_r.
    """
    arr = np.asarray(xs, dtype=float)
    n = int(n)
    if arr.size < n:
        raise InputError(f"série com {arr.size} pontos; são necessários n={n}")
    u = np.asarray(thresholds, dtype=float)
    if u.size == 0 or np.any(np.diff(u) >= 0.0):
        raise InputError("limiares devem ser estritamente decrescentes")
    # uma varredura: só quem passa o menor limiar entra em alguma linha
    idx = np.flatnonzero(arr[:n] > u[-1])
    vals = arr[idx]
    t = (idx + 1) / n
    return [PointPattern1D((0.0, 1.0), t[vals > uk]) for uk in u]


def sample_thinned_lines(levels: Sequence[float], window: Window, rng: np.random.Generator) -> List[PointPattern1D]:
    """
    Objeto limite: linha r é PRM de taxa x_r; cada linha k < r é um afinamento
    independente da linha k+1 com p = x_k / x_{k+1}.
    """
    x = np.asarray(levels, dtype=float)
    if x.size == 0 or np.any(x <= 0.0) or np.any(np.diff(x) <= 0.0):
        raise InputError("níveis devem ser positivos e estritamente crescentes")
    lines = [sample_prm(IntensityMeasure.uniform(float(x[-1])), window, rng)]
    for k in range(x.size - 2, -1, -1):
        lines.append(thin(lines[-1], float(x[k] / x[k + 1]), rng))
    return lines[::-1]


def lines_void_prediction(levels: Sequence[float], events: Sequence[Tuple[int, Window]]) -> float:
    """exp(-sum (b_j - a_j) x_{k_j}) para eventos {linha k_j vazia em (a_j, b_j]} disjuntos."""
    x = np.asarray(levels, dtype=float)
    return math.exp(-sum((b - a) * x[k] for k, (a, b) in events))


def lines_void(lines: Sequence[PointPattern1D], events: Sequence[Tuple[int, Window]]) -> bool:
    return all(lines[k].count(a, b) == 0 for k, (a, b) in events)


def void_probability(patterns: Sequence[PointPattern2D], rects: Sequence[Rect]) -> float:
    """Fração de padrões sem nenhum ponto na união dos retângulos."""
    if not patterns:
        raise InputError("nenhum padrão")
    empty = sum(1 for p in patterns if all(p.count(r) == 0 for r in rects))
    return empty / len(patterns)


def void_prediction(g: GevLimit, rects: Sequence[Rect]) -> float:
    """exp(-lambda(B)) para B = união disjunta de retângulos."""
    intensity = IntensityMeasure.planar(g)
    return math.exp(-sum(measure_of(intensity, r) for r in rects))
