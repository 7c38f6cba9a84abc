# coding: utf-8
"""
Máximo corrente, caminho reescalado Y_n(t) = a_n (M_[nt] - b_n) e sua inversa.

CadlagStepPath guarda só os saltos (tempo, valor): uma série de tamanho n
tem O(log n) recordes, então o caminho esparso cabe mesmo com n = 10^7.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np
import pandas as pd

from scripts.extremes.errors import InputError

Window = Tuple[float, float]


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CadlagStepPath:
    """
    Função escada contínua à direita em (t_lo, t_hi].
    initial_value vale em [t_lo, primeiro salto); no salto k o valor passa a values[k].
    """
    window: Window
    times: np.ndarray
    values: np.ndarray
    initial_value: float
    meta: Dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        times = _frozen(self.times)
        values = _frozen(self.values)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "window", (float(self.window[0]), float(self.window[1])))
        object.__setattr__(self, "initial_value", float(self.initial_value))
        lo, hi = self.window
        if not lo < hi:
            raise InputError(f"janela inválida {self.window}")
        if len(times) != len(values):
            raise InputError("tempos e valores com tamanhos diferentes")
        if len(times):
            if np.any(np.diff(times) <= 0.0):
                raise InputError("tempos de salto devem ser estritamente crescentes")
            if times[0] <= lo or times[-1] > hi:
                raise InputError(f"salto fora da janela {self.window}")

    @property
    def n_jumps(self) -> int:
        return len(self.times)

    def value_at(self, t):
        """Avaliação contínua à direita; vetorizada."""
        arr = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, arr, side="right")
        levels = np.concatenate(([self.initial_value], self.values))
        out = levels[idx]
        return float(out) if np.ndim(t) == 0 else out

    __call__ = value_at

    def is_nondecreasing(self) -> bool:
        levels = np.concatenate(([self.initial_value], self.values))
        with np.errstate(invalid="ignore"):
            return bool(np.all(levels[1:] >= levels[:-1]))

    def restrict(self, a: float, b: float) -> "CadlagStepPath":
        """Restrição r_{a,b}: valor em a (contínuo à direita) + saltos em (a, b]."""
        lo, hi = self.window
        if a < lo or b > hi or not a < b:
            raise InputError(f"[{a}, {b}] não está contido na janela {self.window}")
        sel = (self.times > a) & (self.times <= b)
        return CadlagStepPath((a, b), self.times[sel], self.values[sel], self.value_at(a))

    def header_lines(self) -> list:
        return [
            f"window={self.window[0]!r},{self.window[1]!r}",
            f"initial_value={self.initial_value!r}",
        ]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"time": self.times, "value": self.values})

    def to_csv(self, path: str, extra_header: Iterable[str] = ()):
        from scripts.tools import write_csv

        write_csv(path, self.to_frame(), header=list(extra_header) + self.header_lines())

    @classmethod
    def from_csv(cls, path: str) -> "CadlagStepPath":
        from scripts.tools import read_csv_with_header

        df, header = read_csv_with_header(path)
        if "window" not in header or "initial_value" not in header:
            raise InputError(f"{path}: cabeçalho sem window/initial_value")
        lo, hi = (float(v) for v in header["window"].split(","))
        return cls((lo, hi), df["time"].to_numpy(float), df["value"].to_numpy(float),
                   float(header["initial_value"]))


def running_max(xs: Sequence[float]) -> np.ndarray:
    arr = np.asarray(xs, dtype=float)
    if arr.size == 0:
        raise InputError("série vazia")
    return np.maximum.accumulate(arr)


def record_mask(xs: Sequence[float]) -> np.ndarray:
    """True em j quando X_j > max(X_1..X_{j-1}) (desigualdade estrita); j=0 sempre."""
    arr = np.asarray(xs, dtype=float)
    m = running_max(arr)
    mask = np.empty(arr.shape, dtype=bool)
    mask[0] = True
    mask[1:] = arr[1:] > m[:-1]
    return mask


def build_path(xs: Sequence[float], a_n: float, b_n: float, n: int, t_hi: float = 1.0) -> CadlagStepPath:
    """
    Y_n(t) = a_n (M_[nt] - b_n) em (0, t_hi]; em (0, 1/n) vale a_n (X_1 - b_n).
    Os saltos ficam exatamente nos tempos de recorde tau_k / n; o primeiro
    (tau_1 = 1) tem altura zero e só marca o recorde.
    """
    n = int(n)
    if n < 1 or not t_hi > 0.0:
        raise InputError(f"n={n}, t_hi={t_hi} inválidos")
    arr = np.asarray(xs, dtype=float)
    need = int(math.ceil(n * t_hi))
    if arr.size < need:
        raise InputError(f"série com {arr.size} pontos; são necessários {need}")
    m = int(math.floor(n * t_hi + 1e-9))
    seg = arr[:max(m, 1)]
    idx = np.flatnonzero(record_mask(seg))
    values = a_n * (seg[idx] - b_n)
    times = (idx + 1) / n
    keep = times <= t_hi
    return CadlagStepPath((0.0, t_hi), times[keep], values[keep], a_n * (seg[0] - b_n))


def invert_path(p: CadlagStepPath, domain: Window) -> CadlagStepPath:
    """
    Inversa generalizada p<-(y) = inf{t : p(t) > y} como caminho em níveis y do domínio E.
    Acima do último valor a inversa vale +inf.
    """
    if not p.is_nondecreasing():
        raise InputError("invert_path exige caminho não decrescente")
    lo, hi = float(domain[0]), float(domain[1])
    levels = np.concatenate(([p.initial_value], p.values))
    after = np.concatenate((p.times, [math.inf]))
    init = p.window[0]
    current = init
    times, values = [], []
    for k, (lev, val) in enumerate(zip(levels, after)):
        if k + 1 < len(levels) and levels[k + 1] == lev:
            continue  # salto de altura zero: o nível só é ultrapassado mais adiante
        if lev <= lo:
            init = current = val
            continue
        if lev > hi:
            break
        if val != current:
            times.append(lev)
            values.append(val)
            current = val
    return CadlagStepPath((lo, hi), times, values, init)
