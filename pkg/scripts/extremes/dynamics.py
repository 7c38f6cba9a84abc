# coding: utf-8
"""
Mapas do intervalo usados no laboratório e geração de órbitas.

Mapas suportados (MapKind):
  - tent       f(x) = 1 - |1 - 2x|
  - doubling   f(x) = 2x mod 1
  - logistic4  f(x) = 4x(1 - x)
  - lsv        f(x) = x(1 + 2^a x^a) em [0, 1/2), 2x - 1 em [1/2, 1]

Geração de órbitas:
  - Forward: x0 ~ medida invariante, itera step.
  - Pullback (só tent/doubling): sorteia ramos inversos uniformes de trás
    para frente. Em ponto flutuante binário o forward desses dois mapas
    colapsa em 0 em ~53 passos; o pullback é exato na lei conjunta.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from scripts.extremes.errors import ConfigError, DomainError, InputError
from scripts.extremes.streams import STREAM_ORBIT, trial_rng

ArrayLike = Union[float, np.ndarray]

# profundidade do pullback: x_k fica na grade 2^-52, onde tudo é exato em float64
PULLBACK_DEPTH = 52
LSV_BURN_IN = 10_000
LSV_DENSITY_BINS = 10_000
LSV_DENSITY_SAMPLES = 10**8
LSV_SINGULAR_RADIUS = 1e-3


class MapKind(str, Enum):
    TENT = "tent"
    DOUBLING = "doubling"
    LOGISTIC4 = "logistic4"
    LSV = "lsv"


class GenerationMode(str, Enum):
    FORWARD = "forward"
    PULLBACK = "pullback"


DYADIC_KINDS = (MapKind.TENT, MapKind.DOUBLING)


@dataclass(frozen=True)
class MapSystem:
    kind: MapKind
    alpha: Optional[float] = None

    def __post_init__(self):
        kind = MapKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is MapKind.LSV:
            if self.alpha is None or not (0.0 < float(self.alpha) < 1.0):
                raise ConfigError(f"LSV exige alpha em (0,1); recebido {self.alpha!r}")
            object.__setattr__(self, "alpha", float(self.alpha))
        elif self.alpha is not None:
            object.__setattr__(self, "alpha", None)

    @property
    def name(self) -> str:
        if self.kind is MapKind.LSV:
            return f"lsv(alpha={self.alpha:g})"
        return self.kind.value

    @property
    def domain(self):
        return (0.0, 1.0)


@dataclass(frozen=True)
class OrbitSpec:
    length: int
    burn_in: int = 0
    seed: int = 0
    generation_mode: Optional[GenerationMode] = None

    def __post_init__(self):
        if int(self.length) < 1:
            raise InputError(f"comprimento da órbita deve ser >= 1 (recebido {self.length})")
        if int(self.burn_in) < 0:
            raise InputError(f"burn_in negativo: {self.burn_in}")
        if self.generation_mode is not None:
            object.__setattr__(self, "generation_mode", GenerationMode(self.generation_mode))

    def mode_for(self, system: MapSystem) -> GenerationMode:
        """Modo efetivo: o pedido, ou Pullback para tent/doubling e Forward no resto."""
        mode = self.generation_mode
        if mode is None:
            mode = GenerationMode.PULLBACK if system.kind in DYADIC_KINDS else GenerationMode.FORWARD
        if mode is GenerationMode.PULLBACK and system.kind not in DYADIC_KINDS:
            raise ConfigError(
                f"Pullback só é válido para tent/doubling (mapa: {system.name})"
            )
        return mode


def _check_unit(x: np.ndarray, what: str = "x"):
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise InputError(f"{what} fora de [0,1]")


def _step_array(system: MapSystem, x: np.ndarray) -> np.ndarray:
    kind = system.kind
    if kind is MapKind.TENT:
        return 1.0 - np.abs(1.0 - 2.0 * x)
    if kind is MapKind.DOUBLING:
        y = 2.0 * x
        return np.where(y >= 1.0, y - 1.0, y)
    if kind is MapKind.LOGISTIC4:
        return 4.0 * x * (1.0 - x)
    a = system.alpha
    left = x * (1.0 + (2.0**a) * np.power(x, a))
    # o ramo esquerdo pode passar de 1 por arredondamento perto de 1/2
    return np.clip(np.where(x < 0.5, left, 2.0 * x - 1.0), 0.0, 1.0)


def step(system: MapSystem, x: ArrayLike) -> ArrayLike:
    arr = np.asarray(x, dtype=float)
    _check_unit(arr)
    out = _step_array(system, arr)
    if np.ndim(x) == 0:
        return float(out)
    return out


def initial_sample(system: MapSystem, rng: np.random.Generator) -> float:
    """Um ponto inicial com a lei invariante (LSV: uniforme + burn-in fixo)."""
    return float(initial_samples(system, [rng])[0])


def initial_samples(system: MapSystem, rngs: Sequence[np.random.Generator]) -> np.ndarray:
    u = np.array([r.random() for r in rngs], dtype=float)
    if system.kind is MapKind.LOGISTIC4:
        return np.sin(0.5 * np.pi * u) ** 2
    if system.kind is MapKind.LSV:
        x = u
        for _ in range(LSV_BURN_IN):
            x = _step_array(system, x)
        return x
    return u


class _PullbackRow:
    """
    Uma linha pullback que pode ser estendida: x_k depende dos ramos
    e_k..e_{k+D-1}, então guardamos os D-1 ramos já sorteados e o sinal
    acumulado no ponto de corte.
    """

    def __init__(self, system: MapSystem, rng: np.random.Generator):
        self.kind = system.kind
        self.rng = rng
        self.bits = np.empty(0, dtype=np.int64)
        self.sign = 1

    def take(self, m: int) -> np.ndarray:
        # x_k = g_{e_k}(x_{k+1}); com D ramos por janela a soma é exata em float64
        depth = PULLBACK_DEPTH
        fresh = self.rng.integers(0, 2, size=m + depth - 1 - self.bits.size, dtype=np.int64)
        e = np.concatenate((self.bits, fresh))
        self.bits = e[m:]
        if self.kind is MapKind.DOUBLING:
            w = np.ldexp(1.0, -np.arange(1, depth + 1))
            return np.correlate(e.astype(float), w, mode="valid")
        # tent: g_0(y) = y/2, g_1(y) = 1 - y/2; sinais acumulados S_m = prod_{i<m} (1 - 2 e_i)
        s = 1 - 2 * e
        S = np.empty_like(s)
        S[0] = self.sign
        S[1:] = self.sign * np.cumprod(s[:-1])
        self.sign = int(S[m])
        w = np.ldexp(1.0, -np.arange(0, depth))
        corr = np.correlate((e * S).astype(float), w, mode="valid")
        return S[:m] * corr


def _pullback_row(system: MapSystem, n: int, rng: np.random.Generator) -> np.ndarray:
    return _PullbackRow(system, rng).take(n)


class OrbitCursor:
    """
    Bloco de órbitas (uma por stream) consumido em pedaços: take(m) devolve os
    próximos m estados de cada linha pedida. Cada pedaço continua a órbita do
    anterior (step do último estado = primeiro estado do pedaço seguinte).
    """

    def __init__(self, system: MapSystem, spec: OrbitSpec, rngs: Sequence[np.random.Generator]):
        self.system = system
        self.mode = spec.mode_for(system)
        self.size = len(rngs)
        if self.mode is GenerationMode.PULLBACK:
            self._rows = [_PullbackRow(system, r) for r in rngs]
            if int(spec.burn_in):
                # burn_in não muda a lei estacionária; consome os ramos mesmo assim
                self.take(int(spec.burn_in))
        else:
            x = initial_samples(system, rngs)
            for _ in range(int(spec.burn_in)):
                x = _step_array(system, x)
            self._x = x

    def take(self, m: int, rows: Optional[Sequence[int]] = None) -> np.ndarray:
        m = int(m)
        idx = np.arange(self.size) if rows is None else np.asarray(rows, dtype=np.int64)
        if m < 1:
            raise InputError(f"pedaço de órbita deve ter >= 1 ponto (recebido {m})")
        if self.mode is GenerationMode.PULLBACK:
            if idx.size == 0:
                return np.empty((0, m))
            return np.vstack([self._rows[i].take(m) for i in idx])
        x = self._x[idx]
        out = np.empty((idx.size, m), dtype=float)
        for i in range(m):
            out[:, i] = x
            x = _step_array(self.system, x)
        self._x[idx] = x
        return out


def sample_orbit(
    system: MapSystem, spec: OrbitSpec, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """Sem rng explícito usa o stream (spec.seed, órbita, trial 0)."""
    if rng is None:
        rng = trial_rng(spec.seed, STREAM_ORBIT, 0)
    return sample_orbit_block(system, spec, [rng])[0]


def sample_orbit_block(
    system: MapSystem, spec: OrbitSpec, rngs: Sequence[np.random.Generator]
) -> np.ndarray:
    """
    Órbitas de vários trials de uma vez, shape (len(rngs), n).
    Pullback: uma linha por stream. Forward: itera o bloco inteiro em paralelo
    (cada linha só usa o próprio stream para x0).
    """
    return OrbitCursor(system, spec, rngs).take(int(spec.length))


def is_periodic(system: MapSystem, x: float, max_period: int = 16, tol: float = 1e-9) -> bool:
    y = float(x)
    for _ in range(max_period):
        y = float(_step_array(system, np.asarray(y)))
        if abs(y - x) < tol:
            return True
    return False


@lru_cache(maxsize=8)
def lsv_density_table(
    alpha: float,
    bins: int = LSV_DENSITY_BINS,
    samples: int = LSV_DENSITY_SAMPLES,
    seed: int = 20_240_601,
) -> np.ndarray:
    """
    Histograma normalizado (densidade) da medida invariante do LSV.
    Usa um ensemble de cadeias em paralelo (média temporal x ensemble),
    cada uma com LSV_BURN_IN iterações descartadas.
    """
    system = MapSystem(MapKind.LSV, alpha)
    chains = int(min(10_000, max(1, samples // 1000)))
    steps = int(math.ceil(samples / chains))
    rng = np.random.default_rng(seed)
    x = rng.random(chains)
    for _ in range(LSV_BURN_IN):
        x = _step_array(system, x)
    counts = np.zeros(bins, dtype=np.int64)
    for _ in range(steps):
        idx = np.minimum((x * bins).astype(np.int64), bins - 1)
        counts += np.bincount(idx, minlength=bins)
        x = _step_array(system, x)
    return counts / (counts.sum() / bins)


def density_is_exact(system: MapSystem) -> bool:
    return system.kind is not MapKind.LSV


def invariant_density(system: MapSystem, x: float, lsv_samples: int = LSV_DENSITY_SAMPLES) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise InputError(f"x fora de [0,1]: {x}")
    kind = system.kind
    if kind in DYADIC_KINDS:
        return 1.0
    if kind is MapKind.LOGISTIC4:
        if x <= 0.0 or x >= 1.0:
            return math.inf
        return 1.0 / (math.pi * math.sqrt(x * (1.0 - x)))
    if x <= 0.0:
        return math.inf
    if x < LSV_SINGULAR_RADIUS:
        raise DomainError(
            f"x={x:g} a menos de {LSV_SINGULAR_RADIUS:g} da singularidade do LSV em 0"
        )
    table = lsv_density_table(system.alpha, LSV_DENSITY_BINS, int(lsv_samples))
    idx = min(int(x * len(table)), len(table) - 1)
    return float(table[idx])
