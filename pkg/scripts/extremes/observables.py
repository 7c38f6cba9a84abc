# coding: utf-8
"""
Observáveis phi(x) = psi(dist(x, x~)), constantes de escala (a_n, b_n) e a lei limite G.

Famílias:
  - neglog             -log|x - x~|            -> Gumbel,  (a_n, b_n) = (1, log n)
  - pareto(alpha)      |x - x~|^-alpha          -> Fréchet, (a_n, b_n) = (n^-alpha, 0)
  - bounded(C, alpha)  C - |x - x~|^alpha       -> Weibull, (a_n, b_n) = (n^alpha, C)

Massa theta = 2 rho(x~) (bolas bilaterais em [0,1]); forma 1/alpha
nos casos Fréchet e Weibull.

Também ficam aqui as "fontes de série" (ObservedSystem, IidUniform), que
juntam mapa + observável e entregam blocos X[trial, i] para os experimentos.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from scripts.extremes import dynamics
from scripts.extremes.dynamics import MapSystem, OrbitSpec
from scripts.extremes.errors import ConfigError, DomainError, InputError

ArrayLike = Union[float, np.ndarray]

DEFAULT_CENTER = 1.0 / math.sqrt(2.0)


class ObservableFamily(str, Enum):
    NEGLOG = "neglog"
    PARETO = "pareto"
    BOUNDED = "bounded"


class GevFamily(str, Enum):
    GUMBEL = "gumbel"
    FRECHET = "frechet"
    WEIBULL = "weibull"


@dataclass(frozen=True)
class Observable:
    family: ObservableFamily
    center: float = DEFAULT_CENTER
    alpha: Optional[float] = None
    c: float = 0.0

    def __post_init__(self):
        fam = ObservableFamily(self.family)
        object.__setattr__(self, "family", fam)
        if not (0.0 < float(self.center) < 1.0):
            raise InputError(f"centro x~ deve estar em (0,1); recebido {self.center}")
        if fam is ObservableFamily.NEGLOG:
            object.__setattr__(self, "alpha", None)
        elif self.alpha is None or not float(self.alpha) > 0.0:
            raise InputError(f"observável {fam.value} exige alpha > 0; recebido {self.alpha!r}")

    @property
    def name(self) -> str:
        if self.family is ObservableFamily.NEGLOG:
            return f"neglog(x~={self.center:.8g})"
        if self.family is ObservableFamily.PARETO:
            return f"pareto(alpha={self.alpha:g}, x~={self.center:.8g})"
        return f"bounded(C={self.c:g}, alpha={self.alpha:g}, x~={self.center:.8g})"


@dataclass(frozen=True)
class GevLimit:
    """
    G(u) = exp(-Q(u)), Q(u) = theta e^-u | theta u^-shape | theta (endpoint-u)^shape.
    """
    family: GevFamily
    theta: float
    shape: Optional[float] = None
    endpoint: float = 0.0

    def __post_init__(self):
        fam = GevFamily(self.family)
        object.__setattr__(self, "family", fam)
        if not (math.isfinite(self.theta) and self.theta > 0.0):
            raise DomainError(f"theta deve estar em (0, inf); recebido {self.theta}")
        if fam is not GevFamily.GUMBEL and not (self.shape and self.shape > 0.0):
            raise DomainError(f"{fam.value} exige shape > 0; recebido {self.shape!r}")

    @property
    def domain(self) -> Tuple[float, float]:
        if self.family is GevFamily.GUMBEL:
            return (-math.inf, math.inf)
        if self.family is GevFamily.FRECHET:
            return (0.0, math.inf)
        return (-math.inf, self.endpoint)

    @property
    def dist(self):
        """Distribuição congelada do scipy com a mesma CDF."""
        if self.family is GevFamily.GUMBEL:
            return stats.gumbel_r(loc=math.log(self.theta))
        if self.family is GevFamily.FRECHET:
            return stats.invweibull(self.shape, scale=self.theta ** (1.0 / self.shape))
        return stats.weibull_max(self.shape, loc=self.endpoint, scale=self.theta ** (-1.0 / self.shape))

    def describe(self) -> str:
        if self.family is GevFamily.GUMBEL:
            return f"G(u)=exp(-{self.theta:.6g} e^-u)"
        if self.family is GevFamily.FRECHET:
            return f"G(u)=exp(-{self.theta:.6g} u^-{self.shape:.6g}), u>0"
        return f"G(u)=exp(-{self.theta:.6g} (-u)^{self.shape:.6g}), u<0"


def evaluate(obs: Observable, x: ArrayLike) -> ArrayLike:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InputError("x fora de [0,1]")
    d = np.abs(arr - obs.center)
    with np.errstate(divide="ignore"):
        if obs.family is ObservableFamily.NEGLOG:
            out = -np.log(d)
        elif obs.family is ObservableFamily.PARETO:
            out = np.power(d, -obs.alpha)
        else:
            out = obs.c - np.power(d, obs.alpha)
    if np.ndim(x) == 0:
        return float(out)
    return out


def scaling(obs: Observable, n: int) -> Tuple[float, float]:
    if int(n) < 1:
        raise InputError(f"n deve ser >= 1 (recebido {n})")
    n = int(n)
    if obs.family is ObservableFamily.NEGLOG:
        return 1.0, math.log(n)
    if obs.family is ObservableFamily.PARETO:
        return float(n) ** (-obs.alpha), 0.0
    return float(n) ** obs.alpha, float(obs.c)


def limit_law(obs: Observable, rho_at_center: float) -> GevLimit:
    rho = float(rho_at_center)
    if not (math.isfinite(rho) and rho > 0.0):
        raise DomainError(f"rho(x~) fora de (0, inf): {rho}: lei limite degenerada")
    theta = 2.0 * rho
    if obs.family is ObservableFamily.NEGLOG:
        return GevLimit(GevFamily.GUMBEL, theta)
    if obs.family is ObservableFamily.PARETO:
        return GevLimit(GevFamily.FRECHET, theta, shape=1.0 / obs.alpha)
    return GevLimit(GevFamily.WEIBULL, theta, shape=1.0 / obs.alpha, endpoint=0.0)


def _check_closure(g: GevLimit, y: np.ndarray):
    lo, hi = g.domain
    if np.any(np.isnan(y)) or np.any(y < lo) or np.any(y > hi):
        raise DomainError(f"valor fora do domínio de G {g.domain}")


def _out(x, arr):
    return float(arr) if np.ndim(x) == 0 else arr


def gev_cdf(g: GevLimit, u: ArrayLike) -> ArrayLike:
    arr = np.asarray(u, dtype=float)
    _check_closure(g, arr)
    return _out(u, g.dist.cdf(arr))


def gev_quantile(g: GevLimit, p: ArrayLike) -> ArrayLike:
    arr = np.asarray(p, dtype=float)
    if np.any(~(arr > 0.0)) or np.any(~(arr < 1.0)):
        raise InputError("p deve estar em (0,1)")
    return _out(p, g.dist.ppf(arr))


def gev_Q(g: GevLimit, y: ArrayLike) -> ArrayLike:
    """Q(y) = -log G(y); +inf na borda inferior, 0 na superior (Weibull)."""
    arr = np.asarray(y, dtype=float)
    _check_closure(g, arr)
    with np.errstate(divide="ignore", over="ignore"):
        if g.family is GevFamily.GUMBEL:
            q = np.exp(math.log(g.theta) - arr)
        elif g.family is GevFamily.FRECHET:
            q = g.theta * np.power(arr, -g.shape)
        else:
            q = g.theta * np.power(g.endpoint - arr, g.shape)
    return _out(y, q)


def gev_Q_inverse(g: GevLimit, q: ArrayLike) -> ArrayLike:
    """Nível y com Q(y) = q, para q em [0, inf]."""
    arr = np.asarray(q, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0):
        raise InputError("massa q deve ser >= 0")
    with np.errstate(divide="ignore"):
        if g.family is GevFamily.GUMBEL:
            y = math.log(g.theta) - np.log(arr)
        elif g.family is GevFamily.FRECHET:
            y = np.power(g.theta / arr, 1.0 / g.shape)
        else:
            y = g.endpoint - np.power(arr / g.theta, 1.0 / g.shape)
    return _out(q, y)


def threshold(obs: Observable, g: GevLimit, n: int, x: float) -> float:
    """u_n(x) = a_n^-1 G^-1(e^-x) + b_n, com n mu{X_1 > u_n} -> x."""
    if not x > 0.0:
        raise InputError(f"nível x deve ser > 0 (recebido {x})")
    a_n, b_n = scaling(obs, n)
    return float(gev_Q_inverse(g, x)) / a_n + b_n


# ---------------------------------------------------------------------------
# Fontes de série
# ---------------------------------------------------------------------------
class ObservedSystem:
    """Mapa + observável: X_i = phi(f^{i-1} x), x ~ medida invariante."""

    def __init__(
        self,
        system: MapSystem,
        obs: Observable,
        generation_mode: Optional[str] = None,
        allow_periodic: bool = False,
        lsv_samples: int = dynamics.LSV_DENSITY_SAMPLES,
    ):
        if not allow_periodic and dynamics.is_periodic(system, obs.center):
            raise ConfigError(
                f"centro x~={obs.center:.8g} é periódico para {system.name}; "
                "use allow_periodic para forçar"
            )
        self.system = system
        self.obs = obs
        self.generation_mode = generation_mode
        self.lsv_samples = lsv_samples
        self._rho: Optional[float] = None

    @property
    def name(self) -> str:
        return f"{self.system.name}/{self.obs.name}"

    @property
    def rho(self) -> float:
        if self._rho is None:
            self._rho = dynamics.invariant_density(self.system, self.obs.center, self.lsv_samples)
        return self._rho

    @property
    def rho_is_exact(self) -> bool:
        return dynamics.density_is_exact(self.system)

    def limit(self) -> GevLimit:
        return limit_law(self.obs, self.rho)

    def states_block(self, length: int, rngs: Sequence[np.random.Generator], burn_in: int = 0) -> np.ndarray:
        spec = OrbitSpec(length=length, burn_in=burn_in, generation_mode=self.generation_mode)
        return dynamics.sample_orbit_block(self.system, spec, rngs)

    def series_block(self, length: int, rngs: Sequence[np.random.Generator], burn_in: int = 0) -> np.ndarray:
        return evaluate(self.obs, self.states_block(length, rngs, burn_in))

    def series_cursor(self, rngs: Sequence[np.random.Generator], burn_in: int = 0) -> "SeriesCursor":
        spec = OrbitSpec(length=1, burn_in=burn_in, generation_mode=self.generation_mode)
        return SeriesCursor(self.obs, dynamics.OrbitCursor(self.system, spec, rngs))


class _IidStates:
    def __init__(self, rngs: Sequence[np.random.Generator]):
        self.rngs = list(rngs)
        self.size = len(self.rngs)

    def take(self, m: int, rows: Optional[Sequence[int]] = None) -> np.ndarray:
        idx = range(self.size) if rows is None else rows
        return np.vstack([self.rngs[i].random(int(m)) for i in idx]) if len(idx) else np.empty((0, int(m)))


class SeriesCursor:
    """Série X = phi(órbita) entregue em pedaços; take(m, rows) estende só as linhas pedidas."""

    def __init__(self, obs: Observable, states):
        self.obs = obs
        self.states = states

    @property
    def size(self) -> int:
        return self.states.size

    def take(self, m: int, rows: Optional[Sequence[int]] = None) -> np.ndarray:
        return evaluate(self.obs, self.states.take(m, rows))


class IidUniform:
    """Modelo nulo: estados iid uniformes (densidade 1) com o mesmo observável."""

    rho_is_exact = True

    def __init__(self, obs: Observable):
        self.obs = obs
        self.rho = 1.0

    @property
    def name(self) -> str:
        return f"iid/{self.obs.name}"

    def limit(self) -> GevLimit:
        return limit_law(self.obs, self.rho)

    def states_block(self, length: int, rngs: Sequence[np.random.Generator], burn_in: int = 0) -> np.ndarray:
        return np.vstack([r.random(int(length)) for r in rngs])

    def series_block(self, length: int, rngs: Sequence[np.random.Generator], burn_in: int = 0) -> np.ndarray:
        return evaluate(self.obs, self.states_block(length, rngs, burn_in))

    def series_cursor(self, rngs: Sequence[np.random.Generator], burn_in: int = 0) -> SeriesCursor:
        return SeriesCursor(self.obs, _IidStates(rngs))
