# coding: utf-8
"""
ExperimentConfig: padrões documentados -> arquivo JSON (--config) -> flags.

Campos obrigatórios no JSON: map, observable, n, trials, seed.
Variáveis de ambiente:
  - EXTREMA_OUTPUT_DIR  raiz das saídas (padrão pipelines/extremes)
  - EXTREMA_THREADS     teto de workers (ver streams.worker_count)
"""

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, Optional

from scripts.extremes.errors import ConfigError, ExtremesError
from scripts.extremes.observables import DEFAULT_CENTER

MAP_CHOICES = ("tent", "doubling", "logistic4", "lsv", "iid")
OBSERVABLE_CHOICES = ("neglog", "pareto", "bounded")
INTENSITY_CHOICES = ("uniform", "record-time", "record-value", "planar")
REQUIRED_FIELDS = ("map", "observable", "n", "trials", "seed")
# campos que só mudam como a execução roda, não o resultado
RUNTIME_FIELDS = ("workers", "quiet", "assert_")


def default_output_dir() -> str:
    return os.environ.get("EXTREMA_OUTPUT_DIR", os.path.join("pipelines", "extremes"))


@dataclass
class ExperimentConfig:
    command: str = "selftest"
    map: str = "tent"
    alpha: Optional[float] = None
    observable: str = "neglog"
    obs_alpha: Optional[float] = None
    obs_c: float = 0.0
    center: float = DEFAULT_CENTER
    allow_periodic: bool = False
    generation_mode: Optional[str] = None
    n: int = 10_000
    trials: int = 1_000
    seed: int = 1
    windows: List[List[float]] = field(default_factory=lambda: [[0.25, 1.0]])
    thresholds: List[float] = field(default_factory=lambda: [1.0])
    value_windows: List[List[float]] = field(default_factory=lambda: [[0.0, 1.0]])
    # V_n usa recordes até record_horizon * n; G(1)^30 ~ 3e-10 no caso Gumbel padrão
    record_horizon: float = 30.0
    t_hi: float = 1.0
    t_start: float = 0.05
    t_end: float = 8.0
    times: List[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    intensity: str = "uniform"
    rate: float = 1.0
    thin: Optional[float] = None
    k_blocks: List[int] = field(default_factory=lambda: [10, 100])
    output_dir: str = field(default_factory=default_output_dir)
    workers: int = 1
    quiet: bool = False
    assert_: bool = False

    # ------------------------------------------------------------------
    @property
    def effective_obs_alpha(self) -> Optional[float]:
        return self.obs_alpha if self.obs_alpha is not None else self.alpha

    def to_dict(self) -> Dict:
        """Config resolvida sem os campos de execução (entra no hash)."""
        d = asdict(self)
        for k in RUNTIME_FIELDS:
            d.pop(k, None)
        return d

    def unused_fields(self) -> List[str]:
        out = []
        parametric = self.observable in ("pareto", "bounded")
        if self.alpha is not None and self.map != "lsv" and not (parametric and self.obs_alpha is None):
            out.append("alpha")
        if self.obs_alpha is not None and not parametric:
            out.append("obs_alpha")
        if self.obs_c != 0.0 and self.observable != "bounded":
            out.append("obs_c")
        return out

    def validate(self):
        if self.map not in MAP_CHOICES:
            raise ConfigError(f"map desconhecido: {self.map!r} (opções: {', '.join(MAP_CHOICES)})")
        if self.observable not in OBSERVABLE_CHOICES:
            raise ConfigError(f"observable desconhecido: {self.observable!r}")
        if self.intensity not in INTENSITY_CHOICES:
            raise ConfigError(f"intensity desconhecida: {self.intensity!r}")
        for name in ("n", "trials"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name} deve ser inteiro >= 1 (recebido {v!r})")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed deve ser inteiro >= 0 (recebido {self.seed!r})")
        if self.map == "lsv" and self.alpha is None:
            raise ConfigError("map=lsv exige alpha")
        if self.observable in ("pareto", "bounded") and self.effective_obs_alpha is None:
            raise ConfigError(f"observable={self.observable} exige obs_alpha (ou alpha)")
        if not (0.0 < self.center < 1.0):
            raise ConfigError(f"center deve estar em (0,1) (recebido {self.center})")
        for w in list(self.windows) + list(self.value_windows):
            if len(w) != 2 or not float(w[0]) < float(w[1]):
                raise ConfigError(f"janela inválida: {w!r}")
        if not self.thresholds:
            raise ConfigError("thresholds vazio")
        if not (0.0 < self.t_start < self.t_end) or not self.t_hi > 0.0:
            raise ConfigError("exige 0 < t_start < t_end e t_hi > 0")
        if not (math.isfinite(float(self.record_horizon)) and float(self.record_horizon) >= 1.0):
            raise ConfigError(f"record_horizon deve ser >= 1 (recebido {self.record_horizon})")
        if self.thin is not None and not (0.0 < self.thin < 1.0):
            raise ConfigError(f"thin deve estar em (0,1) (recebido {self.thin})")
        if any(int(k) < 1 for k in self.k_blocks):
            raise ConfigError("k_blocks devem ser >= 1")
        if self.workers < 0:
            raise ConfigError("workers deve ser >= 0")
        if not all(math.isfinite(float(x)) for x in self.thresholds):
            raise ConfigError("thresholds devem ser finitos")
        return self


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def load_config(path: str) -> Dict:
    """Lê o JSON; devolve só os campos conhecidos. Desconhecidos viram aviso."""
    if not os.path.exists(path):
        raise ConfigError(f"arquivo de config não encontrado: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except ValueError as e:
        raise ConfigError(f"JSON malformado em {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: esperado um objeto JSON")
    missing = [k for k in REQUIRED_FIELDS if k not in data]
    if missing:
        raise ConfigError(f"{path}: campo obrigatório ausente: {missing[0]}")
    known, unknown = {}, []
    for k, v in data.items():
        name = "assert_" if k == "assert" else k
        if name in _FIELD_NAMES:
            known[name] = v
        else:
            unknown.append(k)
    if unknown:
        print(f"[config] aviso: campos desconhecidos ignorados: {', '.join(sorted(unknown))}")
    return known


def resolve_config(command: str, file_values: Optional[Dict] = None, overrides: Optional[Dict] = None) -> ExperimentConfig:
    values: Dict = {}
    values.update(file_values or {})
    values.update({k: v for k, v in (overrides or {}).items() if k in _FIELD_NAMES})
    values["command"] = command
    try:
        cfg = ExperimentConfig(**values)
    except TypeError as e:
        raise ConfigError(str(e)) from e
    try:
        cfg.windows = [[float(a), float(b)] for a, b in cfg.windows]
        cfg.value_windows = [[float(a), float(b)] for a, b in cfg.value_windows]
        cfg.thresholds = [float(x) for x in cfg.thresholds]
        cfg.times = [float(x) for x in cfg.times]
        cfg.k_blocks = [int(k) for k in cfg.k_blocks]
        cfg.validate()
    except (TypeError, ValueError) as e:
        if isinstance(e, ExtremesError):
            raise
        raise ConfigError(str(e)) from e
    ignored = cfg.unused_fields()
    if ignored:
        print(f"[config] aviso: campos sem efeito para esta configuração: {', '.join(ignored)}")
    return cfg
