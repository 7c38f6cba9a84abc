import os
import io
import json
import hashlib
from datetime import datetime, timezone
from typing import Dict, Iterable, Tuple

import pandas as pd


def _ensure_dir_for_file(path: str):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)


def config_digest(cfg: Dict) -> str:
    """SHA-256 do JSON canônico (chaves ordenadas, sem espaços)."""
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def provenance(cfg: Dict, version: str) -> Dict:
    return {
        "version": version,
        "config_sha256": config_digest(cfg),
        "seed": cfg.get("seed"),
        "config": cfg,
    }


def provenance_lines(prov: Dict) -> list:
    return [
        f"extremes {prov['version']} config_sha256={prov['config_sha256']} seed={prov['seed']}",
        "config=" + json.dumps(prov["config"], sort_keys=True, separators=(",", ":")),
    ]


def run_counter(path: str, key: str) -> int:
    """Contador persistente de execuções por subcomando (só para o log)."""
    _ensure_dir_for_file(path)
    data = {}
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except ValueError:
                data = {}
    n = int(data.get(key, 0)) + 1
    data[key] = n
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
    return n


def run_dir(output_dir: str, command: str) -> str:
    """pipelines/extremes/<comando>_<UTC>; sufixo _2, _3... se já existir."""
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    base = os.path.join(output_dir, f"{command}_{stamp}")
    path, k = base, 1
    while os.path.exists(path):
        k += 1
        path = f"{base}_{k}"
    os.makedirs(path)
    return path


def write_csv(path: str, df: pd.DataFrame, header: Iterable[str] = ()):
    """CSV com linhas de cabeçalho '# chave=valor' antes da tabela."""
    _ensure_dir_for_file(path)
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    df.to_csv(buf, index=False, lineterminator="\n")
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(buf.getvalue())


def read_csv_with_header(path: str) -> Tuple[pd.DataFrame, Dict[str, str]]:
    header: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if "=" in body and " " not in body.split("=", 1)[0]:
                k, v = body.split("=", 1)
                header[k.strip()] = v.strip()
    df = pd.read_csv(path, comment="#")
    return df, header


def write_json(path: str, payload):
    _ensure_dir_for_file(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
