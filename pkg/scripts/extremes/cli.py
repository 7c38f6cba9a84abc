#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Laboratório de extremos: linha de comando.

Subcomandos:
  simulate-max      Y_n(t) por trial + KS contra G
  simulate-records  R_n / V_n, testes de Poisson e crescimento de W_n
  sample-extremal   caminhos do processo extremal-G (cadeia de saltos x PRM planar)
  sample-prm        padrões de PRM (com afinamento opcional)
  xi-n              contagens do processo planar xi_n em retângulos
  dprime            diagnóstico D' por tamanho de bloco
  block-indep       tabela de independência de blocos
  skorokhod-dist    distância J1 entre dois CSVs de caminho
  selftest          suíte de propriedades em tamanho reduzido

Exit: 0 ok, 2 configuração inválida, 3 veredito com --assert falhou.
"""

import os
import sys

# garante que o root do repo está no PYTHONPATH
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

import argparse
import time
from typing import List, Optional

from scripts.extremes import __version__
from scripts.extremes import experiments
from scripts.extremes.config import (
    INTENSITY_CHOICES,
    MAP_CHOICES,
    OBSERVABLE_CHOICES,
    load_config,
    resolve_config,
)
from scripts.extremes.errors import ConfigError
from scripts.extremes.streams import worker_count
from scripts.tools import provenance, provenance_lines, run_counter, run_dir, write_csv, write_json

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSERT = 3

EXPERIMENTS = {
    "simulate-max": experiments.simulate_max,
    "simulate-records": experiments.simulate_records,
    "sample-extremal": experiments.sample_extremal,
    "sample-prm": experiments.sample_prm_experiment,
    "xi-n": experiments.xi_n,
    "dprime": experiments.dprime,
    "block-indep": experiments.block_indep,
    "selftest": experiments.selftest,
}

S = argparse.SUPPRESS


def _add_experiment_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", default=None, help="JSON com a configuração (flags têm prioridade)")
    p.add_argument("--map", choices=MAP_CHOICES, default=S)
    p.add_argument("--alpha", type=float, default=S, help="parâmetro do LSV")
    p.add_argument("--observable", choices=OBSERVABLE_CHOICES, default=S)
    p.add_argument("--obs-alpha", dest="obs_alpha", type=float, default=S)
    p.add_argument("--obs-c", dest="obs_c", type=float, default=S, help="nível C do observável bounded")
    p.add_argument("--center", type=float, default=S, help="centro x~ (padrão 1/sqrt(2))")
    p.add_argument("--allow-periodic", dest="allow_periodic", action="store_true", default=S)
    p.add_argument("--mode", dest="generation_mode", choices=("forward", "pullback"), default=S)
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--trials", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--window", dest="windows", nargs=2, type=float, action="append", default=S,
                   metavar=("A", "B"), help="janela (A, B]; repetível")
    p.add_argument("--value-window", dest="value_windows", nargs=2, type=float, action="append",
                   default=S, metavar=("C", "D"))
    p.add_argument("--threshold", dest="thresholds", type=float, action="append", default=S,
                   help="nível (x ou u, conforme o subcomando); repetível")
    p.add_argument("--record-horizon", dest="record_horizon", type=float, default=S,
                   help="recordes de valor até T*n (simulate-records)")
    p.add_argument("--t-hi", dest="t_hi", type=float, default=S)
    p.add_argument("--t-start", dest="t_start", type=float, default=S)
    p.add_argument("--t-end", dest="t_end", type=float, default=S)
    p.add_argument("--times", nargs="+", type=float, default=S)
    p.add_argument("--intensity", choices=INTENSITY_CHOICES, default=S)
    p.add_argument("--rate", type=float, default=S)
    p.add_argument("--thin", type=float, default=S)
    p.add_argument("--k-block", dest="k_blocks", type=int, action="append", default=S)
    p.add_argument("--output-dir", dest="output_dir", default=S)
    p.add_argument("--workers", type=int, default=S)
    p.add_argument("--assert", dest="assert_", action="store_true", default=S,
                   help="exit 3 se algum veredito afirmado falhar")
    p.add_argument("--quiet", action="store_true", default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extremes", description="Laboratório de extremos de mapas caóticos")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        _add_experiment_flags(sub.add_parser(name))
    sk = sub.add_parser("skorokhod-dist", help="distância J1 entre dois CSVs de caminho")
    sk.add_argument("path_a")
    sk.add_argument("path_b")
    sk.add_argument("--a", type=float, default=None)
    sk.add_argument("--b", type=float, default=None)
    return parser


def _write_outputs(cfg, result, prov) -> str:
    out = run_dir(cfg.output_dir, cfg.command)
    header = provenance_lines(prov)
    for stem, table in result.tables.items():
        write_csv(os.path.join(out, f"{stem}.csv"), table, header=header)
    write_json(os.path.join(out, "summary.json"), {"provenance": prov, "summary": result.summary})
    write_json(os.path.join(out, "verdicts.json"), {"provenance": prov, "verdicts": result.verdicts})
    return out


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.command == "skorokhod-dist":
        try:
            res = experiments.skorokhod_dist(args.path_a, args.path_b, args.a, args.b)
        except (ConfigError, ValueError, OSError) as e:
            print(f"[skorokhod-dist] erro: {e}")
            return EXIT_CONFIG
        d0 = res.summary["d_0inf"]
        print(f"[skorokhod-dist] d_[{res.summary['a']:g},{res.summary['b']:g}] = {res.summary['d_ab']:.12g}")
        if d0 is not None:
            print(f"[skorokhod-dist] d_0inf = {d0:.12g}")
        return EXIT_OK

    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        file_values = load_config(args.config) if args.config else {}
        cfg = resolve_config(args.command, file_values, overrides)
        cfg.workers = worker_count(cfg.workers)
        prov = provenance(cfg.to_dict(), __version__)
        numero = run_counter(os.path.join(cfg.output_dir, "counters.json"), key=cfg.command)
        print(f"[{cfg.command}] execução Nº {numero} | config_sha256={prov['config_sha256'][:12]} "
              f"| seed={cfg.seed} | workers={cfg.workers}")
        t0 = time.time()
        result = EXPERIMENTS[cfg.command](cfg)
    except ConfigError as e:
        print(f"[config] erro: {e}")
        return EXIT_CONFIG
    dt = time.time() - t0

    out = _write_outputs(cfg, result, prov)
    print(f"[{cfg.command}] saídas em {out} ({dt:.1f}s)")

    failed = result.failed_asserted
    if failed:
        print(f"[{cfg.command}] {len(failed)} veredito(s) falharam: {', '.join(v['test'] for v in failed)}")
        if cfg.assert_:
            return EXIT_ASSERT
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
