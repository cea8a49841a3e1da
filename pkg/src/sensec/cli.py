"""Experiment driver: analytics, simulation, and design runs emitting CSV.

Every command writes one CSV table (header row, LF endings, '.' decimals) so
results can be plotted or diffed externally.  Exit status: 0 on success, 2
when a requested design is infeasible, 1 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import design as dsg
from . import montecarlo as mc
from .network import ConfigError, NetworkConfig, dbm_to_linear, load_config
from .outage import (
    cop_coefficients,
    cop_general,
    cop_interference_limited,
    sop_general,
    sop_interference_limited,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def _write_csv(path: str, header: list[str], rows) -> None:
    def dump(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])

    if path == "-":
        dump(sys.stdout)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            dump(fh)
    except OSError as exc:
        raise ConfigError(f"cannot write output file {path}: {exc}") from exc


def _db_to_linear_ratio(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _beta_grid(args) -> list[float]:
    if args.beta_db_points < 1:
        raise ConfigError("--beta-db-points must be >= 1")
    if args.beta_db_points == 1:
        return [args.beta_db_start]
    step = (args.beta_db_stop - args.beta_db_start) / (args.beta_db_points - 1)
    return [args.beta_db_start + i * step for i in range(args.beta_db_points)]


def _cmd_cop(args) -> int:
    cfg = load_config(args.config)
    rows = []
    header = ["beta_t_db", "cop_analytic", "cop_il"]
    if args.simulate:
        header += ["cop_sim", "cop_sim_stderr"]
    for bdb in _beta_grid(args):
        beta = _db_to_linear_ratio(bdb)
        row = [
            bdb,
            cop_general(cfg, args.rho, args.k, beta),
            cop_interference_limited(cfg, args.rho, args.k, beta),
        ]
        if args.simulate:
            est = mc.simulate_cop(cfg, args.rho, args.k, beta, args.trials, seed=args.seed)
            row += [est.p_hat, est.stderr]
        rows.append(row)
    _write_csv(args.out, header, rows)
    return EXIT_OK


def _cmd_sop(args) -> int:
    cfg = load_config(args.config)
    rows = []
    header = ["beta_e_db", "sop_analytic", "sop_il"]
    if args.simulate:
        header += ["sop_sim", "sop_sim_stderr"]
    mode = "per-eavesdropper" if args.jammer_mode == "per-eve" else "common-field"
    for bdb in _beta_grid(args):
        beta = _db_to_linear_ratio(bdb)
        row = [
            bdb,
            sop_general(cfg, args.rho, beta),
            sop_interference_limited(cfg, args.rho, beta),
        ]
        if args.simulate:
            est = mc.simulate_sop(
                cfg, args.rho, beta, args.trials, seed=args.seed, jammer_mode=mode
            )
            row += [est.p_hat, est.stderr]
        rows.append(row)
    _write_csv(args.out, header, rows)
    return EXIT_OK


def _cmd_throughput(args) -> int:
    cfg = load_config(args.config)
    try:
        beta_e = dsg.optimal_redundancy(cfg, args.rho, args.epsilon, model=args.model)
    except dsg.InfeasibleDesignError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    co = cop_coefficients(cfg, args.rho, args.k, beta_e)
    rows = []
    n = args.points
    for i in range(n):
        r_s = args.rs_max * (i + 1) / n
        beta_s = 2.0**r_s - 1.0
        t_model = max(
            (1.0 - co.A_k * (beta_s + co.B_k) ** co.delta) * math.log2(1.0 + beta_s), 0.0
        )
        beta_t = beta_e + (1.0 + beta_e) * beta_s
        t_exact = r_s * (1.0 - cop_general(cfg, args.rho, args.k, beta_t))
        rows.append([r_s, beta_s, t_model, t_exact])
    _write_csv(args.out, ["r_s", "beta_s", "t_k_model", "t_k_exact"], rows)
    return EXIT_OK


_DESIGN_HEADER = [
    "scheme",
    "feasible",
    "rho_star",
    "t_sum",
    "case",
    "g_residual",
    "k_blocking",
    "sensor",
    "R_t",
    "R_s",
    "R_e",
    "t_k",
    "cop_low",
    "cop_il",
    "sop",
]


def _design_rows(res: dsg.DesignResult):
    for i in range(len(res.t_k)):
        yield [
            res.scheme,
            res.feasible,
            res.rho_star,
            res.t_sum,
            res.case or "-",
            res.g_residual,
            res.k_blocking,
            i + 1,
            res.R_t[i],
            res.R_s[i],
            res.R_e[i],
            res.t_k[i],
            res.cop_low_check[i],
            res.cop_il_check[i],
            res.sop_check,
        ]


def _cmd_optimize(args) -> int:
    cfg = load_config(args.config)
    schemes = ("optimal", "suboptimal") if args.scheme == "both" else (args.scheme,)
    rows = []
    any_infeasible = False
    for scheme in schemes:
        if scheme == "optimal":
            res = dsg.optimal_design(
                cfg, args.sigma, args.epsilon, rho_grid_step=args.rho_grid_step, model=args.model
            )
        else:
            res = dsg.suboptimal_design(cfg, args.sigma, args.epsilon)
        any_infeasible |= not res.feasible
        rows.extend(_design_rows(res))
    _write_csv(args.out, _DESIGN_HEADER, rows)
    return EXIT_INFEASIBLE if any_infeasible else EXIT_OK


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    beta = _db_to_linear_ratio(args.beta_db)
    mode = "per-eavesdropper" if args.jammer_mode == "per-eve" else "common-field"
    if args.radii:
        radii = [float(r) for r in args.radii.split(",")]
        rows = mc.convergence_probe(
            cfg,
            args.rho,
            args.quantity,
            radii,
            k=args.k,
            beta=beta,
            trials=args.trials,
            seed=args.seed,
            jammer_mode=mode,
        )
        _write_csv(
            args.out,
            ["r_max", "p_hat", "stderr", "stable"],
            [[r.r_max, r.p_hat, r.stderr, r.stable] for r in rows],
        )
        return EXIT_OK
    if args.quantity == "cop":
        est = mc.simulate_cop(
            cfg, args.rho, args.k, beta, args.trials, seed=args.seed, r_max=args.r_max
        )
    else:
        est = mc.simulate_sop(
            cfg, args.rho, beta, args.trials, seed=args.seed, r_max=args.r_max, jammer_mode=mode
        )
    _write_csv(
        args.out,
        ["quantity", "k", "beta_db", "p_hat", "stderr", "trials", "seed", "r_max", "backend"],
        [[args.quantity, args.k, args.beta_db, est.p_hat, est.stderr, est.trials, est.seed, est.r_max, est.backend]],
    )
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    values = [float(v) for v in args.values.split(",")]
    rows = []
    any_infeasible = False
    for v in values:
        if args.param == "sigma":
            c, sig, eps = cfg, v, args.epsilon
        elif args.param == "epsilon":
            c, sig, eps = cfg, args.sigma, v
        elif args.param in ("K", "M_c", "M_e"):
            c, sig, eps = cfg.with_(**{args.param: int(v)}), args.sigma, args.epsilon
        else:
            c, sig, eps = cfg.with_(**{args.param: v}), args.sigma, args.epsilon
        if args.scheme == "optimal":
            res = dsg.optimal_design(c, sig, eps, model=args.model)
        else:
            res = dsg.suboptimal_design(c, sig, eps)
        any_infeasible |= not res.feasible
        rows.append([args.param, v, res.scheme, res.feasible, res.rho_star, res.t_sum, res.case or "-"])
    _write_csv(
        args.out,
        ["param", "value", "scheme", "feasible", "rho_star", "t_sum", "case"],
        rows,
    )
    return EXIT_INFEASIBLE if any_infeasible else EXIT_OK


def _figure_base(**overrides) -> NetworkConfig:
    # shared plot baseline: P_a = 10 dBm, omega = 0 dBm, alpha = 4, lambda_s = 1
    params = dict(
        lambda_s=1.0,
        lambda_c=0.01,
        lambda_e=1e-4,
        K=3,
        M_c=8,
        M_e=2,
        P_a=10.0,
        P_j=10.0,
        omega=1.0,
        alpha=4.0,
    )
    params.update(overrides)
    return NetworkConfig(**params)


def _parse_list(text: str, conv):
    return [conv(v) for v in text.split(",")]


def _cmd_reproduce(args) -> int:
    fig = args.figure
    if fig == 2:
        header = ["m_c", "big_k", "beta_t_db", "cop_analytic", "cop_il"]
        if args.simulate:
            header += ["cop_sim", "cop_sim_stderr"]
        rows = []
        grid = [args.beta_db_start + i * (args.beta_db_stop - args.beta_db_start) / (args.beta_db_points - 1) for i in range(args.beta_db_points)]
        for m_c in _parse_list(args.mc_list, int):
            for K in _parse_list(args.k_list, int):
                cfg = _figure_base(M_c=m_c, K=K)
                for bdb in grid:
                    beta = _db_to_linear_ratio(bdb)
                    row = [m_c, K, bdb,
                           cop_general(cfg, args.rho, 1, beta),
                           cop_interference_limited(cfg, args.rho, 1, beta)]
                    if args.simulate:
                        est = mc.simulate_cop(cfg, args.rho, 1, beta, args.trials, seed=args.seed)
                        row += [est.p_hat, est.stderr]
                    rows.append(row)
        _write_csv(args.out, header, rows)
        return EXIT_OK
    if fig == 3:
        header = ["m_e", "lambda_e", "beta_e_db", "sop_analytic", "sop_il"]
        if args.simulate:
            header += ["sop_sim", "sop_sim_stderr"]
        rows = []
        grid = [args.beta_db_start + i * (args.beta_db_stop - args.beta_db_start) / (args.beta_db_points - 1) for i in range(args.beta_db_points)]
        for m_e in _parse_list(args.me_list, int):
            for lam_e in _parse_list(args.lambda_e_list, float):
                cfg = _figure_base(M_e=m_e, lambda_e=lam_e)
                for bdb in grid:
                    beta = _db_to_linear_ratio(bdb)
                    row = [m_e, lam_e, bdb,
                           sop_general(cfg, args.rho, beta),
                           sop_interference_limited(cfg, args.rho, beta)]
                    if args.simulate:
                        est = mc.simulate_sop(cfg, args.rho, beta, args.trials, seed=args.seed)
                        row += [est.p_hat, est.stderr]
                    rows.append(row)
        _write_csv(args.out, header, rows)
        return EXIT_OK
    if fig == 4:
        rows = []
        for lam_c in _parse_list(args.lambda_c_list, float):
            for lam_e in _parse_list(args.lambda_e_list, float):
                cfg = _figure_base(
                    lambda_c=lam_c, lambda_e=lam_e, M_c=16, K=4, M_e=2,
                    P_j=dbm_to_linear(0.0),
                )
                rho = 0.01
                beta_e = dsg.optimal_redundancy(cfg, rho, 0.1, model="il")
                co = cop_coefficients(cfg, rho, 1, beta_e)
                for i in range(args.points):
                    r_s = 4.0 * (i + 1) / args.points
                    beta_s = 2.0**r_s - 1.0
                    t_k = max(
                        (1.0 - co.A_k * (beta_s + co.B_k) ** co.delta) * math.log2(1.0 + beta_s),
                        0.0,
                    )
                    rows.append([lam_c, lam_e, r_s, t_k])
        _write_csv(args.out, ["lambda_c", "lambda_e", "r_s", "t_k"], rows)
        return EXIT_OK
    if fig == 5:
        rows = []
        for sigma in _parse_list(args.sigma_list, float):
            for epsilon in _parse_list(args.epsilon_list, float):
                cfg = _figure_base(M_c=16, K=4, M_e=2, lambda_e=1e-4, P_j=dbm_to_linear(1.0))
                n = args.points
                for i in range(n):
                    rho = (i + 1) / n
                    t_opt = dsg.optimal_throughput_at_rho(cfg, sigma, epsilon, rho)[0]
                    try:
                        t_sub = dsg.suboptimal_throughput(cfg, rho, sigma, epsilon).t_sum
                    except dsg.InfeasibleDesignError:
                        t_sub = 0.0
                    rows.append([sigma, epsilon, rho, t_opt, t_sub])
        _write_csv(args.out, ["sigma", "epsilon", "rho", "t_optimal", "t_suboptimal"], rows)
        return EXIT_OK
    if fig == 6:
        rows = []
        lam_grid = np.logspace(-5, -3, args.points)
        for epsilon in _parse_list(args.epsilon_list, float):
            for lam_c, m_c in zip(
                _parse_list(args.lambda_c_list, float), _parse_list(args.mc_list, int)
            ):
                for lam_e in lam_grid:
                    cfg = _figure_base(
                        lambda_c=lam_c, M_c=m_c, K=4, M_e=2,
                        lambda_e=float(lam_e), P_j=dbm_to_linear(1.0),
                    )
                    od = dsg.optimal_design(cfg, 0.2, epsilon)
                    sd = dsg.suboptimal_design(cfg, 0.2, epsilon)
                    rows.append([epsilon, lam_c, m_c, lam_e, od.t_sum, sd.t_sum])
        _write_csv(
            args.out,
            ["epsilon", "lambda_c", "m_c", "lambda_e", "t_optimal", "t_suboptimal"],
            rows,
        )
        return EXIT_OK
    raise ConfigError(f"unknown figure {fig}; supported: 2, 3, 4, 5, 6")


def _add_common(p, *, config_required=True):
    p.add_argument("--config", required=config_required, help="key=value network config file")
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=float, default=0.05, help="jamming probability")
    p.add_argument("--sigma", type=float, default=0.1, help="max connection outage")
    p.add_argument("--epsilon", type=float, default=0.1, help="max secrecy outage")
    p.add_argument("--model", choices=("general", "il"), default="il")
    p.add_argument("--jammer-mode", choices=("per-eve", "common"), default="per-eve")
    p.add_argument("--simulate", action="store_true", help="add Monte-Carlo columns")
    p.add_argument("--threads", type=int, default=None, help="compiled-backend thread count")


def _add_beta_grid(p, start=0.0, stop=20.0, points=9):
    p.add_argument("--beta-db-start", type=float, default=start)
    p.add_argument("--beta-db-stop", type=float, default=stop)
    p.add_argument("--beta-db-points", type=int, default=points)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sensec",
        description="Outage analytics, Monte-Carlo validation, and secrecy-throughput design runs",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cop", help="connection outage vs codeword threshold")
    _add_common(p)
    _add_beta_grid(p)
    p.add_argument("--k", type=int, default=1, help="decoding-order index (1 = nearest)")
    p.set_defaults(fn=_cmd_cop)

    p = sub.add_parser("sop", help="secrecy outage vs redundancy threshold")
    _add_common(p)
    _add_beta_grid(p)
    p.set_defaults(fn=_cmd_sop)

    p = sub.add_parser("throughput", help="per-sensor secrecy throughput vs secrecy rate")
    _add_common(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--rs-max", type=float, default=4.0)
    p.add_argument("--points", type=int, default=41)
    p.set_defaults(fn=_cmd_throughput)

    p = sub.add_parser("optimize", help="joint rate/jamming design")
    _add_common(p)
    p.add_argument("--scheme", choices=("optimal", "suboptimal", "both"), default="both")
    p.add_argument("--rho-grid-step", type=float, default=0.01)
    p.set_defaults(fn=_cmd_optimize)

    p = sub.add_parser("simulate", help="Monte-Carlo outage estimate or radius probe")
    _add_common(p)
    p.add_argument("--quantity", choices=("cop", "sop"), required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--beta-db", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--radii", default=None, help="comma list of radii: convergence probe")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("sweep", help="re-run a design across one parameter")
    _add_common(p)
    p.add_argument("--param", required=True, choices=sorted(dsg.RHO_DIRECTIONS))
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--scheme", choices=("optimal", "suboptimal"), default="suboptimal")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("reproduce-figure", help="canned parameter studies 2-6")
    p.add_argument("figure", type=int)
    _add_common(p, config_required=False)
    _add_beta_grid(p)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--mc-list", default="8,16")
    p.add_argument("--k-list", default="2,3")
    p.add_argument("--me-list", default="1,2")
    p.add_argument("--lambda-e-list", default="0.0001,0.001")
    p.add_argument("--lambda-c-list", default="0.01,0.02")
    p.add_argument("--sigma-list", default="0.1,0.2")
    p.add_argument("--epsilon-list", default="0.05,0.1")
    p.set_defaults(fn=_cmd_reproduce)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "threads", None):
        mc.set_threads(args.threads)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except dsg.InfeasibleDesignError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
