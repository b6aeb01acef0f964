"""Command-line front end.

Commands:
  validate-lemmas   Monte Carlo + exact-oracle checks of the rank-deficiency laws
  simulate          delay estimation with bound comparison
  bounds-table      pure bound evaluation over a parameter grid
  compare           delay + average-delay estimation against every applicable bound

Configuration resolution order: built-in defaults, then a JSON config file
(--config), then DENSELAB_* environment variables, then explicit flags.  The
resolved configuration (minus execution-only keys such as the worker count)
is embedded in every output header, and outputs are byte-identical for a
given resolved configuration and seed regardless of worker count.
"""

import argparse
import json
import math
import os
import sys
from multiprocessing import get_context

import numpy as np

from . import __version__, bounds as bounds_mod, ranklaws
from .delaystats import (
    MODE_AVG,
    MODE_DELAY,
    ExperimentPlan,
    compare as compare_row,
    estimate_avg_coding_delay,
    estimate_coding_delay,
)
from .densecode import run_session, trace_event_rows
from .errors import ContractViolationError, FeasibilityError
from .traffic import (
    LOSS_BERNOULLI,
    LOSS_LOSSLESS,
    SCHEDULE_POISSON,
    SCHEDULE_REGULAR,
    NetworkConfig,
    resolve_horizon,
    sample_traffic,
)
from .delaystats import derive_seed

ENV_PREFIX = "DENSELAB_"

# Keys that name execution resources (parallelism, file paths) rather than
# the experiment itself; they stay out of the embedded header so that reruns
# and replays stay byte-comparable.
_EXECUTION_KEYS = {"workers", "out", "record_traffic", "replay_traffic", "export_trace", "config"}

_BOOL_KEYS = set()
_INT_KEYS = {
    "seed", "workers", "trials", "codes", "traffics_per_code", "links",
    "messages", "max_gamma", "exact_cap", "r", "node_i", "part_j",
}
_FLOAT_KEYS = {"epsilon", "horizon", "f_k", "bound_scale", "guard_ratio"}
_LIST_FLOAT_KEYS = {"rate", "success_prob"}
_STR_KEYS = {
    "schedule", "loss", "mode", "bound", "preset", "assertion_mode",
    "record_traffic", "replay_traffic", "export_trace", "k_grid",
    "bounds", "assert_bounds", "command", "out", "config",
}


def _coerce(key: str, value):
    if value is None:
        return None
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _LIST_FLOAT_KEYS:
        if isinstance(value, (list, tuple)):
            return tuple(float(v) for v in value)
        return tuple(float(v) for v in str(value).split(","))
    return value


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    cfg = dict(defaults)
    path = getattr(args, "config", None) or os.environ.get(ENV_PREFIX + "CONFIG")
    if path:
        with open(path) as fh:
            loaded = json.load(fh)
        if "command" in loaded and loaded["command"] != args.command:
            raise ContractViolationError(
                f"config file is for command {loaded['command']!r}, not {args.command!r}"
            )
        for key, val in loaded.items():
            if key == "command":
                continue
            cfg[key] = _coerce(key, val)
    for key in list(cfg):
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            cfg[key] = _coerce(key, env)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = _coerce(key, val)
    return cfg


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return repr(x)
    return str(x)


def _header_config(cfg: dict) -> str:
    shown = {k: v for k, v in cfg.items() if k not in _EXECUTION_KEYS and v is not None}
    return json.dumps(shown, sort_keys=True, separators=(",", ":"), default=list)


def _write_report(out, cfg: dict, seed: int, columns, rows) -> None:
    lines = [
        f"# denselab {__version__}",
        f"# seed {seed}",
        f"# config {_header_config(cfg)}",
        ",".join(columns),
    ]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _network_config(cfg: dict) -> NetworkConfig:
    schedule = cfg.get("schedule") or SCHEDULE_REGULAR
    loss = cfg.get("loss") or LOSS_LOSSLESS
    return NetworkConfig(
        links=cfg["links"],
        messages=cfg["messages"],
        schedule=schedule,
        loss=loss,
        rates=cfg.get("rate") if schedule == SCHEDULE_POISSON else None,
        success_probs=cfg.get("success_prob") if loss == LOSS_BERNOULLI else None,
        horizon=cfg.get("horizon"),
    )


def _effective_probs(net: NetworkConfig) -> tuple[float, ...]:
    """Per-link expected successes per time unit, the bound-level p."""
    out = []
    for i in range(net.links):
        r = 1.0 if net.schedule == SCHEDULE_REGULAR else net.rates[i]
        if net.loss == LOSS_BERNOULLI:
            r *= net.success_probs[i]
        out.append(r)
    return tuple(out)


def _p_or_lambda(net: NetworkConfig) -> str:
    parts = []
    if net.schedule == SCHEDULE_POISSON:
        parts.append("lambda=" + ";".join(repr(x) for x in net.rates))
    if net.loss == LOSS_BERNOULLI:
        parts.append("p=" + ";".join(repr(x) for x in net.success_probs))
    return "|".join(parts) if parts else "-"


def _bound_query(net: NetworkConfig, epsilon: float, f_k, bound_id: str) -> bounds_mod.BoundQuery:
    probs = _effective_probs(net)
    identical = len(set(probs)) == 1
    kwargs = dict(messages=net.messages, links=net.links, epsilon=epsilon, f_k=f_k)
    if bound_id in ("thm2", "thm3"):
        if not identical:
            raise ContractViolationError(f"{bound_id} applies to identical links")
        kwargs["success_prob"] = probs[0]
    elif bound_id in ("thm4", "thm5"):
        kwargs["success_probs"] = probs
    return bounds_mod.BoundQuery(**kwargs)


def _auto_bound(net: NetworkConfig, mode: str) -> str:
    probs = _effective_probs(net)
    if net.schedule == SCHEDULE_REGULAR and net.loss == LOSS_LOSSLESS:
        return "thm1"
    if len(set(probs)) == 1:
        return "thm2" if mode == MODE_DELAY else "thm3"
    return "thm4" if mode == MODE_DELAY else "thm5"


def _applicable_bounds(net: NetworkConfig, mode: str) -> list[str]:
    probs = _effective_probs(net)
    if net.schedule == SCHEDULE_REGULAR and net.loss == LOSS_LOSSLESS:
        return ["thm1"]
    out = []
    if len(set(probs)) == 1:
        out.append("thm2" if mode == MODE_DELAY else "thm3")
    elif probs.count(min(probs)) == 1:
        out.append("thm4" if mode == MODE_DELAY else "thm5")
    return out


# ---------------------------------------------------------------- lemmas ---

SIMULATE_COLUMNS = [
    "k", "L", "schedule", "loss", "p_or_lambda", "epsilon", "mode", "samples",
    "point", "upper_ci", "timeouts", "bound_id", "bound_value", "slack", "verdict",
]

LEMMA_COLUMNS = [
    "family", "params", "gamma", "threshold", "trials", "empirical", "exact",
    "bound", "hoeffding", "vacuous", "verdict",
]


def default_lemma_grid() -> list[ranklaws.StructuredSpec]:
    specs = [ranklaws.StructuredSpec.single(8, 8), ranklaws.StructuredSpec.single(16, 16)]
    for w in (2, 4):
        for r in (2, 4):
            specs.append(ranklaws.StructuredSpec.square(w, r))
    for w in (2, 3):
        for r in (2, 3):
            uniform = (r,) * w
            dip = (r,) * (w - 1) + (r - 1,)
            bump = (r,) * (w - 1) + (r + 1,)
            specs.append(ranklaws.StructuredSpec.vertical(w, r, uniform))
            specs.append(ranklaws.StructuredSpec.vertical(w, r, dip))
            specs.append(ranklaws.StructuredSpec.horizontal(w, r, uniform))
            specs.append(ranklaws.StructuredSpec.horizontal(w, r, bump))
    return specs


def quick_lemma_grid() -> list[ranklaws.StructuredSpec]:
    return [
        ranklaws.StructuredSpec.single(4, 4),
        ranklaws.StructuredSpec.square(2, 2),
        ranklaws.StructuredSpec.vertical(2, 2, (2, 1)),
        ranklaws.StructuredSpec.horizontal(2, 1, (1, 2)),
    ]


def _lemma_task(args):
    spec, trials, seed, max_gamma, exact_cap = args
    rng = np.random.default_rng(seed)
    hist = ranklaws.rank_histogram(spec, trials, rng)
    cum = np.cumsum(hist)
    slack = ranklaws.hoeffding_slack(trials, ranklaws.DEFAULT_CONFIDENCE_DELTA)
    exact_dist = None
    if spec.free_bits <= exact_cap:
        exact_dist = ranklaws.exact_rank_distribution(spec)
    rows = []
    target = spec.rank_target
    for gamma in range(0, min(max_gamma, target - 1) + 1):
        threshold = target - gamma
        empirical = float(cum[threshold - 1]) / trials if threshold >= 1 else 0.0
        bound = ranklaws.bound_for(spec, gamma)
        exact = None
        if exact_dist is not None:
            exact = float(exact_dist[:threshold].sum()) / 2.0**spec.free_bits
        ok = empirical <= bound + slack
        if exact is not None:
            ok = ok and exact <= bound and abs(empirical - exact) <= slack
        rows.append(
            [
                spec.family,
                spec.describe().replace(",", ";"),
                gamma,
                threshold,
                trials,
                empirical,
                exact,
                bound,
                slack,
                bound >= 1.0,
                "pass" if ok else "fail",
            ]
        )
    return rows


def cmd_validate_lemmas(args) -> int:
    defaults = {
        "seed": 1, "workers": 1, "trials": 100000, "preset": "default",
        "max_gamma": 8, "exact_cap": 16, "assertion_mode": "assert", "out": None,
    }
    cfg = _resolve(args, defaults)
    if cfg["trials"] < 1:
        raise ContractViolationError("trials must be >= 1")
    specs = default_lemma_grid() if cfg["preset"] == "default" else quick_lemma_grid()
    tasks = [
        (spec, cfg["trials"], derive_seed(cfg["seed"], 100, i), cfg["max_gamma"], cfg["exact_cap"])
        for i, spec in enumerate(specs)
    ]
    if cfg["workers"] > 1:
        with get_context("fork").Pool(cfg["workers"]) as pool:
            per_spec = pool.map(_lemma_task, tasks)
    else:
        per_spec = [_lemma_task(t) for t in tasks]
    rows = [row for chunk in per_spec for row in chunk]
    _write_report(cfg["out"], {**cfg, "command": "validate-lemmas"}, cfg["seed"], LEMMA_COLUMNS, rows)
    failed = any(row[-1] == "fail" for row in rows)
    return 1 if (failed and cfg["assertion_mode"] == "assert") else 0


# -------------------------------------------------------------- simulate ---


def _simulate_rows(cfg, net, bound_ids_by_mode, bound_scale=1.0):
    rows = []
    modes = []
    if cfg["mode"] in ("delay", "both"):
        modes.append(MODE_DELAY)
    if cfg["mode"] in ("avg", "both"):
        modes.append(MODE_AVG)
    plan = ExperimentPlan(
        cfg=net,
        epsilon=cfg["epsilon"],
        master_seed=cfg["seed"],
        trials=cfg.get("trials"),
        codes=cfg.get("codes"),
        traffics_per_code=cfg.get("traffics_per_code"),
    )
    record = cfg.get("record_traffic")
    replay = cfg.get("replay_traffic")
    if record:
        os.makedirs(record, exist_ok=True)
    failed = False
    for mode in modes:
        if mode == MODE_DELAY:
            est = estimate_coding_delay(plan, workers=cfg["workers"], record_dir=record, replay_dir=replay)
        else:
            est = estimate_avg_coding_delay(plan, workers=cfg["workers"], record_dir=record, replay_dir=replay)
        for bound_id, assert_mode in bound_ids_by_mode(mode):
            query = _bound_query(net, cfg["epsilon"], cfg.get("f_k"), bound_id)
            bound = bounds_mod.evaluate(bound_id, query)
            row = compare_row(est, bound, mode=assert_mode, scale=bound_scale)
            if row.verdict == "fail":
                failed = True
            rows.append(
                [
                    net.messages, net.links, net.schedule, net.loss, _p_or_lambda(net),
                    cfg["epsilon"], mode, est.samples, est.point, est.upper_ci,
                    est.timeouts, bound_id, bound.value, row.slack, row.verdict,
                ]
            )
    return rows, failed


def cmd_simulate(args) -> int:
    defaults = {
        "seed": 1, "workers": 1, "epsilon": 0.05, "trials": None, "codes": None,
        "traffics_per_code": None, "links": None, "messages": None,
        "schedule": SCHEDULE_REGULAR, "loss": LOSS_LOSSLESS, "rate": None,
        "success_prob": None, "horizon": None, "mode": "delay", "bound": "auto",
        "f_k": None, "assertion_mode": "assert", "out": None,
        "record_traffic": None, "replay_traffic": None, "export_trace": None,
        "bound_scale": 1.0,
    }
    cfg = _resolve(args, defaults)
    if cfg["links"] is None or cfg["messages"] is None:
        raise ContractViolationError("simulate needs --links and --messages")
    net = resolve_horizon(_network_config(cfg))
    if cfg.get("f_k") is None:
        cfg["f_k"] = float(math.log2(max(2, net.messages)))

    def per_mode(mode):
        bid = cfg["bound"] if cfg["bound"] != "auto" else _auto_bound(net, mode)
        return [(bid, cfg["assertion_mode"])]

    rows, failed = _simulate_rows(cfg, net, per_mode, cfg["bound_scale"])
    _write_report(cfg["out"], {**cfg, "command": "simulate", "horizon": net.horizon},
                  cfg["seed"], SIMULATE_COLUMNS, rows)
    if cfg.get("export_trace"):
        _export_trace(net, cfg)
    return 1 if failed else 0


def _export_trace(net: NetworkConfig, cfg: dict) -> None:
    code_seed = derive_seed(cfg["seed"], 1, 0)
    traffic_seed = derive_seed(cfg["seed"], 2, 0, 0)
    tr = sample_traffic(net, np.random.default_rng(traffic_seed))
    trace = run_session(net, tr, code_seed, detail="full")
    columns = ["time", "link", "sink_rank"] + [f"density_{i}" for i in range(1, net.links + 1)]
    _write_report(cfg["export_trace"], {**cfg, "command": "simulate"}, cfg["seed"],
                  columns, list(trace_event_rows(trace)))


def cmd_compare(args) -> int:
    defaults = {
        "seed": 1, "workers": 1, "epsilon": 0.05, "trials": None, "codes": None,
        "traffics_per_code": None, "links": None, "messages": None,
        "schedule": SCHEDULE_REGULAR, "loss": LOSS_LOSSLESS, "rate": None,
        "success_prob": None, "horizon": None, "mode": "both",
        "f_k": None, "assert_bounds": "", "out": None, "bound_scale": 1.0,
        "record_traffic": None, "replay_traffic": None,
    }
    cfg = _resolve(args, defaults)
    if cfg["links"] is None or cfg["messages"] is None:
        raise ContractViolationError("compare needs --links and --messages")
    net = resolve_horizon(_network_config(cfg))
    if cfg.get("f_k") is None:
        cfg["f_k"] = float(math.log2(max(2, net.messages)))
    asserted = set(filter(None, (cfg["assert_bounds"] or "").split(",")))

    def per_mode(mode):
        return [
            (bid, "assert" if bid in asserted else "report-only")
            for bid in _applicable_bounds(net, mode)
        ]

    rows, failed = _simulate_rows(cfg, net, per_mode, cfg["bound_scale"])
    _write_report(cfg["out"], {**cfg, "command": "compare", "horizon": net.horizon},
                  cfg["seed"], SIMULATE_COLUMNS, rows)
    return 1 if failed else 0


# ----------------------------------------------------------- bounds table --

BOUNDS_COLUMNS = [
    "bound_id", "k", "L", "epsilon", "p", "f_k", "horizon", "w", "w_clamped",
    "asymptotic", "value", "components", "notes",
]


def cmd_bounds_table(args) -> int:
    defaults = {
        "seed": 1, "workers": 1, "epsilon": 0.05, "links": 2, "k_grid": "256,1024,4096",
        "success_prob": None, "f_k": None, "bounds": "thm1,thm2,thm3",
        "horizon": None, "r": None, "node_i": 2, "part_j": 2, "out": None,
    }
    cfg = _resolve(args, defaults)
    ids = [b for b in cfg["bounds"].split(",") if b]
    ks = [int(x) for x in str(cfg["k_grid"]).split(",") if x]
    rows = []
    for bound_id in ids:
        if bound_id in bounds_mod.BOUND_FUNCS:
            for k in ks:
                f_k = cfg.get("f_k") or float(math.log2(max(2, k)))
                kwargs = dict(messages=k, links=cfg["links"], epsilon=cfg["epsilon"], f_k=f_k)
                probs = cfg.get("success_prob")
                if bound_id in ("thm2", "thm3"):
                    kwargs["success_prob"] = probs[0] if probs else 0.8
                elif bound_id in ("thm4", "thm5"):
                    kwargs["success_probs"] = probs if probs else (0.5, 0.9)[: max(2, cfg["links"])]
                res = bounds_mod.evaluate(bound_id, bounds_mod.BoundQuery(**kwargs))
                comp = ";".join(f"{n}={_fmt(v)}" for n, v in res.components)
                p_shown = kwargs.get("success_prob") or kwargs.get("success_probs")
                rows.append([
                    bound_id, k, cfg["links"], cfg["epsilon"],
                    ";".join(repr(float(p)) for p in (p_shown if isinstance(p_shown, tuple) else (p_shown,))) if p_shown else None,
                    f_k if bound_id == "thm5" else None, None,
                    res.w_used, res.w_clamped, res.asymptotic, res.value, comp,
                    ";".join(res.notes) if res.notes else None,
                ])
        elif bound_id == "lemma5":
            horizon = cfg.get("horizon") or 256.0
            val = bounds_mod.lemma5_bound(horizon, cfg["links"], cfg["epsilon"])
            rows.append(["lemma5", None, cfg["links"], cfg["epsilon"], None, None,
                         horizon, None, None, False, float(val), None, None])
        elif bound_id == "lemma9":
            r = cfg.get("r") or 97
            val = bounds_mod.lemma9_bound(r, cfg["node_i"], cfg["epsilon"])
            rows.append(["lemma9", None, None, cfg["epsilon"], None, None, None,
                         None, None, False, float(val), f"r={r};i={cfg['node_i']}", None])
        elif bound_id == "lemma10":
            r = cfg.get("r") or 97
            res = bounds_mod.lemma10_bound(r, cfg["node_i"], cfg["part_j"], cfg["epsilon"])
            rows.append(["lemma10", None, None, cfg["epsilon"], None, None, None,
                         None, None, False, float(res.value),
                         f"r={r};i={cfg['node_i']};j={cfg['part_j']}",
                         "out-of-regime" if res.out_of_regime else None])
        elif bound_id == "lemma11":
            horizon = cfg.get("horizon") or 4096.0
            probs = cfg.get("success_prob")
            p = probs[0] if probs else 0.8
            res = bounds_mod.lemma11_bound(horizon, cfg["links"], p, cfg["epsilon"])
            comp = ";".join(f"{n}={_fmt(v)}" for n, v in res.components)
            rows.append(["lemma11", None, cfg["links"], cfg["epsilon"], repr(float(p)),
                         None, horizon, res.w, res.w_clamped, False, float(res.value), comp, None])
        else:
            raise ContractViolationError(f"unknown bound id {bound_id!r}")
    _write_report(cfg["out"], {**cfg, "command": "bounds-table"}, cfg["seed"], BOUNDS_COLUMNS, rows)
    return 0


# ------------------------------------------------------------------ main ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="denselab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"denselab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--seed", type=int, help="master seed (64-bit)")
        p.add_argument("--workers", type=int, help="worker process count")
        p.add_argument("--epsilon", type=float, help="tail probability epsilon")
        p.add_argument("--out", help="output CSV path ('-' for stdout)")

    def network(p):
        p.add_argument("--links", type=int, help="line network length L")
        p.add_argument("--messages", type=int, help="message vector count k")
        p.add_argument("--schedule", choices=[SCHEDULE_REGULAR, SCHEDULE_POISSON])
        p.add_argument("--loss", choices=[LOSS_LOSSLESS, LOSS_BERNOULLI])
        p.add_argument("--rate", help="poisson rate(s), comma separated")
        p.add_argument("--success-prob", dest="success_prob", help="bernoulli success probability(ies)")
        p.add_argument("--horizon", type=float, help="transmission window end")
        p.add_argument("--trials", type=int, help="trial count (coding delay)")
        p.add_argument("--codes", type=int, help="code count (average delay)")
        p.add_argument("--traffics-per-code", dest="traffics_per_code", type=int)
        p.add_argument("--record-traffic", dest="record_traffic", help="directory for traffic sidecar files")
        p.add_argument("--replay-traffic", dest="replay_traffic", help="directory with recorded traffic files")
        p.add_argument("--f-k", dest="f_k", type=float, help="slowly growing slack f(k) for thm5")
        p.add_argument("--bound-scale", dest="bound_scale", type=float,
                       help="multiplier on bound values in verdicts")

    p = sub.add_parser("validate-lemmas", help="check rank-deficiency laws")
    common(p)
    p.add_argument("--trials", type=int, help="Monte Carlo samples per spec")
    p.add_argument("--preset", choices=["default", "quick"])
    p.add_argument("--max-gamma", dest="max_gamma", type=int)
    p.add_argument("--exact-cap", dest="exact_cap", type=int,
                   help="free-bit limit for exact enumeration")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--assert", dest="assertion_mode", action="store_const", const="assert")
    grp.add_argument("--report-only", dest="assertion_mode", action="store_const", const="report-only")
    p.set_defaults(func=cmd_validate_lemmas)

    p = sub.add_parser("simulate", help="estimate delays and compare to a bound")
    common(p)
    network(p)
    p.add_argument("--mode", choices=["delay", "avg", "both"])
    p.add_argument("--bound", help="bound id (thm1..thm5) or 'auto'")
    p.add_argument("--export-trace", dest="export_trace", help="write first trial's event trace here")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--assert", dest="assertion_mode", action="store_const", const="assert")
    grp.add_argument("--report-only", dest="assertion_mode", action="store_const", const="report-only")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="estimate delays against all applicable bounds")
    common(p)
    network(p)
    p.add_argument("--mode", choices=["delay", "avg", "both"])
    p.add_argument("--assert-bounds", dest="assert_bounds",
                   help="comma list of bound ids checked in assert mode")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bounds-table", help="evaluate bounds over a grid")
    common(p)
    p.add_argument("--links", type=int)
    p.add_argument("--k-grid", dest="k_grid", help="comma list of message counts")
    p.add_argument("--bounds", help="comma list of bound ids (thm1..5, lemma5/9/10/11)")
    p.add_argument("--success-prob", dest="success_prob")
    p.add_argument("--f-k", dest="f_k", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--r", type=int, help="per-partition packet count for lemma9/10")
    p.add_argument("--node-i", dest="node_i", type=int)
    p.add_argument("--part-j", dest="part_j", type=int)
    p.set_defaults(func=cmd_bounds_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ContractViolationError, FeasibilityError, FileNotFoundError) as exc:
        print(f"denselab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
