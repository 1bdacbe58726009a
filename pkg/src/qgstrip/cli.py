"""Command-line entry point: ``qgstrip {bands,mode,current,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric failure.
"""
import argparse
import math
import os
import sys
import tempfile

from . import plots
from .analysis import decay_report, probability_current
from .bands import dispersion, find_roots, follow_band
from .config import RunConfig, load_config
from .errors import BandLostError, ConfigError, NoModeError, NumericError, SingularityError
from .secular import extract_modes, sigma_min
from .verify import run_verification

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
CURRENT_CSV_HEADER = "theta,k,current"

_FLAGS = [
    ("--model", "model", str), ("--n-cells", "n_cells", int), ("--l1", "l1", float),
    ("--l2", "l2", float), ("--l3", "l3", float), ("--k-min", "k_min", float),
    ("--k-max", "k_max", float), ("--theta-steps", "theta_steps", int),
    ("--exclusion-k", "exclusion_k", float), ("--grid-step", "grid_step", float),
    ("--out-dir", "out_dir", str), ("--workers", "workers", int), ("--seed", "seed", int),
]


def write_atomic(path, text):
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_bands(config):
    model = config.build_model()
    ds = dispersion(model, config.theta_steps, config.k_min, config.k_max, config.grid_step,
                    config.root_tol, exclusion_k=config.exclusion_k or None, workers=config.workers)
    paths = [os.path.join(config.out_dir, "bands.csv"), os.path.join(config.out_dir, "bands.svg")]
    write_atomic(paths[0], ds.to_csv())
    write_atomic(paths[1], plots.bands_svg(ds))
    return paths, ds


def snap_to_root(model, k, theta, config, window=0.01):
    """Nearest spectral momentum within ``window`` of ``k``; ``NoModeError`` if none."""
    roots = find_roots(model, theta, max(k - window, 1e-9), k + window,
                       min(config.grid_step, window / 20), config.root_tol)
    if not roots:
        rel = float(sigma_min(model, k, theta))
        raise NoModeError(f"no spectral point within {window} of k={k} at theta={theta}: "
                          f"sigma_min/sigma_max = {rel:.3e}", sigma_min=rel)
    return min(roots, key=lambda r: abs(r - k))


def cmd_mode(config, k, theta):
    model = config.build_model()
    root = snap_to_root(model, k, theta, config)
    modes = extract_modes(model, root, theta, config.mode_tol)
    paths = []
    for i, mode in enumerate(modes):
        suffix = "" if i == 0 else f"_{i + 1}"
        rep = decay_report(mode, model)
        csv_path = os.path.join(config.out_dir, f"mode{suffix}.csv")
        write_atomic(csv_path, rep.edges_csv())
        write_atomic(os.path.join(config.out_dir, f"mode{suffix}_summary.csv"), rep.summary_csv())
        write_atomic(os.path.join(config.out_dir, f"decay{suffix}.svg"), plots.decay_svg(rep))
        paths.append(csv_path)
    return paths, modes


def current_thetas(theta_steps):
    half = theta_steps // 2
    return [math.pi * j / half for j in range(-half, half + 1)]


def sweep_current(model, anchor_k, theta_steps, grid_step, root_tol, mode_tol=1e-8):
    """``[(theta, k, current on g_1)]`` along the band through ``anchor_k`` at theta = 0."""
    edge = model.edge("g", 1).id
    rows = []
    for theta, k in follow_band(model, anchor_k, current_thetas(theta_steps), grid_step, root_tol):
        mode = extract_modes(model, k, theta, mode_tol)[0]
        rows.append((theta, k, probability_current(mode, edge)))
    return rows


def cmd_current(config, anchor_k):
    if config.model != "brick":
        raise ConfigError("current sweep needs --model brick", field="model")
    model = config.build_model()
    rows = sweep_current(model, anchor_k, config.theta_steps, config.grid_step, config.root_tol,
                         config.mode_tol)
    text = CURRENT_CSV_HEADER + "\n" + "".join(f"{t:.12g},{k:.12g},{c:.12g}\n" for t, k, c in rows)
    paths = [os.path.join(config.out_dir, "current.csv"), os.path.join(config.out_dir, "current.svg")]
    write_atomic(paths[0], text)
    write_atomic(paths[1], plots.current_svg(rows))
    return paths, rows


def cmd_verify(config, stream=None):
    stream = stream or sys.stdout
    results = run_verification(config)
    for r in results:
        print(r.line(), file=stream)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} properties passed", file=stream)
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file; flags override it")
    for flag, dest, typ in _FLAGS:
        common.add_argument(flag, dest=dest, type=typ, default=None)

    parser = argparse.ArgumentParser(prog="qgstrip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bands", parents=[common], help="dispersion diagram (bands.csv, bands.svg)")
    p = sub.add_parser("mode", parents=[common], help="coefficients of one mode (mode.csv, decay.svg)")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p = sub.add_parser("current", parents=[common], help="left-edge current along a band")
    p.add_argument("--anchor-k", type=float, required=True)
    sub.add_parser("verify", parents=[common], help="run the property suite")
    return parser


def resolve_config(args):
    config = load_config(args.config) if args.config else RunConfig()
    overrides = {dest: getattr(args, dest) for _, dest, _ in _FLAGS}
    return config.with_overrides(**overrides).validate()


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        if args.command == "bands":
            paths, _ = cmd_bands(config)
        elif args.command == "mode":
            paths, _ = cmd_mode(config, args.k, args.theta)
        elif args.command == "current":
            paths, _ = cmd_current(config, args.anchor_k)
        else:
            return cmd_verify(config)
    except (ConfigError, OSError) as exc:
        print(f"qgstrip: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoModeError, BandLostError, NumericError, SingularityError) as exc:
        print(f"qgstrip: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
