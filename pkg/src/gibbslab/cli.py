"""Command-line pipelines over the library: phantom generation, the
undersample/oversample comparison, error localization, and bound sweeps.

Exit codes: 0 success, 1 usage error, 2 data error, 3 a verified bound
was violated.  All CSV outputs are deterministic; run metadata goes to
stderr only.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    dssim_at_border,
    gradient_norm,
    gradient_ratio,
    rel_err,
    voi_means,
    volume_ratio,
)
from .errors import GibbsLabError
from .gibbs import (
    PiecewiseSignal,
    continuous,
    convergence_study,
    gibbs_profile,
    heaviside,
    verify_pointwise_bound,
    verify_trivariate_bound,
)
from .grid import Fov, LabelVolume, ScalarVolume, coarse_grid, make_grid
from .kernels import DEFAULT_GAUSSIAN_SHAPE, make_kernel
from .morphology import BoolMask, voi_border
from .phantom import SHEPP_LOGAN, sample_phantom, segment_phantom
from .resample import (
    resample_labels_multilabel,
    resample_labels_nearest,
    resample_scalar,
)
from .volio import read_volume, write_csv, write_volume

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VIOLATION = 3

DEFAULT_KERNELS = "linear,gaussian,lanczos2,cubic"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; the contract says 1
        raise _UsageError(message)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_kernels(spec: str, epsilon: float):
    return [make_kernel(name, epsilon) for name in spec.split(",") if name.strip()]


def _fov_from(values) -> Fov:
    v = [float(x) for x in values]
    return Fov(((v[0], v[1]), (v[2], v[3]), (v[4], v[5])))


def _signal_by_name(name: str, xi: float) -> PiecewiseSignal:
    if name == "heaviside":
        return heaviside(xi)
    if name == "sine":
        return continuous(lambda t: np.sin(2 * np.pi * t), tag="sine")
    if name == "sinejump":
        return PiecewiseSignal(
            xi=xi,
            left=lambda t: np.sin(2 * np.pi * t),
            right=lambda t: np.sin(2 * np.pi * t) + 1.0,
            tag="sinejump",
        )
    raise _UsageError(f"unknown signal {name!r}")


def cmd_phantom(args) -> int:
    fov = _fov_from(args.fov)
    fine = make_grid(fov, (args.size, args.size, args.size))
    coarse = coarse_grid(fine, args.factor)
    reference = sample_phantom(SHEPP_LOGAN, fine)
    functional = sample_phantom(SHEPP_LOGAN, coarse)
    labels = segment_phantom(reference)
    out = Path(args.out)
    write_volume(out / "reference", reference)
    write_volume(out / "functional", functional)
    write_volume(out / "labels", labels)
    _log(
        f"phantom: reference {fine.counts}, functional {coarse.counts}, "
        f"{labels.n_labels} labels -> {out}"
    )
    return EXIT_OK


def _load_experiment(data_dir: str):
    data = Path(data_dir)
    reference = read_volume(data / "reference")
    functional = read_volume(data / "functional")
    labels = read_volume(data / "labels")
    if not isinstance(reference, ScalarVolume) or not isinstance(
        functional, ScalarVolume
    ):
        raise GibbsLabError("reference/functional must be scalar volumes")
    if not isinstance(labels, LabelVolume):
        raise GibbsLabError("labels must be a label volume")
    return reference, functional, labels


def cmd_compare(args) -> int:
    reference, functional, labels = _load_experiment(args.data)
    kernels = _parse_kernels(args.kernels, args.epsilon)
    include_bg = args.include_background
    v_ref = voi_means(reference, labels, include_background=include_bg)

    rows = []

    def under(method: str, coarse_labels: LabelVolume) -> None:
        v = voi_means(
            functional,
            coarse_labels,
            include_background=include_bg,
            allow_empty=True,
        )
        missing = int(np.count_nonzero(np.isnan(v.values)))
        rows.append(["under", method, rel_err(v_ref, v), missing])

    under("nearest", resample_labels_nearest(labels, functional.grid))
    under(
        "multilabel",
        resample_labels_multilabel(
            labels, functional.grid, sigma_vox=args.multilabel_sigma
        ),
    )
    for kernel in kernels:
        oversampled = resample_scalar(functional, reference.grid, kernel)
        v = voi_means(oversampled, labels, include_background=include_bg)
        rows.append(["over", str(kernel), rel_err(v_ref, v), 0])

    for direction in ("under", "over"):
        errs = [r[2] for r in rows if r[0] == direction and not math.isnan(r[2])]
        best = min(errs) if errs else float("nan")
        for r in rows:
            if r[0] == direction:
                r.append(1 if r[2] == best else 0)

    write_csv(
        args.out,
        ["sampling", "method", "rel_err", "empty_vois", "is_min"],
        rows,
    )
    _log(f"compare: {len(rows)} rows -> {args.out}")
    return EXIT_OK


def cmd_locate(args) -> int:
    reference, functional, labels = _load_experiment(args.data)
    kernels = _parse_kernels(args.kernels, args.epsilon)
    border = voi_border(labels, n=args.border_reps)
    grad_pct = gradient_ratio(gradient_norm(reference), border)
    vol_pct = volume_ratio(border)
    rows = []
    for pos, kernel in enumerate(kernels):
        oversampled = resample_scalar(functional, reference.grid, kernel)
        result = dssim_at_border(reference, oversampled, border)
        first = pos == 0
        rows.append(
            [
                str(kernel),
                result.dssim_global,
                result.dssim_border,
                result.percent,
                grad_pct if first else "",
                vol_pct if first else "",
            ]
        )
    write_csv(
        args.out,
        [
            "kernel",
            "dssim",
            "dssim_border",
            "border_percent",
            "gradient_percent",
            "volume_percent",
        ],
        rows,
    )
    _log(f"locate: {len(rows)} rows -> {args.out}")
    return EXIT_OK


def cmd_gibbs(args) -> int:
    kernels = _parse_kernels(args.kernels, args.epsilon)
    n_list = [int(n) for n in args.sizes.split(",")]
    signal = _signal_by_name(args.signal, args.xi)
    out = Path(args.out)

    bound_rows = []
    total_violations = 0
    for kernel in kernels:
        for N in n_list:
            report = verify_pointwise_bound(signal, kernel, N)
            total_violations += report.n_violations
            flags = report.violations
            for i in range(report.x.size):
                bound_rows.append(
                    [
                        N,
                        report.kernel,
                        report.x[i],
                        int(report.k[i]),
                        int(report.p[i]),
                        report.error[i],
                        report.bound[i],
                        int(flags[i]),
                    ]
                )
    write_csv(
        out / "bounds.csv",
        ["N", "kernel", "x", "k", "p", "error", "bound", "violated"],
        bound_rows,
    )

    conv_rows = []
    for kernel in kernels:
        errs = convergence_study(signal, kernel, args.x_fixed, n_list)
        for N, err in zip(n_list, errs):
            conv_rows.append([str(kernel), N, args.x_fixed, err])
    write_csv(out / "convergence.csv", ["kernel", "N", "x", "error"], conv_rows)

    profile_rows = []
    for kernel in kernels:
        for N in n_list:
            if N < 8 * kernel.support_radius:
                continue
            for p, err in sorted(gibbs_profile(signal, kernel, N).items()):
                profile_rows.append([str(kernel), N, p, err])
    write_csv(out / "profile.csv", ["kernel", "N", "p", "max_error"], profile_rows)

    _log(
        f"gibbs: {len(bound_rows)} bound rows, {total_violations} violations -> {out}"
    )
    return EXIT_VIOLATION if total_violations else EXIT_OK


def cmd_resample(args) -> int:
    payload = read_volume(args.input)
    if isinstance(payload, BoolMask):
        raise GibbsLabError("masks are not resampled; convert to labels first")
    source = payload.grid
    if args.target_size:
        counts = tuple(int(n) for n in args.target_size)
        target = make_grid(source.fov, counts)
    else:
        target = coarse_grid(source, args.factor)
    if isinstance(payload, ScalarVolume):
        kernel = make_kernel(args.kernel, args.epsilon)
        result = resample_scalar(payload, target, kernel)
    elif args.method == "multilabel":
        result = resample_labels_multilabel(
            payload, target, sigma_vox=args.multilabel_sigma
        )
    else:
        result = resample_labels_nearest(payload, target)
    write_volume(args.out, result)
    _log(f"resample: {source.counts} -> {target.counts} -> {args.out}")
    return EXIT_OK


def cmd_bounds3d(args) -> int:
    kernels = _parse_kernels(args.kernels, args.epsilon)
    grid = make_grid(Fov.cube(0.0, 1.0), (args.size, args.size, args.size))
    xi = args.xi

    def field(x, y, z):
        return np.where(x <= xi, 0.0, 1.0) * np.sin(np.pi * y)

    rows = []
    total_violations = 0
    for kernel in kernels:
        report = verify_trivariate_bound(field, grid, kernel, args.points, seed=args.seed)
        total_violations += report.n_violations
        flags = report.violations
        for i in range(report.error.size):
            rows.append(
                [
                    str(kernel),
                    report.points[i, 0],
                    report.points[i, 1],
                    report.points[i, 2],
                    report.error[i],
                    report.bound[i],
                    int(flags[i]),
                ]
            )
    write_csv(
        args.out,
        ["kernel", "x", "y", "z", "error", "bound", "violated"],
        rows,
    )
    _log(f"bounds3d: {len(rows)} rows, {total_violations} violations -> {args.out}")
    return EXIT_VIOLATION if total_violations else EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="gibbslab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="generate the analytic phantom files")
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--factor", type=int, default=2)
    p.add_argument(
        "--fov", nargs=6, type=float, default=[-1, 1, -1, 1, -1, 1],
        metavar=("A1", "B1", "A2", "B2", "A3", "B3"),
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("compare", help="under- vs oversampling VOI-mean errors")
    p.add_argument("--data", required=True, help="directory from the phantom command")
    p.add_argument("--kernels", default=DEFAULT_KERNELS)
    p.add_argument("--epsilon", type=float, default=DEFAULT_GAUSSIAN_SHAPE)
    p.add_argument("--multilabel-sigma", type=float, default=0.5)
    p.add_argument(
        "--include-background", action=argparse.BooleanOptionalAction, default=True
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("locate", help="DSSIM / gradient localization report")
    p.add_argument("--data", required=True)
    p.add_argument("--kernels", default=DEFAULT_KERNELS)
    p.add_argument("--epsilon", type=float, default=DEFAULT_GAUSSIAN_SHAPE)
    p.add_argument("--border-reps", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_locate)

    p = sub.add_parser("gibbs", help="univariate bound sweeps and profiles")
    p.add_argument("--kernels", default=DEFAULT_KERNELS)
    p.add_argument("--epsilon", type=float, default=DEFAULT_GAUSSIAN_SHAPE)
    p.add_argument("--sizes", default="16,32,64,128", help="comma list of N")
    p.add_argument(
        "--signal", choices=("heaviside", "sine", "sinejump"), default="heaviside"
    )
    p.add_argument("--xi", type=float, default=0.4973)
    p.add_argument("--x-fixed", type=float, default=0.37)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gibbs)

    p = sub.add_parser("resample", help="resample one stored volume")
    p.add_argument("--input", required=True)
    p.add_argument("--target-size", nargs=3, type=int)
    p.add_argument("--factor", type=int, default=2)
    p.add_argument("--kernel", default="cubic")
    p.add_argument("--epsilon", type=float, default=DEFAULT_GAUSSIAN_SHAPE)
    p.add_argument("--method", choices=("nearest", "multilabel"), default="nearest")
    p.add_argument("--multilabel-sigma", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("bounds3d", help="trivariate bound sweep")
    p.add_argument("--kernels", default="cubic")
    p.add_argument("--epsilon", type=float, default=DEFAULT_GAUSSIAN_SHAPE)
    p.add_argument("--size", type=int, default=32)
    p.add_argument("--points", type=int, default=10_000)
    p.add_argument("--xi", type=float, default=0.4973)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bounds3d)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _log(f"usage error: {exc}")
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        _log(f"usage error: {exc}")
        return EXIT_USAGE
    except (GibbsLabError, OSError, ValueError) as exc:
        _log(f"error: {exc}")
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
