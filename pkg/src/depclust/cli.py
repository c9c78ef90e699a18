"""Command-line driver.

Every flag can also come from an environment variable ``DEPCLUST_<FLAG>``
(upper case, dashes as underscores); flags given on the command line win.
Exit codes: 0 success, 1 usage error, 2 parse or numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .csvio import CsvFormatError, LabeledMatrix, read_matrix_csv
from .dense import RankPolicy, SvdConvergenceError, svd
from .featsel import (
    Dataset,
    PerturbationRangeError,
    ThresholdPolicy,
    irrelevant_removal,
    perturbation_screen,
)
from .graph import dependency_graph, find_clusters
from .relations import RelationError, minimal_relations, verify_relations
from .report import AnalysisConfig, AnalysisReport, write_report
from .sensitivity import sensitivity_report
from .signature import signature_matrix

ENV_PREFIX = "DEPCLUST_"
COMMANDS = ("clusters", "relations", "select", "perturb", "signature")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="depclust", description="Linear-dependency clusters of matrix columns.")
    parser.add_argument("--version", action="version", version=f"depclust {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    helps = {
        "clusters": "independent columns and dependency clusters",
        "relations": "clusters plus minimal relations in each",
        "select": "feature selection against a target column (needs --target)",
        "perturb": "effect of perturbing one column on the least-squares solution",
        "signature": "dump the signature matrix",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("path", help="numeric CSV file, one record per row")
        p.add_argument("--no-header", dest="header", action="store_false",
                       help="the first row is data, not column names")
        p.add_argument("--delimiter", default=_env("delimiter", ","))
        p.add_argument("--rank-tol", default=_env("rank-tol", "default"),
                       help="'default', 'rel:X', 'abs:X' or a bare relative cutoff")
        p.add_argument("--zero-tol", type=float, default=_env("zero-tol"),
                       help="diagonal cutoff for independent columns (default n*eps)")
        p.add_argument("--edge-tol", type=float, default=float(_env("edge-tol", 1e-8)))
        p.add_argument("--threshold-policy", default=_env("threshold-policy", "local-maxima"),
                       help="local-maxima | mean | fixed:X | quantile:Q")
        p.add_argument("--target", default=_env("target"),
                       help="target column (header name or 1-based index)")
        p.add_argument("--column", type=int, default=_env("column"),
                       help="1-based column to perturb")
        p.add_argument("--seed", type=int, default=int(_env("seed", 0)))
        p.add_argument("--format", default=_env("format", "json"), choices=("json", "csv"))
        p.add_argument("--method", default=_env("method", "signature"),
                       choices=("signature", "perturbation"),
                       help="feature selection method for 'select'")
    return parser


def _load(args):
    data = read_matrix_csv(args.path, header=args.header, delimiter=args.delimiter,
                           target_column=args.target)
    if isinstance(data, LabeledMatrix):
        return data.values, None, data.names
    return data.A, data, data.names


def _ones(idx):
    return [int(i) + 1 for i in idx]


def _cluster_entries(A, factors, partition, with_relations):
    out = []
    for k, (members, deficit) in enumerate(zip(partition.clusters, partition.deficits), start=1):
        entry = {"id": k, "members": _ones(members), "deficit": deficit}
        if with_relations:
            if len(members) > 1 or np.any(A[:, members[0]] != 0):
                basis = minimal_relations(A, factors, members)
                check = verify_relations(A, basis)
                entry["relations"] = {
                    "eliminated": _ones(basis.pivots),
                    "basis": _ones(basis.basis_columns),
                    "coefficients": basis.Z,
                    "residual": check.residual,
                }
            else:
                entry["relations"] = {"eliminated": _ones(members), "basis": [],
                                      "coefficients": [], "residual": 0.0}
        out.append(entry)
    return out


def _analyse(args, config: AnalysisConfig) -> AnalysisReport:
    A, dataset, names = _load(args)
    factors = svd(A, RankPolicy.parse(args.rank_tol))
    sig = signature_matrix(A, factors, args.zero_tol)
    graph = dependency_graph(sig, args.edge_tol)
    partition = find_clusters(graph, sig)
    report = AnalysisReport(
        command=args.command,
        config=asdict(config),
        input={
            "path": os.path.basename(args.path),
            "rows": A.shape[0],
            "cols": A.shape[1],
            "rank": factors.rank,
            "sigma_max": factors.sigma_max,
            "sigma_rank": factors.sigma_rank,
            "names": list(names) if names is not None else None,
        },
        independent=_ones(partition.independent),
        clusters=_cluster_entries(A, factors, partition, args.command == "relations"),
        version=__version__,
    )

    if args.command == "signature":
        report.signature = sig.S.tolist()
    elif args.command == "select":
        if dataset is None:
            raise UsageError("select requires --target")
        report.feature_selection = _select(args, dataset)
    elif args.command == "perturb":
        if args.column is None:
            raise UsageError("perturb requires --column")
        if not 1 <= args.column <= A.shape[1]:
            raise UsageError(f"--column must lie in 1..{A.shape[1]}")
        rng = np.random.default_rng(args.seed)
        c = rng.standard_normal(A.shape[0])
        if dataset is not None:
            b = dataset.b
        else:
            # no target: use a consistent right-hand side drawn from the same seed
            b = A @ rng.standard_normal(A.shape[1])
        rep = sensitivity_report(A, factors, b, args.column - 1, c, partition=partition,
                                 edge_tol=args.edge_tol, zero_tolerance=args.zero_tol)
        report.perturbation = {
            "column": args.column,
            "cluster": rep.cluster if rep.cluster == "independent" else _ones(rep.cluster),
            "case": rep.case,
            "c": rep.c,
            "x": rep.x,
            "x_tilde": rep.x_tilde,
            "delta": rep.delta,
            "delta_norm": rep.delta_norm,
            "outside_cluster_max": rep.outside_max,
            "bound_two_abs_xj": rep.bound,
            "predicted_norm": rep.predicted_norm,
            "c_in_range": rep.c_in_range,
            "b_in_range": rep.b_in_range,
            "rank_deficient": rep.rank_deficient,
            "locality_applies": rep.locality_applies,
            "notes": list(rep.notes),
        }
    return report


def _select(args, dataset: Dataset) -> dict:
    if args.method == "perturbation":
        rng = np.random.default_rng(args.seed)
        E = rng.standard_normal(dataset.A.shape)
        rep = perturbation_screen(dataset, E, rng=rng)
    else:
        rep = irrelevant_removal(dataset, ThresholdPolicy.parse(args.threshold_policy),
                                 edge_tol=args.edge_tol, zero_tolerance=args.zero_tol)
    names = dataset.names
    out = {
        "method": rep.method,
        "variant": rep.variant,
        "target": dataset.target_name,
        "threshold": rep.threshold,
        "scores": rep.scores,
        "kept": _ones(rep.kept),
        "dropped": _ones(rep.dropped),
        "kept_names": [names[i] for i in rep.kept] if names else None,
        "target_cluster": None if rep.target_cluster is None else _ones(rep.target_cluster),
        "notes": list(rep.notes),
    }
    return out


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout.buffer
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip() + "\ndepclust: error: missing command")
        config = AnalysisConfig(
            rank_tol=args.rank_tol, zero_tol=args.zero_tol, edge_tol=args.edge_tol,
            threshold_policy=args.threshold_policy, seed=args.seed,
            target=args.target, column=args.column,
        )
        RankPolicy.parse(args.rank_tol)
        ThresholdPolicy.parse(args.threshold_policy)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, ValueError) as exc:
        print(str(exc), file=stderr)
        return 1

    try:
        report = _analyse(args, config)
        fmt = "csv-matrix" if (args.command == "signature" and args.format == "csv") else "json"
        data = write_report(report, fmt)
    except UsageError as exc:
        print(f"depclust: error: {exc}", file=stderr)
        return 1
    except (CsvFormatError, OSError) as exc:
        print(f"depclust: input error: {exc}", file=stderr)
        return 2
    except (SvdConvergenceError, RelationError, PerturbationRangeError,
            ArithmeticError, ValueError) as exc:
        print(f"depclust: numerical error: {exc}", file=stderr)
        return 2
    stdout.write(data)
    stdout.flush()
    return 0


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
