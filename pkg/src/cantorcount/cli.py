"""Command-line surface: reproducible experiments and CSV exports.

Every output file gets a sibling ``<name>.manifest.json`` recording the
command, flags, seed, tool version, input hashes and wall time.  Exit
codes: 0 success, 2 domain error, 3 budget exceeded, 4 store integrity.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import sys
import time
from importlib import metadata, resources
from pathlib import Path

import click

from .counting import ell_hat_scan, n_full, n_star, n_tilde, n_tilde_star
from .enumerator import enumerate_denominator
from .errors import BudgetError, DomainError, IntegrityError
from .models import (
    SimulationConfig,
    count_series,
    geometric_grid,
    linear_grid,
    simulate,
    tail_check,
)
from .numtheory import mlo
from .store import RecordStore
from .symmetry import SymmetryFamily, census, corrected_prediction

EXIT_DOMAIN = 2
EXIT_BUDGET = 3
EXIT_INTEGRITY = 4


def _version() -> str:
    try:
        return metadata.version("cantorcount")
    except metadata.PackageNotFoundError:
        return "unknown"


def _data_dir(override: str | None) -> Path:
    return Path(override or os.environ.get("CANTOR_DATA_DIR", "cantor-data"))


def _write_manifest(output: Path, inputs: list[Path], started: float, seed=None):
    manifest = {
        "command": " ".join(sys.argv[1:]),
        "argv": sys.argv[1:],
        "seed": seed,
        "version": _version(),
        "inputs": {
            str(p): hashlib.sha256(p.read_bytes()).hexdigest() for p in inputs
        },
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    path = output.with_name(output.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)  # RFC-4180: CRLF line endings
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else v for v in row])


class _Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except DomainError as e:
            raise SystemExit(self._fail("domain error", e, EXIT_DOMAIN))
        except BudgetError as e:
            raise SystemExit(self._fail("budget exceeded", e, EXIT_BUDGET))
        except IntegrityError as e:
            raise SystemExit(self._fail("store integrity", e, EXIT_INTEGRITY))

    @staticmethod
    def _fail(kind: str, e: Exception, code: int) -> int:
        click.echo(f"error ({kind}): {e}", err=True)
        return code


@click.group(cls=_Cli)
@click.option("--threads", type=int, default=None, help="Cap worker parallelism.")
@click.pass_context
def main(ctx, threads):
    """Exact counts and heuristic predictors for rational points on the
    missing-digit Cantor set."""
    ctx.ensure_object(dict)
    ctx.obj["threads"] = threads


@main.command("enumerate")
@click.option("--q", "q_single", type=int, default=None)
@click.option("--q-range", "q_range", default=None, metavar="A..B")
@click.option("--method", type=click.Choice(["auto", "alg1", "words"]), default="auto")
@click.option("--store", "store_dir", default=None, help="Record store directory.")
def enumerate_cmd(q_single, q_range, method, store_dir):
    """Enumerate Cantor rationals for one denominator or a range."""
    started = time.monotonic()
    if (q_single is None) == (q_range is None):
        raise DomainError("give exactly one of --q or --q-range")
    if q_range is not None:
        try:
            a, b = (int(x) for x in q_range.split(".."))
        except ValueError:
            raise DomainError(f"bad --q-range {q_range!r}, expected A..B")
    else:
        a = b = q_single
    store = RecordStore(_data_dir(store_dir))
    records = store.ensure_range(a, b, method=method)
    for q in range(a, b + 1):
        if q >= 2:
            r = records[q]
            click.echo(f"q={r.q} ell={r.ell} phi={r.phi} n_q={r.n_q} mlo={r.mlo}")
    out = Path(f"records-{a}-{b}.csv")
    store.export_csv(out, a, b)
    _write_manifest(out, [], started)


def _grid(grid_kind: str, c: float, t_max: int) -> list[int]:
    if grid_kind == "geometric":
        return geometric_grid(c if c > 0 else 0.5, t_max)
    return linear_grid(t_max, step=max(1, t_max // 200))


@main.command("count")
@click.option("--c", "c", type=float, default=0.5, show_default=True)
@click.option("--t-max", type=int, required=True)
@click.option("--grid", "grid_kind", type=click.Choice(["geometric", "linear"]),
              default="geometric", show_default=True)
@click.option("--exclude-unit", is_flag=True, help="Do not count 0/1 and 1/1.")
@click.option("--store", "store_dir", default=None)
@click.option("--output", "-o", type=click.Path(path_type=Path), default=Path("count.csv"))
def count_cmd(c, t_max, grid_kind, exclude_unit, store_dir, output):
    """Window and cumulative counts of Cantor rationals."""
    started = time.monotonic()
    grid = _grid(grid_kind, c, t_max)
    records = RecordStore(_data_dir(store_dir)).ensure_range(2, t_max)
    include = not exclude_unit
    rows = [
        (t,
         n_tilde(t, c, records, include_unit=include),
         n_full(t, c, records, include_unit=include),
         n_tilde_star(t, records, include_unit=include),
         n_star(t, records, include_unit=include))
        for t in grid
    ]
    _write_csv(output, ["T", "N_tilde", "N", "N_tilde_star", "N_star"], rows)
    _write_manifest(output, [], started)
    click.echo(f"wrote {output} ({len(rows)} rows)")


@main.command("predict")
@click.option("--c", "c", type=float, default=0.5, show_default=True)
@click.option("--t-max", type=int, required=True)
@click.option("--grid", "grid_kind", type=click.Choice(["geometric", "linear"]),
              default="geometric", show_default=True)
@click.option("--store", "store_dir", default=None)
@click.option("--output", "-o", type=click.Path(path_type=Path), default=Path("predict.csv"))
def predict_cmd(c, t_max, grid_kind, store_dir, output):
    """True counts next to the predictors F(T) and M(T), with ratios."""
    started = time.monotonic()
    grid = _grid(grid_kind, c, t_max)
    records = RecordStore(_data_dir(store_dir)).ensure_range(2, t_max)
    series = count_series(grid, c, records)
    _write_csv(output, ["T", "N_tilde", "F", "M", "ratio_M", "ratio_F"], series.rows())
    _write_manifest(output, [], started)
    click.echo(f"wrote {output} ({len(grid)} rows)")


@main.command("simulate")
@click.option("--model", type=click.Choice(["star", "dstar"]), required=True)
@click.option("--q", "q", type=int, default=None)
@click.option("--window", default=None, metavar="C:T", help="Window c:T instead of one q.")
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--output", "-o", type=click.Path(path_type=Path), default=Path("simulate.csv"))
def simulate_cmd(model, q, window, trials, seed, output):
    """Monte-Carlo draws of N_q under the independence models."""
    started = time.monotonic()
    model_name = "star" if model == "star" else "double_star"
    c = t = None
    if window is not None:
        try:
            c_str, t_str = window.split(":")
            c, t = float(c_str), int(t_str)
        except ValueError:
            raise DomainError(f"bad --window {window!r}, expected C:T")
    cfg = SimulationConfig(model=model_name, seed=seed, trials=trials, q=q, c=c, t=t)
    values = simulate(cfg)
    _write_csv(output, ["trial", "value"], enumerate(values.tolist()))
    _write_manifest(output, [], started, seed=seed)
    click.echo(f"wrote {output} (mean {values.mean():.4f})")


@main.command("tailcheck")
@click.option("--eps", type=float, required=True)
@click.option("--c", "c", type=float, default=0.5, show_default=True)
@click.option("--k-max", type=int, required=True)
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--output", "-o", type=click.Path(path_type=Path), default=Path("tailcheck.csv"))
def tailcheck_cmd(eps, c, k_max, trials, seed, output):
    """Empirical tail exceedance against the Markov majorant."""
    started = time.monotonic()
    rows = tail_check(k_max, c=c, eps=eps, trials=trials, seed=seed)
    _write_csv(
        output,
        ["k", "T", "threshold", "mean_small_ell", "mean_large_ell",
         "bound", "empirical", "sigma", "within_bound"],
        ((r.k, r.t, r.threshold, r.mean_small_ell, r.mean_large_ell,
          r.bound, r.empirical, r.sigma, r.within_bound) for r in rows),
    )
    _write_manifest(output, [], started, seed=seed)
    skipped = sum(r.skipped for r in rows)
    if skipped:
        click.echo(f"note: {skipped} rows skipped (trivial bound)")
    click.echo(f"wrote {output} ({len(rows)} rows)")


@main.command("bourgain")
@click.option("--q-max", type=int, required=True)
@click.option("--include-symmetric", is_flag=True,
              help="Do not skip the symmetric denominator families.")
@click.option("--output", "-o", type=click.Path(path_type=Path), default=Path("bourgain.csv"))
def bourgain_cmd(q_max, include_symmetric, output):
    """Record-setting denominators for ell_hat(q) / log3(q)."""
    started = time.monotonic()
    records = ell_hat_scan(q_max, skip_symmetric=not include_symmetric)
    rows = [(r.q, r.ell_hat, repr(r.ratio)) for r in records]
    _write_csv(output, ["q", "ell_hat", "ratio"], rows)
    _write_manifest(output, [], started)
    for r in records:
        click.echo(f"q={r.q} ell_hat={r.ell_hat} ratio={r.ratio:.6f}")


def _table2_rows(r_min=4, r_max=13):
    rows = []
    for r in range(r_min, r_max + 1):
        rec = enumerate_denominator(3**r + 1)
        pred = corrected_prediction(r, rec.n_q)
        rows.append((r, rec.q, rec.n_q, rec.mlo,
                     None if pred.ratio is None else round(pred.ratio, 6),
                     None if pred.corrected is None else round(pred.corrected, 6)))
    return rows


def _table5_rows(r_min=1, r_max=5):
    rows = []
    for r in range(r_min, r_max + 1):
        fam = SymmetryFamily("omega_bar_padded", r)
        rec = enumerate_denominator(fam.target_q)
        cen = census(fam, n_q=rec.n_q)
        flag = "floor/round disagree" if cen.y_floor != cen.y_round else ""
        rows.append((r, cen.q, rec.n_q, cen.x, cen.y_floor, cen.y_round,
                     cen.z, cen.y_round + mlo(cen.q), flag))
    return rows


@main.command("symmetry")
@click.option("--kind", type=click.Choice(["pad", "bar"]), required=True)
@click.option("--r-max", type=int, required=True)
@click.option("--output", "-o", type=click.Path(path_type=Path), default=Path("symmetry.csv"))
def symmetry_cmd(kind, r_max, output):
    """Census of the word-symmetry families and corrected predictions."""
    started = time.monotonic()
    if kind == "pad":
        rows = _table5_rows(1, r_max)
        _write_csv(output, ["r", "q_r", "N_q", "X", "Y_floor", "Y_round",
                            "Z", "Y_plus_MLO", "note"], rows)
    else:
        rows = _table2_rows(1, r_max)
        _write_csv(output, ["r", "q", "N_q", "MLO", "ratio", "corrected"], rows)
    _write_manifest(output, [], started)
    click.echo(f"wrote {output} ({len(rows)} rows)")


# --- golden tables --------------------------------------------------------


def _expected(name: str) -> list[dict]:
    path = resources.files("cantorcount").joinpath("expected").joinpath(name)
    with path.open(newline="") as fh:
        return list(csv.DictReader(fh))


def _compute_table(which: str) -> tuple[list[str], list[list[str]]]:
    if which == "1":
        recs = ell_hat_scan(400)
        return (["q", "ell_hat", "ratio"],
                [[str(r.q), str(r.ell_hat), repr(r.ratio)] for r in recs])
    if which == "2":
        return (["r", "q", "N_q", "MLO", "corrected"],
                [[str(r), str(q), str(n), str(m), f"{corr:.3f}"]
                 for r, q, n, m, _, corr in _table2_rows()])
    if which == "3":
        rows = []
        for q in (12962, 531442, 21257680):
            rec = enumerate_denominator(q)
            rows.append([str(q), str(rec.n_q), str(rec.mlo)])
        return (["q", "N_q", "MLO"], rows)
    if which == "4":
        rows = []
        for q in (23, 3851, 34511, 363889, 1001523179):
            rec = enumerate_denominator(q, method="words" if q > 10**6 else "auto")
            rows.append([str(q), str(rec.n_q), str(rec.mlo)])
        return (["q", "N_q", "MLO"], rows)
    if which == "5":
        return (["r", "q_r", "N_q", "X", "Y_floor", "Y_round", "Z"],
                [[str(v) for v in row[:7]] for row in _table5_rows()])
    raise DomainError(f"unknown table {which!r}")


def _diff_table(which: str, header: list[str], rows: list[list[str]]) -> list[str]:
    expected = _expected(f"table{which}.csv")
    problems = []
    if len(expected) != len(rows):
        problems.append(f"row count {len(rows)} != expected {len(expected)}")
    for exp, got in zip(expected, rows):
        for col, value in zip(header, got):
            want = exp.get(col, "-")
            if want == "-":  # unasserted cell
                continue
            if col == "ratio":
                if abs(float(want) - float(value)) > 1e-9:
                    problems.append(f"{col}: {value} != {want} (tol 1e-9)")
            elif col == "corrected":
                if abs(float(want) - float(value)) > 1e-3:
                    problems.append(f"{col}: {value} != {want} (tol 1e-3)")
            elif want != value:
                problems.append(f"row {exp}: {col}={value} != {want}")
    return problems


@main.command("tables")
@click.option("--which", type=click.Choice(["1", "2", "3", "4", "5"]), required=True)
@click.option("--output", "-o", type=click.Path(path_type=Path), default=None)
def tables_cmd(which, output):
    """Recompute one of the published tables and diff it against the
    bundled expected values."""
    started = time.monotonic()
    header, rows = _compute_table(which)
    output = output or Path(f"table{which}.csv")
    _write_csv(output, header, rows)
    _write_manifest(output, [], started)
    problems = _diff_table(which, header, rows)
    if problems:
        for p in problems:
            click.echo(f"MISMATCH: {p}", err=True)
        raise DomainError(f"table {which} does not match expected values")
    click.echo(f"table {which}: {len(rows)} rows match expected")


if __name__ == "__main__":
    main()
