"""Command-line interface.

Exit codes: 0 on success, 1 when ``verify`` finds a violated invariant,
2 on unreadable or invalid input, 3 on a numerical-rank failure.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import _json
from .diagrams import (
    NumericalRankError,
    classical_pd,
    gpd_birth_death,
    gpd_laplacian,
    lifetime_check,
)
from .filtration import PRODUCT, Filtration, Segment, vietoris_rips
from .harmonic import check_projection_isomorphism, harmonic_barcode
from .invariants import (
    SegmentDiagram,
    intersection_monotone_violations,
    laplacian_nullity,
    persistent_betti,
    zb_diagram,
)
from .inversion import prhi
from .subspace import DEFAULT_TOL, are_orthogonal, sum_all
from .treegram import (
    Treegram,
    gpd_to_treegram,
    read_matrix_csv,
    treegram_of_filtration,
    treegram_to_gpd,
    ultrametric_from_treegram,
)

EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_RANK = 3


class InputError(click.ClickException):
    exit_code = EXIT_PARSE


def _read_text(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _read_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _parse(fn, obj, what):
    try:
        return fn(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"invalid {what}: {exc}") from None


def _load_filtration(path):
    return _parse(Filtration.from_json, _read_json(path), "filtration")


def _emit(obj, output):
    text = obj if isinstance(obj, str) else _json.dumps(obj)
    if output in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _run(fn):
    """Translate numerical-rank failures into exit code 3."""
    try:
        return fn()
    except NumericalRankError as exc:
        click.echo(f"error: numerical rank failure: {exc} (try a smaller --tol)", err=True)
        sys.exit(EXIT_RANK)


def _jobs(threads):
    return -1 if threads is None else threads


tol_option = click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True,
                          help="Relative tolerance for rank decisions.")
out_option = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                          help="Write to this file instead of stdout.")
threads_option = click.option("--threads", type=int, default=None,
                              help="Worker threads over segments (default: all cores).")
degree_option = click.option("--degree", "-q", type=click.IntRange(min=0), default=0, show_default=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Grassmannian persistence diagrams of simplicial filtrations."""


@main.command()
@click.argument("input", type=str)
@degree_option
@click.option("--method", type=click.Choice(["birth-death", "laplacian"]), default="birth-death",
              show_default=True)
@tol_option
@out_option
@threads_option
def gpd(input, degree, method, tol, output, threads):
    """Grassmannian persistence diagram of a filtration JSON file."""
    F = _load_filtration(input)
    if method == "birth-death":
        G = _run(lambda: gpd_birth_death(F, degree, tol, n_jobs=_jobs(threads)))
    else:
        G = _run(lambda: gpd_laplacian(F, degree, tol, n_jobs=_jobs(threads)))
    _emit(G.to_json(), output)


def _pd_records(pd):
    return [dict(Segment(*s).to_json(), multiplicity=int(v)) for s, v in sorted(pd.items())]


@main.command()
@click.argument("input", type=str)
@degree_option
@tol_option
@out_option
def pd(input, degree, tol, output):
    """Classical persistence diagram, by both methods, with an agreement flag."""
    F = _load_filtration(input)
    by_dims = _run(lambda: classical_pd(F, degree, "dims", tol))
    by_betti = _run(lambda: classical_pd(F, degree, "betti", tol))
    off = {s: v for s, v in by_dims.items() if not s.is_diagonal()}
    _emit({
        "degree": degree,
        "values": [float(v) for v in F.poset.values],
        "dims": _pd_records(by_dims),
        "betti": _pd_records(by_betti),
        "agree": off == by_betti,
    }, output)


@main.command()
@click.argument("input", type=str)
@degree_option
@tol_option
@out_option
@click.option("--k0", type=click.Choice(["empty", "first"]), default="empty", show_default=True,
              help="Complex assumed before the first index.")
def harmonic(input, degree, tol, output, k0):
    """Harmonic barcode cells, with the projection-isomorphism flag per cell."""
    F = _load_filtration(input)
    G = _run(lambda: gpd_birth_death(F, degree, tol))
    cells = harmonic_barcode(F, degree, tol, k0)
    entries = []
    for s, cell in sorted(cells.items()):
        if cell.calP.dim == 0 and G[s].dim == 0:
            continue
        rec = s.to_json()
        rec["dim"] = cell.calP.dim
        rec["basis"] = cell.calP.to_json()["basis"]
        rec["isomorphism_verified"] = check_projection_isomorphism(G[s], cell, tol)
        entries.append(rec)
    _emit({
        "order": "reverse_inclusion",
        "ambient": F.complex.n_simplices(degree),
        "values": [float(v) for v in F.poset.values],
        "degree": degree,
        "labels": F.complex.labels(degree),
        "entries": entries,
    }, output)


@main.command()
@click.argument("input", type=str)
@click.option("--direction", type=click.Choice(["from-filtration", "from-gpd", "to-gpd", "to-ultrametric"]),
              default="from-filtration", show_default=True,
              help="from-filtration and from-gpd build a treegram; to-gpd and to-ultrametric read one.")
@tol_option
@out_option
def treegram(input, direction, tol, output):
    """Treegrams and their conversions."""
    obj = _read_json(input)
    if direction == "from-filtration":
        F = _parse(Filtration.from_json, obj, "filtration")
        T = _parse(treegram_of_filtration, F, "filtration")
        _emit(T.to_json(), output)
    elif direction == "from-gpd":
        G = _parse(lambda o: SegmentDiagram.from_json(o, tol), obj, "diagram")
        T = _parse(gpd_to_treegram, G, "degree-0 diagram")
        _emit(T.to_json(), output)
    else:
        T = _parse(Treegram.from_json, obj, "treegram")
        if direction == "to-gpd":
            _emit(treegram_to_gpd(T, tol).to_json(), output)
        else:
            _emit(ultrametric_from_treegram(T).to_csv(), output)


@main.command()
@click.argument("input", type=str)
@click.option("--max-dim", type=click.IntRange(min=0), default=1, show_default=True)
@out_option
def vr(input, max_dim, output):
    """Vietoris-Rips filtration of a distance-matrix CSV (header row of names)."""
    names, D = _parse(read_matrix_csv, _read_text(input), "distance CSV")
    F = _parse(lambda M: vietoris_rips(M, max_dim, names), D, "distance matrix")
    _emit(F.to_json(), output)


# -- verify ----------------------------------------------------------------------


class _Report:
    def __init__(self):
        self.lines = []
        self.failures = 0

    def check(self, name, ok, where=None):
        if ok:
            self.lines.append(f"PASS {name}")
        else:
            self.failures += 1
            self.lines.append(f"FAIL {name}" + (f" at {where}" if where is not None else ""))

    def each(self, name, results):
        """``results`` maps a location to a bool; reports the first failure."""
        bad = [k for k, ok in results if not ok]
        self.check(name, not bad, bad[0] if bad else None)


def _verify_filtration(F, degrees, tol, report):
    loose = max(tol, 1e-6)
    for q in degrees:
        tag = f"[q={q}]"
        zb = zb_diagram(F, q, tol)
        bad = intersection_monotone_violations(zb)
        report.check(f"{tag} zb.intersection_monotone", not bad, bad[0][1] if bad else None)
        G = prhi(zb, check=False)
        report.check(f"{tag} gpd.transverse", G.is_transverse())
        report.each(f"{tag} gpd.comparable_orthogonal", (
            (f"{s}~{t}", are_orthogonal(G[s], G[t], loose))
            for s in G.support() for t in G.support() if s < t and s.b <= t.b and s.d <= t.d))
        d = F.complex.n_simplices(q)
        report.each(f"{tag} gpd.monoidal_inverse", (
            (J, sum_all([G[I] for I in G.support() if I.b <= J.b and I.d <= J.d], d=d, tol=tol)
             .equals(zb[J], loose))
            for J in zb.segments))
        lap = gpd_laplacian(F, q, tol)
        diff = G.differences(lap, loose, off_diagonal=True)
        report.check(f"{tag} gpd.dual_route", not diff, diff[0] if diff else None)
        try:
            pd_dims = classical_pd(F, q, "dims", tol)
            pd_betti = classical_pd(F, q, "betti", tol)
            off = {s: v for s, v in pd_dims.items() if not s.is_diagonal()}
            report.check(f"{tag} pd.agreement", off == pd_betti)
        except NumericalRankError as exc:
            report.check(f"{tag} pd.nonnegative", False, exc.segment)
        report.each(f"{tag} gpd.lifetime", (
            (s, all(lifetime_check(G[s].basis[:, k], F, q, s, tol) for k in range(G[s].dim)))
            for s in G.support()))
        report.each(f"{tag} laplacian.nullity_betti", (
            ((i, j), laplacian_nullity(F, q, i, j, tol) == persistent_betti(F, q, i, j, tol))
            for i in range(1, F.n + 1) for j in range(i, F.n + 1)))
        cells = harmonic_barcode(F, q, tol)
        report.each(f"{tag} harmonic.projection_isomorphism",
                    ((s, check_projection_isomorphism(G[s], c, loose)) for s, c in sorted(cells.items())))
        if q == 0:
            try:
                T = treegram_of_filtration(F)
            except ValueError:
                report.lines.append("SKIP [q=0] treegram.equivalence (final complex disconnected)")
            else:
                R = treegram_to_gpd(T, tol)
                diff = G.differences(R, loose)
                report.check("[q=0] treegram.equivalence", not diff, diff[0] if diff else None)
                report.check("[q=0] treegram.roundtrip", gpd_to_treegram(G, F.vertices) == T)


def _verify_diagram(obj, tol, report):
    G = _parse(lambda o: SegmentDiagram.from_json(o, tol), obj, "diagram")
    d = G.ambient_dim
    loose = max(tol, 1e-6)
    ortho = []
    for rec in obj["entries"]:
        B = np.array(rec.get("basis", []), dtype=float).reshape(-1, d).T
        err = float(np.max(np.abs(B.T @ B - np.eye(B.shape[1])))) if B.size else 0.0
        ortho.append((Segment.parse(rec["b"], rec["d"]), err <= loose))
    report.each("diagram.orthonormal_bases", ortho)
    if G.kind in (None, "gpd"):
        report.check("diagram.transverse", G.is_transverse())
        if G.order == PRODUCT:
            report.each("diagram.comparable_orthogonal", (
                (f"{s}~{t}", are_orthogonal(G[s], G[t], loose))
                for s in G.support() for t in G.support() if s < t and s.b <= t.b and s.d <= t.d))
    elif G.kind == "zb":
        bad = intersection_monotone_violations(G)
        report.check("diagram.intersection_monotone", not bad, bad[0][1] if bad else None)


@main.command()
@click.argument("input", type=str)
@click.option("--degree", "-q", "degrees", type=click.IntRange(min=0), multiple=True,
              help="Degrees to check (repeatable; default: every degree of the complex).")
@tol_option
def verify(input, degrees, tol):
    """Run the invariant suites on a filtration or a diagram JSON file."""
    obj = _read_json(input)
    report = _Report()
    if isinstance(obj, dict) and "entries" in obj:
        _verify_diagram(obj, tol, report)
    else:
        F = _parse(Filtration.from_json, obj, "filtration")
        degrees = degrees or tuple(range(F.complex.dim + 1))
        _run(lambda: _verify_filtration(F, degrees, tol, report))
    for line in report.lines:
        click.echo(line)
    if report.failures:
        click.echo(f"{report.failures} invariant(s) violated", err=True)
        sys.exit(EXIT_VIOLATION)


if __name__ == "__main__":
    main()
