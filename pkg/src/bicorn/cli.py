"""Command-line entry point.

Every flag can also be set through an environment variable named
``BICORN_<FLAG>`` (for example ``BICORN_SEED`` or ``BICORN_BUDGET_DEPTH``).
Exit status is 0 on success, 1 when a check or criterion fails and 2 when
the input cannot be read or is invalid.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click

from . import __version__
from . import coarse as co
from . import curvepair as cpm
from . import models as mo
from . import suite as su
from . import traintrack as tt

ENV = "BICORN"


class InputError(click.ClickException):
    exit_code = 2


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


def _header(seed: int, digest: str, prefix: str = "#") -> str:
    return f"{prefix} bicorn {__version__} seed={seed} input={digest}\n"


def _stamp(text: str, seed: int, digest: str) -> str:
    """Add a ``meta`` record to a JSON output; loaders ignore it."""
    doc = {"meta": {"tool": "bicorn", "version": __version__, "seed": seed, "input": digest}}
    doc.update(json.loads(text))
    return json.dumps(doc, indent=1) + "\n"


def _read(path: str | None) -> tuple[str, bytes]:
    if path is None:
        raise InputError("--input is required")
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return path, data


def _json(path: str, data: bytes):
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _line_of(data: bytes, key: str) -> int | None:
    """1-based line of the first occurrence of a JSON key, for diagnostics."""
    needle = f'"{key}"'.encode()
    for k, line in enumerate(data.splitlines(), 1):
        if needle in line:
            return k
    return None


def _where(path: str, data: bytes, key: str) -> str:
    line = _line_of(data, key)
    return path if line is None else f"{path}:{line}"


def _emit(out: str | None, files: dict[str, str]) -> None:
    """Write files into ``out`` or print them to stdout in name order."""
    if out is None:
        for name in sorted(files):
            click.echo(f"==> {name}")
            click.echo(files[name], nl=False)
        return
    root = Path(out)
    root.mkdir(parents=True, exist_ok=True)
    for name, text in sorted(files.items()):
        (root / name).write_text(text)


def common(fn):
    opts = [
        click.option("--input", "input_path", envvar=f"{ENV}_INPUT", type=click.Path(), help="Input file."),
        click.option("--out", envvar=f"{ENV}_OUT", type=click.Path(), help="Output directory (default: stdout)."),
        click.option("--seed", envvar=f"{ENV}_SEED", type=int, default=su.DEFAULT_SEED, show_default=True),
        click.option("--jobs", envvar=f"{ENV}_JOBS", type=click.IntRange(min=1), default=1, show_default=True),
        click.option("--budget-depth", envvar=f"{ENV}_BUDGET_DEPTH", type=click.IntRange(min=1), default=2,
                     show_default=True, help="Search depth / weight cap."),
        click.option("--sample", envvar=f"{ENV}_SAMPLE", type=click.IntRange(min=1), default=2000,
                     show_default=True, help="Sample budget."),
        click.option("--filter", "filter_spec", envvar=f"{ENV}_FILTER", default=None,
                     help="Comma list of groups or criterion numbers."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(__version__, prog_name="bicorn")
def main():
    """Curve surgery, train tracks and coarse graph diagnostics."""


# -- surgery ---------------------------------------------------------------------------


@main.command()
@common
@click.option("--strategy", type=click.Choice(["outermost", "default"]), default="outermost", show_default=True)
@click.option("--choice", type=click.Choice(["left_piece", "right_piece"]), default="left_piece", show_default=True)
def surgery(input_path, out, seed, jobs, budget_depth, sample, filter_spec, strategy, choice):
    """Surgery sequence and bicorn/track pipeline for a curve pair."""
    path, data = _read(input_path)
    try:
        cp = cpm.build_curve_pair(_json(path, data))
    except cpm.BigonPresent as exc:
        raise InputError(f"{_where(path, data, 'rotations')}: BigonPresent: {exc}") from None
    except cpm.CurvePairError as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from None
    head = _header(seed, _digest(data))
    strat = cpm.outermost_strategy if strategy == "outermost" else cpm.default_strategy
    lines = [f"pair genus={cp.genus} i={cp.n}"]
    try:
        seq = cpm.curve_surgery_sequence(cp, strat, choice)
    except cpm.CurvePairError as exc:
        raise click.ClickException(f"{path}: surgery failed: {type(exc).__name__}: {exc}") from None
    lines.append(f"steps {len(seq)}")
    for k, rec in enumerate(seq.steps, 1):
        kind = "crossing" if rec.crossing else "returning"
        lines.append(
            f"step {k} arc={rec.arc.start}->{rec.arc.end} {kind} piece={rec.piece.start}->{rec.piece.end} "
            f"i(c,b)={rec.i_c_b} c_disjoint_from_a={str(rec.c_vs_a_disjoint).lower()}"
        )
    lines.append("intersections " + " ".join(map(str, seq.intersections)))
    if cp.n:
        try:
            bic = cpm.nested_bicorn_sequence(cp)
            stages, carried = tt.bicorn_pipeline(cp, bic.bicorns)
        except (cpm.CurvePairError, tt.TrackError) as exc:
            lines.append(f"bicorns unavailable: {type(exc).__name__}: {exc}")
        else:
            lines.append(f"bicorns {len(stages)}")
            for k, st in enumerate(stages):
                a = st.bicorn.a_arc
                t = st.collapsed.track
                lines.append(
                    f"bicorn {k} a={a.start}->{a.end} branches={len(t.branches)} "
                    f"switch_dual={str(st.switch_dual).lower()}"
                    + ("" if k == 0 else f" carried_by_previous={str(carried[k - 1]).lower()}")
                )
    _emit(out, {"surgery.txt": head + "\n".join(lines) + "\n"})


# -- tracks ------------------------------------------------------------------------------


@main.command()
@common
def track(input_path, out, seed, jobs, budget_depth, sample, filter_spec):
    """Validate a train track and report faces, vertex cycles and moves."""
    path, data = _read(input_path)
    try:
        t = tt.validate_track(_json(path, data))
    except tt.TrackError as exc:
        raise InputError(f"{_where(path, data, 'branches')}: {type(exc).__name__}: {exc}") from None
    head = _header(seed, _digest(data))
    lines = [f"switches {len(t.switches)} branches {len(t.branches)} genus {t.genus} punctures {t.punctures}"]
    for f in tt.face_census(t):
        lines.append(f"face {f.index} cusps={f.cusps} kind={f.kind}")
    cycles = sorted(tt.vertex_cycles(t, budget_depth), key=lambda w: w.weights)
    for w in cycles:
        lines.append("vertex_cycle " + " ".join(f"{b}:{v}" for b, v in w.weights if v))
    rep = tt.recurrence_report(t, cycles=cycles)
    lines.append(f"recurrent={str(rep.recurrent).lower()} large={str(rep.large).lower()} filling={str(rep.filling).lower()}")
    for e in tt.large_branches(t):
        for ch in ("left", "right", "central"):
            try:
                res = tt.split(t, e, ch)
                ok = tt.verify_carrying(res.track, t, res.route)
                lines.append(f"split {e} {ch} carried={str(ok).lower()}")
            except tt.TrackError as exc:
                lines.append(f"split {e} {ch} {type(exc).__name__}")
    for m, end in tt.shift_branches(t):
        res = tt.shift(t, m, end)
        lines.append(f"shift {m}@{end} carried={str(tt.verify_carrying(res.track, t, res.route)).lower()}")
    files = {"track.txt": head + "\n".join(lines) + "\n", "track.dot": _header(seed, _digest(data), "//") + tt.to_dot(t)}
    _emit(out, files)


# -- coarse ------------------------------------------------------------------------------


@main.command()
@common
@click.option("--automorphism", type=click.Path(), help="Vertex-map file for translation lengths.")
@click.option("--steps", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--model-suite", is_flag=True, help="Regenerate the frozen model regression CSVs.")
def coarse(input_path, out, seed, jobs, budget_depth, sample, filter_spec, automorphism, steps, model_suite):
    """Electrify a graph along its subsets and report coarse diagnostics."""
    if model_suite:
        # the frozen files are reproduced verbatim; the header goes in a manifest
        files = su.model_regression(seed)
        manifest = _header(seed, su.input_digest()) + "".join(
            f"{hashlib.sha256(files[k].encode()).hexdigest()}  {k}\n" for k in sorted(files)
        )
        files["MANIFEST"] = manifest
        _emit(out, files)
        return
    path, data = _read(input_path)
    try:
        g, fam = co.load_graph(data.decode())
    except (co.CoarseError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from None
    digest = _digest(data)
    head = _header(seed, digest)
    e = co.electrify(g, fam)
    files = {
        "electrified.json": _stamp(co.dump_graph(e), seed, digest),
        "electrified.dot": _header(seed, digest, "//") + co.to_dot(e),
    }
    rows = [(u, v, co.distance(g, u, v), co.distance(e, u, v)) for u in g.vertices for v in g.vertices]
    files["distances.csv"] = head + co.csv_rows(("u", "v", "d", "d_electrified"), rows)
    mode = "exhaustive" if len(g) <= 40 else "sampled"
    d_base = co.delta_four_point(g, mode, sample, seed)
    d_el = co.delta_four_point(e, mode, sample, seed)
    files["delta.csv"] = head + co.csv_rows(
        ("graph", "mode", "delta", "examined"),
        [("base", d_base.mode, d_base.delta, d_base.examined), ("electrified", d_el.mode, d_el.delta, d_el.examined)],
    )
    sets = [list(ys) for _, ys in fam.subsets]
    qrows = [(name, co.quasiconvexity_constant(g, ys)) for name, ys in fam.subsets]
    files["quasiconvexity.csv"] = head + co.csv_rows(("subset", "Q"), qrows)
    if len(sets) >= 3:
        rep = co.separation_report(g, sets, e)
        files["separation.csv"] = head + co.csv_rows(
            ("L", "M", "gaps", "projection_gaps", "electrified_gaps"),
            [(rep.well_separated, rep.y_separated, " ".join(map(co._fmt, rep.gaps)),
              " ".join(map(co._fmt, rep.projection_gaps)), " ".join(map(co._fmt, rep.electrified_gaps)))],
        )
    if len(sets) >= 2:
        rec = co.piecewise_geodesic(g, sets)
        files["piecewise.csv"] = head + co.csv_rows(
            ("vertices", "corners", "corner_products", "K", "c"),
            [(" ".join(map(str, rec.vertices)), " ".join(map(str, rec.corner_points())),
              " ".join(map(co._fmt, rec.corner_products)), rec.constants[0], rec.constants[1])],
        )
    if automorphism:
        apath, adata = _read(automorphism)
        try:
            f = co.load_automorphism(adata.decode())
        except (KeyError, ValueError) as exc:
            raise InputError(f"{apath}: {type(exc).__name__}: {exc}") from None
        x0 = g.vertices[0]
        tr = co.translation_length(g, f, x0, steps, truncate=f.partial)
        files["translation.csv"] = head + co.csv_rows(
            ("n", "displacement", "ratio"), zip(tr.ns, tr.displacements, tr.ratios)
        ) + f"# tail_slope={tr.tail_slope!r} loxodromic={str(tr.loxodromic).lower()}\n"
    _emit(out, files)


# -- models ------------------------------------------------------------------------------


@main.command()
@common
@click.option("--kind", type=click.Choice(["farey", "tree", "drift"]), default="tree", show_default=True)
@click.option("--bound", type=int, default=4, show_default=True, help="Farey bound or tree radius.")
@click.option("--length", type=click.IntRange(min=1), default=10, show_default=True)
def models(input_path, out, seed, jobs, budget_depth, sample, filter_spec, kind, bound, length):
    """Generate model graphs (coarse graph format) and drift curves."""
    digest = _digest(f"{kind}:{bound}:{length}".encode())
    try:
        if kind == "farey":
            fb = mo.farey_ball(bound)
            integers = [s for s, (p, q) in fb.slopes.items() if q == 1]
            files = {f"farey{bound}.json": co.dump_graph(fb.graph, co.SubsetFamily.of({"integers": integers}))}
            t = fb.action(((1, 1), (0, 1)), "T")
            files[f"farey{bound}_T.json"] = co.dump_automorphism(t)
        elif kind == "tree":
            ball = mo.free_tree_ball(bound)
            files = {f"tree{bound}.json": co.dump_graph(ball.graph, mo.coset_family(ball))}
            files[f"tree{bound}_b.json"] = co.dump_automorphism(ball.left_action("b"))
        else:
            ball = mo.free_tree_ball(bound)
            gens = {s: ball.left_action(s) for s in "aAbB"}
            rep = mo.estimate_drift(ball.graph, mo.WalkSpec.uniform("aAbB", length, sample, seed), mo.IDENTITY, gens)
            files = {f"drift_tree{bound}.csv": _header(seed, digest) + f"# bound={bound}\n" + rep.to_csv()}
    except co.CoarseError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None
    _emit(out, {k: _stamp(v, seed, digest) if k.endswith(".json") else v for k, v in files.items()})


# -- suite -------------------------------------------------------------------------------


@main.command()
@common
@click.option("--no-determinism", is_flag=True, help="Skip the rerun that checks byte-identical artifacts.")
def suite(input_path, out, seed, jobs, budget_depth, sample, filter_spec, no_determinism):
    """Run the acceptance suite; exit 0 iff every selected criterion passes."""
    cfg = su.SuiteConfig(seed=seed, budget_depth=budget_depth, jobs=jobs)
    if filter_spec and not su.select(filter_spec):
        raise InputError(f"filter {filter_spec!r} matches no criterion")
    results = su.run_suite(cfg, filter_spec, determinism=not no_determinism)
    for r in results:
        click.echo(r.line())
    files = {"summary.json": su.summary_json(results, cfg)}
    for r in results:
        for name, text in r.artifacts.items():
            files[f"c{r.number:02d}_{name}"] = text
    if out is not None:
        _emit(out, files)
    failed = [r for r in results if not r.passed]
    if failed:
        click.echo(f"first failing criterion: [{failed[0].number}] {failed[0].name}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
