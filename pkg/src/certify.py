import functools
import logging
from typing import Callable, Dict, Optional, Tuple

import click

from src.affine_plane import (
    AffinePlane,
    OvalView,
    classify_points,
    point_classes,
    verify_difference_squareness,
    verify_incidence,
    verify_lines_through_a_point,
    verify_oval,
    verify_qvist,
    verify_tangent_uniformity,
)
from src.certificate import Certificate, require
from src.clique_search import (
    census,
    reference_sets,
    verify_census_symmetry,
    verify_enumeration_soundness,
)
from src.config import Settings
from src.constructions import (
    adjacency_structure,
    build_oval_decomposition,
    theorem1_sets,
    verify_affine_automorphisms,
    verify_lemma_tq,
    verify_neighbours_of_one,
    verify_scaled_partition,
    verify_secants_through_zero,
    verify_subfield_clique,
    verify_theorem1,
)
from src.errors import CapExceededError, PaleyError, TruncatedError, VerificationError
from src.export import (
    census_json,
    cliques_dimacs,
    eigenfunction_csv,
    eigenfunction_json,
    field_json,
    graph_dimacs,
    graph_json,
    point_report_json,
    sets_csv,
    sets_json,
    write_text,
)
from src.finite_field import (
    QuadExtContext,
    build_tower,
    field_tables,
    verify_field,
    verify_norm_properties,
    verify_square_lemmas,
)
from src.paley import (
    PaleyGraph,
    build_paley,
    complement,
    expected_srg_parameters,
    srg_eigenvalues,
    srg_parameters,
    verify_self_complementary,
    verify_srg,
)
from src.spectral import (
    EIGENSPACE_MAX_VERTICES,
    build_oval_eigenfunction,
    eigenvalue_identities,
    minimum_support_functions,
    oval_eigenvalue,
    verify_bound_tightness,
    verify_eigenspace_dimensions,
    verify_theorem2,
    weight_distribution_bound,
)

logger = logging.getLogger(__name__)

EXIT_FAILED = 1
EXIT_CAP = 3

# the seven items of Lemma T_Q walk every line for every power of omega
LEMMA_TQ_MAX_Q = 13

EXPORT_FORMATS = {
    "graph": ("dimacs", "json"),
    "eigenfunction": ("json", "csv"),
    "sets": ("json", "csv"),
    "field": ("json",),
    "points": ("json",),
    "census": ("json", "dimacs"),
}


def _handle_errors(fn: Callable) -> Callable:
    """Map toolkit errors onto exit codes: usage 2, cap or truncation 3."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (CapExceededError, TruncatedError) as e:
            click.echo(f"❌ {e}")
            click.get_current_context().exit(EXIT_CAP)
        except VerificationError as e:
            click.echo(f"❌ {e}")
            click.get_current_context().exit(EXIT_FAILED)
        except PaleyError as e:
            raise click.UsageError(str(e)) from e

    return wrapper


def _common_options(fn: Callable) -> Callable:
    fn = click.option("--progress/--no-progress", default=None, help="Show progress bars (default: only on a terminal)")(fn)
    fn = click.option("--cap", type=int, default=None, help="Raise the q limits to this value (slow runs ahead)")(fn)
    fn = click.option("--threads", type=int, default=None, help="Worker processes (default: PALEY_THREADS)")(fn)
    fn = click.option("--q", "q", type=int, required=True, help="Odd prime power q; the graph is P(q^2)")(fn)
    return fn


def _settings(q: int, cap: Optional[int], threads: Optional[int]) -> Tuple[Settings, int]:
    settings = Settings.from_env()
    logging.basicConfig(level=settings.log_level, format="%(levelname)s %(name)s: %(message)s")
    if cap is not None:
        click.echo(f"⚠️  --cap {cap}: size limits raised, this run may be slow")
        settings = settings.with_cap(cap)
    if q > settings.max_q:
        raise CapExceededError("q", q, settings.max_q)
    threads = settings.threads if threads is None else threads
    if threads < 1:
        raise click.BadParameter("must be at least 1", param_hint="--threads")
    return settings, threads


def _field(q: int, settings: Settings) -> QuadExtContext:
    ctx = build_tower(q, settings.field_cap, settings.debug_verify)
    logger.debug("field for q=%d ready", q)
    return ctx


def _parameters(ctx: QuadExtContext) -> Dict[str, object]:
    tables = field_tables(ctx)
    return {key: tables[key] for key in ("p", "m", "modulus", "base_primitive", "d", "beta")}


def _emit(cert: Certificate, out: Optional[str], timing: bool) -> None:
    text = cert.to_json(include_timing=timing) + "\n"
    if out:
        write_text(out, text)
        click.echo(f"Certificate written to {out}")
    else:
        click.echo(text, nl=False)


def _report(cert: Certificate) -> None:
    for check in cert.checks:
        click.echo(f"{'✅' if check.passed else '❌'} {check.name}")


def _skip(cert: Certificate, name: str, reason: str) -> None:
    click.echo(f"⚠️  {name} skipped ({reason})")
    cert.payload.setdefault("skipped", []).append(name)


def _holds(value: bool, claim: str, message: str) -> Dict[str, object]:
    require(value, claim, message)
    return {}


@click.command()
@click.option("--q", "q", type=int, required=True, help="Odd prime power q; the graph is P(q^2)")
@click.option("--cap", type=int, default=None, help="Raise the q limits to this value")
@_handle_errors
def info(q, cap):
    """Parameters of P(q^2) and of the oval-based constructions"""
    settings, _ = _settings(q, cap, 1)
    ctx = _field(q, settings)
    params = expected_srg_parameters(q)
    k, theta1, theta2 = srg_eigenvalues(params)
    tables = field_tables(ctx)
    click.echo(f"q = {q} = {tables['p']}^{tables['m']}")
    click.echo(f"modulus (constant term first): {tables['modulus']}")
    click.echo(f"d = {tables['d']}  beta = {tables['beta']}")
    click.echo(f"srg parameters: v={params.v}, k={params.k}, lambda={params.lam}, mu={params.mu}")
    click.echo(f"eigenvalues: k={k}, theta1={theta1}, theta2={theta2}")
    click.echo(f"Delsarte bound (clique and coclique): {q}")
    if q % 4 == 1:
        click.echo(f"theorem 1: maximal cocliques Q0, Q1 of size {(q + 1) // 2}")
    else:
        click.echo(f"theorem 1: maximal cliques Q0+0, Q1+0 of size {(q + 3) // 2}")
    click.echo(f"theorem 2: eigenvalue {oval_eigenvalue(q)}, support {weight_distribution_bound(q)}")


def _run_theorem1(cert: Certificate, ctx, g, dec, plane, oval) -> None:
    cert.payload["sets"] = [s.to_dict() for s in theorem1_sets(ctx, dec)]
    cert.run("theorem 1", verify_theorem1, g, theorem1_sets(ctx, dec))
    cert.run("subfield clique", verify_subfield_clique, g, ctx)
    cert.run("scaled ovals", verify_scaled_partition, g, ctx, dec)
    cert.run("secants through 0", verify_secants_through_zero, plane, dec, oval)


def _run_theorem2(cert: Certificate, g, dec, plane, oval, threads, progress) -> None:
    params = srg_parameters(g, threads, progress)
    cert.run("eigenvalue identities", eigenvalue_identities, params)
    if g.v <= EIGENSPACE_MAX_VERTICES:
        cert.run("eigenspace dimensions", verify_eigenspace_dimensions, g, params)
    else:
        _skip(cert, "eigenspace dimensions", f"{g.v} vertices > {EIGENSPACE_MAX_VERTICES}")
    cert.run("theorem 2", verify_theorem2, g, dec, point_classes(plane, oval), params, threads, progress)


def _run_lemmas(cert: Certificate, ctx, g, dec, plane, oval) -> None:
    cert.run("field tables", verify_field, ctx.base)
    cert.run("norm map", verify_norm_properties, ctx)
    cert.run("squares", verify_square_lemmas, ctx)
    cert.run("affine plane axioms", verify_incidence, plane)
    cert.run("lines through a point", verify_lines_through_a_point, plane)
    cert.run("difference squareness", verify_difference_squareness, plane)
    cert.run("oval", verify_oval, plane, oval)
    cert.run("qvist", verify_qvist, plane, oval)
    cert.run("tangent uniformity", lambda: {"tangents": verify_tangent_uniformity(plane, oval)})
    cert.run("adjacency structure of Q", lambda: {"shape": adjacency_structure(g, dec)})
    cert.run("neighbours of 1", verify_neighbours_of_one, g, dec)
    cert.run("affine automorphisms", verify_affine_automorphisms, g, ctx)
    if ctx.q <= LEMMA_TQ_MAX_Q:
        cert.run("lemma T_Q", verify_lemma_tq, ctx, plane, dec, oval)
    else:
        _skip(cert, "lemma T_Q", f"q = {ctx.q} > {LEMMA_TQ_MAX_Q}")


@click.command()
@_common_options
@click.option("--all", "which", flag_value="all", default=True, help="Every suite (default)")
@click.option("--theorem1", "which", flag_value="theorem1", help="Maximal cliques and cocliques from the oval")
@click.option("--theorem2", "which", flag_value="theorem2", help="The oval eigenfunction")
@click.option("--lemmas", "which", flag_value="lemmas", help="Field, plane, oval and automorphism lemmas")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the certificate here")
@click.option("--timing/--no-timing", default=True, help="Include per-check timings in the certificate")
@_handle_errors
def verify(q, threads, cap, progress, which, out, timing):
    """Run the exact verification suites and emit a certificate"""
    settings, threads = _settings(q, cap, threads)
    ctx = _field(q, settings)
    g = build_paley(ctx)
    dec = build_oval_decomposition(ctx)
    plane = AffinePlane(ctx)
    oval = OvalView(plane, dec.powers)
    cert = Certificate(f"verify --{which}", q, _parameters(ctx))
    click.echo(f"Verifying P({q}^2): {g.v} vertices, suite '{which}'")
    if which in ("all", "theorem1", "theorem2"):
        cert.run("srg parameters", verify_srg, g, threads, progress)
    if which == "all":
        cert.run("self-complementary", lambda: _holds(verify_self_complementary(g, ctx), "self-complementary",
                                                      "multiplying by beta is not a complement isomorphism"))
    if which in ("all", "theorem1"):
        _run_theorem1(cert, ctx, g, dec, plane, oval)
    if which in ("all", "theorem2"):
        _run_theorem2(cert, g, dec, plane, oval, threads, progress)
    if which in ("all", "lemmas"):
        _run_lemmas(cert, ctx, g, dec, plane, oval)
    _report(cert)
    _emit(cert, out, timing)
    if not cert.passed:
        click.echo("❌ verification failed")
        click.get_current_context().exit(EXIT_FAILED)
    click.echo(f"✅ all {len(cert.checks)} checks passed")


@click.command()
@_common_options
@click.option("--size", type=int, default=None, help="Only maximal cliques of exactly this size")
@click.option("--limit", type=int, default=None, help="Stop after this many cliques (marks the census truncated)")
@click.option("--complement", "on_complement", is_flag=True, help="Search the complement graph (maximal cocliques)")
@click.option("--samples", type=int, default=3, help="Representatives kept per size")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the certificate here")
@click.option("--timing/--no-timing", default=True, help="Include timings in the certificate")
@_handle_errors
def cliques(q, threads, cap, progress, size, limit, on_complement, samples, out, timing):
    """Census of maximal cliques, with counts of affine images of the known constructions"""
    settings, threads = _settings(q, cap, threads)
    ctx = _field(q, settings)
    g = build_paley(ctx)
    graph = complement(g) if on_complement else g
    dec = build_oval_decomposition(ctx)
    refs = reference_sets(ctx, dec, on_complement)
    result = census(graph, ctx, size, refs, limit, samples, threads, settings, progress)
    command = "cliques" + (f" --size {size}" if size is not None else "") + (" --complement" if on_complement else "")
    cert = Certificate(command, q, _parameters(ctx), payload={"census": result.to_dict()})
    cert.run("enumeration soundness", verify_enumeration_soundness, graph, sorted(result.keys))
    if not result.truncated:
        cert.run("census symmetry", verify_census_symmetry, ctx, result)
    if size is None and not result.truncated:
        cert.run("clique number", lambda: _holds(max(result.histogram) == q, "clique number",
                                                 "largest maximal clique differs from q"))
    cert.timing["census"] = round(result.elapsed, 6)
    for s, n in sorted(result.histogram.items()):
        click.echo(f"size {s}: {n} maximal cliques")
    for label, n in sorted(result.orbit_counts.items()):
        click.echo(f"affine images of {label}: {n}")
    _report(cert)
    _emit(cert, out, timing)
    if result.truncated:
        click.echo(f"⚠️  census truncated at {limit} cliques; counts are partial")
        click.get_current_context().exit(EXIT_CAP)
    if not cert.passed:
        click.get_current_context().exit(EXIT_FAILED)
    click.echo(f"✅ {result.total} maximal cliques enumerated")


@click.command()
@click.option("--q", "q", type=int, required=True, help="Odd prime power q; the graph is P(q^2)")
@click.option("--format", "fmt", type=click.Choice(["dimacs", "json", "csv"]), default="json")
@click.option("--what", type=click.Choice(sorted(EXPORT_FORMATS)), default="graph")
@click.option("--size", type=int, default=None, help="Census size window (--what census)")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default: stdout)")
@click.option("--cap", type=int, default=None, help="Raise the q limits to this value")
@_handle_errors
def export(q, fmt, what, size, out, cap):
    """Write the graph, eigenfunction, sets, field tables, point classes or a census"""
    if fmt not in EXPORT_FORMATS[what]:
        raise click.UsageError(f"--what {what} supports {', '.join(EXPORT_FORMATS[what])}, not {fmt}")
    settings, _ = _settings(q, cap, 1)
    ctx = _field(q, settings)
    if what == "field":
        text = field_json(ctx)
    else:
        g = build_paley(ctx)
        text = _render(what, fmt, ctx, g, size, settings)
    if out:
        write_text(out, text)
        click.echo(f"✅ {what} for q={q} written to {out}")
    else:
        click.echo(text, nl=False)


def _render(what: str, fmt: str, ctx: QuadExtContext, g: PaleyGraph, size: Optional[int], settings: Settings) -> str:
    if what == "graph":
        return graph_dimacs(g) if fmt == "dimacs" else graph_json(g)
    dec = build_oval_decomposition(ctx)
    if what == "eigenfunction":
        f = build_oval_eigenfunction(dec)
        return eigenfunction_json(ctx.q, f) if fmt == "json" else eigenfunction_csv(f)
    if what == "sets":
        sets = [s.to_dict() for s in theorem1_sets(ctx, dec)]
        return sets_json(ctx.q, sets) if fmt == "json" else sets_csv(sets)
    if what == "points":
        plane = AffinePlane(ctx)
        return point_report_json(ctx.q, classify_points(plane, OvalView(plane, dec.powers)))
    result = census(g, ctx, size, reference_sets(ctx, dec), settings=settings)
    return census_json(result) if fmt == "json" else cliques_dimacs(sorted(result.keys))


@click.command()
@_common_options
@click.option("--theta", type=int, default=None, help="Eigenvalue (default: the one paired with the oval)")
@click.option("--support-cap", type=int, default=None, help="Largest support to search (default q + 1)")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the certificate here")
@click.option("--timing/--no-timing", default=True, help="Include timings in the certificate")
@_handle_errors
def oracle(q, threads, cap, progress, theta, support_cap, out, timing):
    """Exhaustive search for the smallest eigenfunction support (q = 3, 5)"""
    settings, threads = _settings(q, cap, threads)
    ctx = _field(q, settings)
    g = build_paley(ctx, settings.oracle_max_vertices)
    theta = oval_eigenvalue(q) if theta is None else theta
    bound = weight_distribution_bound(q)
    support_cap = bound if support_cap is None else support_cap
    cert = Certificate(f"oracle --theta {theta}", q, _parameters(ctx))
    functions = minimum_support_functions(g, theta, support_cap, settings, threads, progress)
    minimum = len(functions[0].support) if functions else None
    cert.payload["oracle"] = {
        "theta": theta,
        "support_cap": support_cap,
        "minimum": minimum,
        "functions_through_0": [{str(i): x for i, x in f.sparse().items()} for f in functions],
    }
    if minimum is not None and support_cap >= bound:
        cert.run("minimum support", verify_bound_tightness, g, theta, bound, functions=functions)
    _report(cert)
    _emit(cert, out, timing)
    if minimum is None:
        click.echo(f"⚠️  no eigenfunction for theta={theta} with support <= {support_cap}")
    else:
        click.echo(f"minimum support for theta={theta}: {minimum} ({len(functions)} through vertex 0)")
    if not cert.passed:
        click.get_current_context().exit(EXIT_FAILED)


@click.group()
def main():
    """Paley graph P(q^2) verification and clique search toolkit"""
    pass


main.add_command(info, name="info")
main.add_command(verify, name="verify")
main.add_command(cliques, name="cliques")
main.add_command(export, name="export")
main.add_command(oracle, name="oracle")


if __name__ == "__main__":
    main()
