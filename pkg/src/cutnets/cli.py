"""Command-line interface.

Exit codes: 0 affirmative/success, 1 negative decision, 2 usage or parse
error, 3 budget exceeded.  Certificates for negative decisions go to stdout;
diagnostics go to stderr.
"""

from __future__ import annotations

import sys

import click

from . import containment, cuttable, formats, generate, orient, sat
from .errors import (
    BudgetExceeded,
    CutnetsError,
    CycleError,
    DegreeError,
    NotBinary,
    NotTwoCuttable,
    ParseError,
    TooLarge,
    ValidationError,
)

_PARSE_ERRORS = (ParseError, ValidationError, DegreeError, CycleError, NotBinary)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _PARSE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except (TooLarge, BudgetExceeded) as exc:
        click.echo(f"budget exceeded: {exc}", err=True)
        sys.exit(3)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write(path, text: str) -> None:
    if path is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


@click.group()
def cli():
    """Tools for q-cuttable phylogenetic networks."""


@cli.command()
@click.option("--q", "q", type=int, required=True, help="chain length threshold")
@click.argument("net_file", type=click.Path(exists=True))
def recognize(q, net_file):
    """Decide whether NET_FILE is q-cuttable."""
    net = _guard(formats.parse_upn, _read(net_file))
    report = _guard(cuttable.is_q_cuttable, net, q)
    if report.is_cuttable:
        click.echo("q-cuttable: yes")
        sys.exit(0)
    click.echo("q-cuttable: no")
    click.echo(f"witness cycle: {'-'.join(str(v) for v in report.witness_cycle)}")
    sys.exit(1)


@cli.command()
@click.argument("net_file", type=click.Path(exists=True))
def stats(net_file):
    """Structural summary of an unrooted network."""
    net = _guard(formats.parse_upn, _read(net_file))
    click.echo(f"leaves: {len(net.leaf_labels)}")
    click.echo(f"vertices: {len(net.vertices)}")
    click.echo(f"edges: {len(net.edges)}")
    click.echo(f"reticulation number: {net.reticulation_number()}")
    click.echo(f"level: {net.level()}")
    blobs = net.blobs()
    click.echo(f"blobs: {len(blobs)}" +
               (f" (sizes {', '.join(str(len(b.vertices)) for b in blobs)})" if blobs else ""))
    chains = net.maximal_chains()
    click.echo(f"maximal chains: {len(chains)}" +
               (f" (lengths {', '.join(str(c.length) for c in chains)})" if chains else ""))
    mc = cuttable.max_cuttability(net)
    click.echo(f"max cuttability: {'unbounded (tree)' if mc is None else mc}")
    sys.exit(0)


@cli.command("orient")
@click.argument("net_file", type=click.Path(exists=True))
@click.option("--method", type=click.Choice(["constructive", "brute"]), default="constructive")
@click.option("-o", "--output", type=click.Path(), default=None)
def orient_cmd(net_file, method, output):
    """Produce a tree-child orientation (constructive needs 2-cuttability)."""
    net = _guard(formats.parse_upn, _read(net_file))
    if method == "constructive":
        try:
            rooted = orient.tree_child_orient_2cuttable(net)
        except NotTwoCuttable as exc:
            click.echo(f"no orientation produced: {exc}")
            sys.exit(1)
    else:
        rooted = _guard(orient.brute_force_tree_child_orientation, net)
        if rooted is None:
            click.echo("no tree-child orientation exists")
            sys.exit(1)
    _write(output, formats.serialize_enewick(rooted) + "\n")
    sys.exit(0)


@cli.command("check-tree-child")
@click.argument("rooted_file", type=click.Path(exists=True))
def check_tree_child(rooted_file):
    """Check whether a rooted network is tree-child."""
    rooted = _guard(formats.parse_enewick, _read(rooted_file))
    if orient.is_tree_child(rooted):
        click.echo("tree-child: yes")
        sys.exit(0)
    click.echo("tree-child: no")
    sys.exit(1)


@cli.command()
@click.argument("tree_file", type=click.Path(exists=True))
@click.argument("net_file", type=click.Path(exists=True))
@click.option("--oracle", is_flag=True, help="use the exhaustive embedding search")
@click.option("--trace", "trace_file", type=click.Path(), default=None)
def contain(tree_file, net_file, oracle, trace_file):
    """Decide whether the network displays the tree (3-cuttable algorithm)."""
    tree = _guard(formats.parse_newick_tree, _read(tree_file))
    net = _guard(formats.parse_upn, _read(net_file))
    if oracle:
        emb = _guard(containment.display_oracle, tree, net)
        click.echo(f"displays: {'yes' if emb else 'no'}")
        sys.exit(0 if emb else 1)
    verdict, trace = _guard(containment.three_cuttable_tc, tree, net)
    if trace_file:
        _write(trace_file, containment.serialize_trace(trace))
    click.echo(f"displays: {'yes' if verdict else 'no'}")
    if not verdict:
        for event in trace:
            if event.kind in ("SPLIT-CONFLICT", "RULE"):
                click.echo(f"certificate: {event.kind} {event.detail}")
    sys.exit(0 if verdict else 1)


@cli.group("sat")
def sat_group():
    """The reduction from 2-Balanced 3-SAT to Tree-Child Orientation."""


@sat_group.command("reduce")
@click.argument("cnf_file", type=click.Path(exists=True))
@click.option("-o", "--output", type=click.Path(), required=True)
@click.option("--gmap", "gmap_file", type=click.Path(), required=True)
def sat_reduce(cnf_file, output, gmap_file):
    """Build the unrooted network for a 2-balanced formula."""
    cnf = _guard(formats.parse_dimacs_cnf, _read(cnf_file))
    net, gmap = _guard(sat.build_u_phi, cnf)
    _write(output, formats.serialize_upn(net))
    _write(gmap_file, sat.serialize_gmap(gmap))
    click.echo(f"wrote {output} ({len(net.leaf_labels)} leaves) and {gmap_file}")
    sys.exit(0)


@sat_group.command("orient")
@click.argument("cnf_file", type=click.Path(exists=True))
@click.option("--assignment", required=True,
              help="compact truth string, one T/F per variable (e.g. TFF)")
@click.option("-o", "--output", type=click.Path(), required=True)
@click.option("--gmap", "gmap_file", type=click.Path(), required=True)
def sat_orient(cnf_file, assignment, output, gmap_file):
    """Orient the reduction network under a satisfying assignment."""
    cnf = _guard(formats.parse_dimacs_cnf, _read(cnf_file))
    if len(assignment) != cnf.n or set(assignment) - {"T", "F"}:
        click.echo("error: assignment must be a T/F string, one letter per variable", err=True)
        sys.exit(2)
    beta = {i + 1: ch == "T" for i, ch in enumerate(assignment)}
    try:
        rooted = sat.build_n_phi(cnf, beta)
    except CutnetsError as exc:
        click.echo(f"no orientation produced: {exc}")
        sys.exit(1)
    _, gmap = sat.build_u_phi(cnf)
    _write(output, formats.serialize_enewick(rooted) + "\n")
    _write(gmap_file, sat.serialize_gmap(gmap))
    sys.exit(0)


@sat_group.command("extract")
@click.argument("rooted_file", type=click.Path(exists=True))
@click.option("--gmap", "gmap_file", type=click.Path(exists=True), required=True)
@click.option("--cnf", "cnf_file", type=click.Path(exists=True), required=True)
def sat_extract(rooted_file, gmap_file, cnf_file):
    """Read a satisfying assignment off a tree-child orientation."""
    rooted = _guard(formats.parse_enewick, _read(rooted_file))
    gmap = _guard(sat.parse_gmap, _read(gmap_file))
    cnf = _guard(formats.parse_dimacs_cnf, _read(cnf_file))
    try:
        beta = sat.extract_assignment(rooted, gmap)
    except CutnetsError as exc:
        click.echo(f"extraction failed: {exc}")
        sys.exit(1)
    text = "".join("T" if beta[i] else "F" for i in range(1, cnf.n + 1))
    click.echo(f"assignment: {text}")
    if sat.assignment_satisfies(cnf, beta):
        click.echo("satisfies: yes")
        sys.exit(0)
    click.echo("satisfies: no")
    sys.exit(1)


@cli.group("gen")
def gen_group():
    """Seeded generators."""


@gen_group.command("tree")
@click.option("--leaves", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", type=click.Path(), default=None)
def gen_tree(leaves, seed, output):
    labels = [f"t{i}" for i in range(1, leaves + 1)]
    tree = generate.random_tree(labels, seed)
    _write(output, formats.serialize_newick_tree(tree) + "\n")
    sys.exit(0)


@gen_group.command("net")
@click.option("--leaves", type=int, required=True)
@click.option("--r", "target_r", type=int, default=1)
@click.option("--q", "target_q", type=int, default=1)
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", type=click.Path(), default=None)
def gen_net(leaves, target_r, target_q, seed, output):
    net = generate.random_q_cuttable(
        generate.GenConfig(seed=seed, leaf_count=leaves, target_r=target_r, target_q=target_q))
    _write(output, formats.serialize_upn(net))
    sys.exit(0)


@gen_group.command("cnf")
@click.option("--vars", "n", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", type=click.Path(), default=None)
def gen_cnf(n, seed, output):
    cnf = _guard(generate.random_2balanced_cnf, n, seed)
    _write(output, formats.serialize_dimacs_cnf(cnf))
    sys.exit(0)


def main():
    cli()


if __name__ == "__main__":
    main()
