"""Command-line interface wiring simulation, graph building, eigen analysis,
mode matching, community detection and rendering into reproducible pipelines."""

import argparse
import os
import sys

import numpy as np

from . import chladni, dem, eigen, network, particles, potts, render, spectral
from .partition import write_partition


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="granet",
        description="Granular packing simulation and contact-network analysis.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("simulate", help="run a centripetal DEM packing")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--n", type=int, help="particle count override")
    p.add_argument("--max-steps", type=int, help="step cap override")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output particle file")
    p.add_argument("--series", help="optional CSV of step, ke, packing fraction")

    p = sub.add_parser("graph", help="build the contact network of a packing")
    p.add_argument("--input", required=True, help="particle file")
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--adjacency-image", help="PGM output path")
    p.add_argument("--edge-list", help="edge list output path")

    p = sub.add_parser("eigen", help="principal / top-k eigenpairs and binning")
    p.add_argument("--input", required=True, help="particle file")
    p.add_argument("--top", type=int, default=1)
    p.add_argument("--tolerance", type=float, default=1e-3, help="contact tolerance")
    p.add_argument("--tol", type=float, default=1e-10, help="eigen solver tolerance")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", help="write <prefix>_spectrum.txt and vector dumps")
    p.add_argument("--render", help="SVG of the principal eigenvector coloring")

    p = sub.add_parser("chladni", help="match eigenvectors against plate modes")
    p.add_argument("--input", required=True, help="particle file")
    p.add_argument("--top", type=int, default=12)
    p.add_argument("--max-index", type=int, default=4)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="mode report output path")

    p = sub.add_parser("spectral", help="recursive spectral bisection")
    p.add_argument("--input", required=True, help="particle file")
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--max-depth", type=int, default=32)
    p.add_argument("--out", help="partition dump path")

    p = sub.add_parser("community", help="Potts-modularity community detection")
    p.add_argument("--input", required=True, help="particle file")
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--xc", type=float, help="cutoff distance in meters")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--brute-force", action="store_true", help="exhaustive search (n <= 12)")
    p.add_argument("--out", help="partition dump path")

    p = sub.add_parser("render", help="re-render saved scalars onto a packing")
    p.add_argument("--input", required=True, help="particle file")
    p.add_argument("--scalar", help="`node_id value ...` dump (eigen format)")
    p.add_argument("--partition", help="`node_id community_id` dump")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--out", required=True, help="SVG output path")

    p = sub.add_parser("pipeline", help="simulate, graph, eigen and community in one run")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--n", type=int, help="particle count override")
    p.add_argument("--max-steps", type=int, help="step cap override")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--outdir", required=True)
    p.add_argument("--top", type=int, default=4)
    p.add_argument("--xc", type=float)
    p.add_argument("--restarts", type=int, default=8)
    return parser


def _load_config(args):
    config = dem.SimConfig.from_file(args.config) if args.config else dem.SimConfig()
    if getattr(args, "n", None):
        config = dem.SimConfig(**{**_config_dict(config), "n": args.n, "box": 0.0})
    if getattr(args, "max_steps", None):
        config = dem.SimConfig(**{**_config_dict(config), "max_steps": args.max_steps})
    return config


def _config_dict(config):
    from dataclasses import fields

    return {f.name: getattr(config, f.name) for f in fields(config)}


def _cmd_simulate(args):
    config = _load_config(args)
    pset, series = dem.run(config, seed=args.seed)
    particles.write_particles(pset, args.out)
    if args.series:
        dem.write_series(args.series, series)
    print(f"simulated {len(pset)} particles over {series[-1][0] + 1 if series else 0} recorded steps")
    print(f"final packing fraction {series[-1][2]:.4f}" if series else "no samples recorded")
    return 0


def _cmd_graph(args):
    pset = particles.load_particles(args.input)
    net = network.build_adjacency(pset, args.tolerance)
    print(f"nodes {net.n} edges {net.m} average degree {network.average_degree(net):.6g}")
    hist = network.coordination_histogram(net)
    for degree in sorted(hist):
        print(f"degree {degree}: {hist[degree]}")
    if args.adjacency_image:
        network.export_adjacency_image(net, args.adjacency_image)
    if args.edge_list:
        network.export_edge_list(net, args.edge_list)
    return 0


def _cmd_eigen(args):
    pset = particles.load_particles(args.input)
    net = network.build_adjacency(pset, args.tolerance)
    eset = eigen.top_k_eigenpairs(net, args.top, tol=args.tol, seed=args.seed)
    for rank, pair in enumerate(eset.pairs, start=1):
        print(f"lambda_{rank} = {pair.value:.6g}")
    if args.out_prefix:
        eigen.write_spectrum(f"{args.out_prefix}_spectrum.txt", eset)
        for rank, pair in enumerate(eset.pairs, start=1):
            eigen.write_eigenvector(
                f"{args.out_prefix}_vector_{rank}.txt", pair.vector, nbins=args.bins
            )
    if args.render:
        render.render_particles(pset, eset[0].vector, args.render, nbins=args.bins)
    return 0


def _cmd_chladni(args):
    pset = particles.load_particles(args.input)
    net = network.build_adjacency(pset, args.tolerance)
    eset = eigen.top_k_eigenpairs(net, min(args.top, net.n), seed=args.seed)
    matches = []
    for rank, pair in enumerate(eset.pairs, start=1):
        match = chladni.match_mode(pair.vector, net, max_index=args.max_index)
        matches.append(match)
        md = match.mode
        print(
            f"lambda_{rank}: mode ({md.m},{md.n})+({md.p},{md.q}) "
            f"C={md.c:g} D={md.d:g} score {match.score:.4f}"
        )
    if args.report:
        chladni.write_mode_report(args.report, matches)
    return 0


def _cmd_spectral(args):
    pset = particles.load_particles(args.input)
    net = network.build_adjacency(pset, args.tolerance)
    part = spectral.spectral_partition(net, max_depth=args.max_depth)
    print(f"communities {part.n_communities} newman modularity {part.score:.6g}")
    if args.out:
        write_partition(args.out, part)
    return 0


def _cmd_community(args):
    pset = particles.load_particles(args.input)
    net = network.build_adjacency(pset, args.tolerance)
    xc = args.xc if args.xc is not None else potts.default_cutoff(pset)
    params = potts.PottsParams(xc)
    if args.brute_force:
        part = potts.brute_force_best_partition(net, params)
    else:
        part = potts.maximize_modularity(net, params, restarts=args.restarts, seed=args.seed)
    groups = " ".join("{" + ",".join(map(str, c)) + "}" for c in part.communities())
    print(f"communities {part.n_communities}: {groups}")
    print(f"potts modularity Q = {part.score:.6g}")
    if args.out:
        write_partition(args.out, part)
    return 0


def _cmd_render(args):
    pset = particles.load_particles(args.input)
    if bool(args.scalar) == bool(args.partition):
        raise ValueError("provide exactly one of --scalar or --partition")
    if args.scalar:
        values = {}
        with open(args.scalar, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                fields = line.split()
                values[int(fields[0])] = float(fields[1])
        scalar = np.array([values[i] for i in range(len(pset))])
        render.render_particles(pset, scalar, args.out, nbins=args.bins)
    else:
        from .partition import load_partition

        part = load_partition(args.partition)
        render.render_particles(pset, part.assignment, args.out, categorical=True)
    return 0


def _cmd_pipeline(args):
    os.makedirs(args.outdir, exist_ok=True)
    path = lambda name: os.path.join(args.outdir, name)
    config = _load_config(args)
    config.to_file(path("config.txt"))
    pset, series = dem.run(config, seed=args.seed)
    particles.write_particles(pset, path("particles.txt"))
    dem.write_series(path("series.csv"), series)
    net = network.build_adjacency(pset)
    network.export_adjacency_image(net, path("adjacency.pgm"))
    network.export_edge_list(net, path("edges.txt"))
    eset = eigen.top_k_eigenpairs(net, min(args.top, net.n), seed=args.seed)
    eigen.write_spectrum(path("spectrum.txt"), eset)
    for rank, pair in enumerate(eset.pairs, start=1):
        eigen.write_eigenvector(path(f"vector_{rank}.txt"), pair.vector)
    render.render_particles(pset, eset[0].vector, path("principal.svg"))
    render.render_histogram(eigen.bin_vector(eset[0].vector), path("principal_hist.svg"))
    xc = args.xc if args.xc is not None else potts.default_cutoff(pset)
    part = potts.maximize_modularity(
        net, potts.PottsParams(xc), restarts=args.restarts, seed=args.seed
    )
    write_partition(path("communities.txt"), part)
    render.render_particles(pset, part.assignment, path("communities.svg"), categorical=True)
    print(f"pipeline complete: {net.n} nodes, {net.m} edges, "
          f"{part.n_communities} communities (Q={part.score:.6g}) in {args.outdir}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "graph": _cmd_graph,
    "eigen": _cmd_eigen,
    "chladni": _cmd_chladni,
    "spectral": _cmd_spectral,
    "community": _cmd_community,
    "render": _cmd_render,
    "pipeline": _cmd_pipeline,
}


def main(argv=None):
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:  # runtime failure, not usage
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
