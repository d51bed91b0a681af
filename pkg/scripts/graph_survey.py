"""Critical groups of every connected graph in the networkx atlas up to n vertices."""

import argparse
from collections import Counter

import networkx as nx

from neronpair.fgab import is_perfect
from neronpair.monodromy import (
    DegenerationGraph,
    critical_group,
    graph_to_datum,
    monodromy_pairing,
    spanning_tree_count,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vertices", type=int, default=6)
    ap.add_argument("--show", type=int, default=12, help="most common groups to list")
    args = ap.parse_args()

    shapes = Counter()
    bad = graphs = 0
    for g in nx.graph_atlas_g()[1:]:
        if g.number_of_nodes() > args.max_vertices or not nx.is_connected(g):
            continue
        graphs += 1
        G = DegenerationGraph(g.number_of_nodes(), tuple(g.edges()))
        phi = critical_group(G)
        ok = phi.order == spanning_tree_count(G) and is_perfect(monodromy_pairing(graph_to_datum(G)))
        bad += not ok
        shapes[str(phi)] += 1
    print(f"{graphs} connected graphs on <= {args.max_vertices} vertices, {bad} failures")
    for shape, n in shapes.most_common(args.show):
        print(f"  {n:4d}  {shape}")


if __name__ == "__main__":
    main()
