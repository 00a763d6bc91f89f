"""Exhaustive oracle values on tiny graphs: minrank, od over GF(2), chi_k of K(5, 2)."""

from __future__ import annotations

import networkx as nx

from gkcert.kneser import Graph
from gkcert.oracles import kneser_graph, minrank_exact, multichromatic_exact, od_exact_gf2


def main() -> None:
    print("graph        n  minrank2  minrank2(co)  od2")
    named = {
        "C5": nx.cycle_graph(5),
        "C4": nx.cycle_graph(4),
        "K4": nx.complete_graph(4),
        "P4": nx.path_graph(4),
        "star5": nx.star_graph(4),
    }
    for name, H in named.items():
        G = Graph(H.number_of_nodes(), H.edges())
        mr, mrc = minrank_exact(G, 2), minrank_exact(G.complement(), 2)
        print(f"{name:<10} {G.n:>3} {mr:>9} {mrc:>13} {od_exact_gf2(G):>4}")
    P = kneser_graph(5, 2)
    for k in (1, 2, 3):
        print(f"chi_{k}(K(5,2)) = {multichromatic_exact(P, k)}")


if __name__ == "__main__":
    main()
