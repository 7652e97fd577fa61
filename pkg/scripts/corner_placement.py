"""Compare flow partition functions when the boundary stubs of a cut
vertex move to its other outer-face corner, and check that the moved
values agree with the signed determinant for the correspondingly
relisted boundary.

    python3 scripts/corner_placement.py
"""

from itertools import combinations

from planar_ising import corpus
from planar_ising.flows import z_aflow
from planar_ising.graph import PlanarGraph, alternative_corners, build_directed_modification
from planar_ising.linalg import build_N, det_exact


def main() -> None:
    base = corpus.path3()
    for g in corpus.two_colorings(base):
        # same path, boundary listed with the cut vertex at its other corner
        h = PlanarGraph(g.vertex_count, g.edges, g.rotations, tuple((v, g.color[v]) for v in (0, 2, 1)))
        colors = "".join(c for _, c in g.boundary)
        d = build_directed_modification(g)
        moved = build_directed_modification(g, corners=alternative_corners(g))
        z0, zm0 = z_aflow(d, (), ()), z_aflow(moved, (), ())
        print(f"coloring {colors}")
        print("  A      B      det N (listed)  Z ratio (listed corner)  Z ratio (moved corner)  det N (relisted)")
        w = g.boundary_vertices
        for k in (1, 2):
            for a in combinations(w, k):
                for b in combinations(w, k):
                    listed = det_exact(build_N(g, a, b))
                    r0 = z_aflow(d, a, b) / z0
                    rm = z_aflow(moved, a, b) / zm0
                    rel = det_exact(build_N(h, a, b))
                    flag = "" if r0 == rm else "  <- differs"
                    print(f"  {str(a):6s} {str(b):6s} {str(listed):15s} {str(r0):24s} {str(rm):23s} {rel}{flag}")


if __name__ == "__main__":
    main()
