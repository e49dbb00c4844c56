# Dev-only fixture inspector (not part of the package).
import sys
from morsequiver import fixtures
from morsequiver.scalarfield import classify_vertices, vertex_clusters
from morsequiver.complexes import homology_of, euler_check
from morsequiver.fields import FieldTag


def inspect(name, **params):
    sf = fixtures.build(name, **params)
    print(f"== {name} {params}")
    print("counts:", sf.complex.counts(), "chi:", sf.complex.euler_characteristic())
    try:
        rep = classify_vertices(sf)
    except Exception as e:
        print("CLASSIFY FAIL:", e)
        # per-cluster detail
        from morsequiver.scalarfield import _classify_cluster
        for cl in vertex_clusters(sf):
            try:
                r = _classify_cluster(sf, cl)
                if r is not None:
                    print("  crit:", cl, sf.values[cl[0]], r)
            except Exception as ee:
                print("  cluster", cl, "error:", ee)
        return None
    for c in rep.components:
        print(f"  C{c.id}: {c.kind.value}(m={c.multiplicity}) value={c.value} "
              f"verts={c.vertices}")
    print("  homology:", homology_of(sf.complex.full_subcomplex(), FieldTag.F2))
    return rep


if __name__ == "__main__":
    names = sys.argv[1:] or ["sphere", "torus_standard", "torus_bott",
                             "torus_degenerate"]
    for n in names:
        inspect(n)
