#!/usr/bin/env python3
"""End-to-end smoke test for the scholnet_py extension module.

Builds the cdylib if needed, imports it straight from the cargo target
directory, and walks the whole pipeline on the bundled sample corpus.

Usage:
    cargo build -p scholnet-python --release   # or omit --release
    python3 python/smoke_test.py
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def import_extension():
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libscholnet_py.so", "scholnet_py.so", "libscholnet_py.dylib")
    ]
    library = next((c for c in candidates if c.exists()), None)
    if library is None:
        print("cdylib not found; building with cargo ...")
        subprocess.run(
            ["cargo", "build", "-p", "scholnet-python"], cwd=REPO, check=True
        )
        library = REPO / "target" / "debug" / "libscholnet_py.so"
    staging = Path(tempfile.mkdtemp(prefix="scholnet_py_"))
    shutil.copy2(library, staging / "scholnet_py.so")
    sys.path.insert(0, str(staging))
    import scholnet_py

    return scholnet_py


def main():
    sn = import_extension()
    print(f"scholnet_py {sn.__version__} loaded")

    records = REPO / "data" / "sample50.jsonl"
    manifest_path = REPO / "data" / "sample50.manifest.json"
    manifest = json.loads(manifest_path.read_text())

    # Knowledge graph construction and queries.
    graph = sn.KnowledgeGraph.from_records_file(records)
    print(graph)
    assert graph.count_of_kind("publication") == 50
    assert graph.entity_count() > 50
    edges = graph.co_author_edges()
    assert all(a < b for a, b, _ in edges)
    assert all(shared for _, _, shared in edges)
    papers = graph.papers_of("r-t0a", venues=manifest["focus_venue_series"])
    assert papers, "triad researcher should have focus papers"
    assert graph.export_triples().count("\n") == graph.entity_count() + graph.edge_count()

    # Manual graph building mirrors the record-driven path.
    tiny = sn.KnowledgeGraph()
    tiny.add_entity("r1", "researcher", "Ada")
    tiny.add_entity("p1", "publication", "A Study")
    tiny.add_entity("v1", "venue", "A Venue")
    tiny.add_edge("r1", "author", "p1")
    tiny.add_edge("p1", "published-in", "v1")
    tiny.add_year("p1", 2015)
    assert tiny.edge_count() == 3

    # Relatedness scoring and thresholding.
    sc = sn.compute_sc(graph, "simr", focus_venues=manifest["focus_venue_series"])
    assert len(sc) > 0
    assert sc.score("r-t0a", "r-t0b") == 0.5
    sc85 = sn.percentile_threshold(sc, 85)
    assert len(sc85) <= len(sc)
    assert sc85.threshold() is not None

    sim_venues = sn.compute_sc(graph, "simc")
    assert all(0.0 <= s <= 1.0 for _, _, s in sim_venues.triples())

    # Partitioning, metrics, prediction.
    communities = sn.partition_semantic(sc85)
    assert sum(len(c) for c in communities.communities()) == len(sc85.universe())
    kway = sn.partition_kway(sc85, k=4)
    assert len(kway) == 4
    quality = sn.evaluate(sc85, communities, method="semantic", percentile=85)
    for key in (
        "inv_conductance",
        "coverage",
        "scaled_modularity",
        "performance",
        "inv_norm_total_cut",
    ):
        assert 0.0 <= quality[key] <= 1.0, (key, quality[key])
    predictions = sn.predict_relations(graph, communities, sc85)
    weights = [w for _, _, w, _ in predictions]
    assert weights == sorted(weights, reverse=True)
    for left, right, _, community in predictions:
        assert communities.community_of(left) == community
        assert communities.community_of(right) == community

    # Temporal holdout on the benchmark corpus.
    report = sn.run_holdout(
        REPO / "data" / "synthetic200.jsonl",
        REPO / "data" / "synthetic200.manifest.json",
    )
    assert report["precision_at_k"] >= 3 * report["random_baseline"]
    print(
        "holdout: precision@10={precision_at_k} recall@10={recall_at_k:.3f} "
        "baseline={random_baseline:.5f}".format(**report)
    )

    # Planted communities are recovered exactly.
    planted_sc, truth = sn.generate_planted(60, 3, seed=7)
    found = sn.partition_semantic(planted_sc, merge_floor=0.5)
    assert sn.adjusted_rand(found, truth) == 1.0
    found_kway = sn.partition_kway(planted_sc, k=3)
    assert sn.adjusted_rand(found_kway, truth) == 1.0

    print("smoke test passed")


if __name__ == "__main__":
    main()
