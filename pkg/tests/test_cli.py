"""CLI dispatch and SVG export tests.

The CLI is exercised through dispatch() with temp-file corpora so exit
codes and stdout/stderr behavior are tested without subprocess overhead.
SVG output is checked by parsing the documents back and recomputing the
geometry independently.
"""
from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from itertools import combinations

import pytest

from learntags import (
    FeaturePoint,
    PipelineConfig,
    RatingRecord,
    export_parcoords,
    export_values,
    extreme_pairs,
    generate_profiles,
    load_store,
    parse_profiles,
    render_profiles,
    render_ratings,
)
from learntags.cli import _build_parser, _config_from, dispatch

SVG_NS = "{http://www.w3.org/2000/svg}"


def write_corpus(tmp_path, n_raters=12, seed=3):
    """Ratings + profiles CSVs with one taggable resource.

    b1 gets n_raters high ratings, b2 only two (below min_subset), and
    b3 only low ratings (empty subset).
    """
    ids = [f"u{i:02d}" for i in range(n_raters)]
    records = [RatingRecord(lid, "b1", 8) for lid in ids]
    records += [RatingRecord(lid, "b2", 9) for lid in ids[:2]]
    records += [RatingRecord(lid, "b3", 3) for lid in ids[:5]]
    ratings_path = tmp_path / "ratings.csv"
    ratings_path.write_text(render_ratings(records), encoding="latin-1")
    profiles_path = tmp_path / "profiles.csv"
    profiles_path.write_text(render_profiles(generate_profiles(ids, seed)),
                             encoding="utf-8")
    return str(ratings_path), str(profiles_path)


class TestExtremePairs:
    def test_mixed_values(self):
        values = {1: 0.0, 2: 10.0, 3: 4.0, 4: 5.0, 5: 4.5}
        nearest, farthest = extreme_pairs(values)
        assert nearest == [(3, 5), (4, 5)]
        assert farthest == [(1, 2)]

    def test_all_equal_values_tie_everywhere(self):
        values = {p: 2.5 for p in range(1, 6)}
        nearest, farthest = extreme_pairs(values)
        every = sorted(combinations(range(1, 6), 2))
        assert nearest == every
        assert farthest == every

    def test_two_parameters(self):
        nearest, farthest = extreme_pairs({1: 1.0, 2: 3.0})
        assert nearest == [(1, 2)]
        assert farthest == [(1, 2)]

    def test_single_parameter_rejected(self):
        with pytest.raises(ValueError):
            extreme_pairs({1: 1.0})

    def test_matches_exhaustive_scan(self):
        import numpy as np

        rng = np.random.default_rng(11)
        for _ in range(50):
            values = {p: float(rng.integers(0, 8)) for p in range(1, 6)}
            nearest, farthest = extreme_pairs(values)
            dists = {(a, b): abs(values[a] - values[b])
                     for a, b in combinations(sorted(values), 2)}
            assert set(nearest) == {p for p, d in dists.items()
                                    if d == min(dists.values())}
            assert set(farthest) == {p for p, d in dists.items()
                                     if d == max(dists.values())}


class TestExportValues:
    def test_annotation_lines(self, tmp_path):
        values = {1: 0.0, 2: 10.0, 3: 4.0, 4: 5.0, 5: 4.5}
        doc = export_values(values, "strategy", tmp_path / "v.svg")
        texts = [t.text for t in ET.fromstring(doc).iter(f"{SVG_NS}text")]
        assert "nearest: (3,5) (4,5)" in texts
        assert "farthest: (1,2)" in texts
        assert "strategy" in texts

    def test_marker_positions_follow_linear_scale(self, tmp_path):
        values = {1: 0.0, 2: 10.0, 3: 4.0, 4: 5.0, 5: 4.5}
        doc = export_values(values, "strategy", tmp_path / "v.svg")
        root = ET.fromstring(doc)
        xs = [float(c.get("cx")) for c in root.iter(f"{SVG_NS}circle")]
        expected = [50.0 + values[p] / 10.0 * 540.0 for p in sorted(values)]
        assert xs == pytest.approx(expected, abs=0.005)

    def test_equal_values_collapse_to_midpoint(self, tmp_path):
        doc = export_values({p: 7.0 for p in range(1, 6)}, "presentation",
                            tmp_path / "v.svg")
        root = ET.fromstring(doc)
        assert all(c.get("cx") == "320.00" for c in root.iter(f"{SVG_NS}circle"))

    def test_returns_written_document(self, tmp_path):
        path = tmp_path / "v.svg"
        doc = export_values({1: 1.0, 2: 2.0, 3: 3.0, 4: 4.0, 5: 5.0},
                            "strategy", path)
        assert path.read_text(encoding="utf-8") == doc


class TestExportParcoords:
    def test_single_point_sits_at_axis_bottoms(self, tmp_path):
        # min == max on every axis, so the scaled value is pinned to 0
        points = [FeaturePoint("u1", (2.0, 5.0, 1.5, 3.5, 25.0))]
        doc = export_parcoords(points, {"u1": 0}, tmp_path / "p.svg")
        polys = list(ET.fromstring(doc).iter(f"{SVG_NS}polyline"))
        assert len(polys) == 1
        vertices = polys[0].get("points").split()
        assert vertices == [f"{60.0 + i * 130.0:.2f},350.00" for i in range(5)]

    def test_vertices_follow_min_max_scaling(self, tmp_path):
        points = [
            FeaturePoint("u1", (1.0, 4.0, 0.0, 2.0, 10.0)),
            FeaturePoint("u2", (3.0, 4.0, 1.0, 6.0, 40.0)),
            FeaturePoint("u3", (2.0, 4.0, 0.5, 4.0, 25.0)),
        ]
        doc = export_parcoords(points, {"u1": 0, "u2": 1, "u3": 0},
                               tmp_path / "p.svg")
        polys = list(ET.fromstring(doc).iter(f"{SVG_NS}polyline"))
        assert len(polys) == 3
        mins = [min(p.coords[i] for p in points) for i in range(5)]
        maxs = [max(p.coords[i] for p in points) for i in range(5)]
        for poly, point in zip(polys, points):  # polylines sorted by id
            for i, vertex in enumerate(poly.get("points").split()):
                x, y = map(float, vertex.split(","))
                span = maxs[i] - mins[i]
                scaled = 0.0 if span == 0.0 else (point.coords[i] - mins[i]) / span
                assert x == pytest.approx(60.0 + i * 130.0, abs=0.005)
                assert y == pytest.approx(350.0 - scaled * 310.0, abs=0.005)

    def test_colors_track_cluster_assignment(self, tmp_path):
        points = [FeaturePoint(f"u{i}", (float(i), 0.0, 0.0, 0.0, 0.0))
                  for i in range(3)]
        assignment = {"u0": 0, "u1": 1, "u2": 0}
        doc = export_parcoords(points, assignment, tmp_path / "p.svg")
        polys = list(ET.fromstring(doc).iter(f"{SVG_NS}polyline"))
        strokes = [p.get("stroke") for p in polys]
        assert strokes[0] == strokes[2]
        assert strokes[0] != strokes[1]

    def test_missing_assignment_rejected(self, tmp_path):
        points = [FeaturePoint("u1", (0.0,) * 5)]
        with pytest.raises(KeyError, match="u1"):
            export_parcoords(points, {}, tmp_path / "p.svg")

    def test_empty_points_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="no points"):
            export_parcoords([], {}, tmp_path / "p.svg")


class TestParserDefaults:
    def test_config_flags_default_to_pipeline_config(self):
        args = _build_parser().parse_args(["tag"])
        assert _config_from(args) == PipelineConfig()

    def test_help_exits_zero(self, capsys):
        assert dispatch(["--help"]) == 0
        assert "ingest-check" in capsys.readouterr().out

    def test_usage_errors_exit_one(self):
        assert dispatch([]) == 1
        assert dispatch(["no-such-command"]) == 1
        assert dispatch(["tag", "--no-such-flag"]) == 1


class TestIngestCheck:
    def test_clean_inputs(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        assert dispatch(["ingest-check", "--ratings", ratings,
                         "--profiles", profiles]) == 0
        out = capsys.readouterr().out
        assert "ratings: 19 kept, 0 zero-rated dropped, 0 malformed" in out
        assert "profiles: 12 kept, 0 rejected, 0 duplicates" in out

    def test_malformed_rows_flagged(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text('"User-ID";"ISBN";"Book-Rating"\n"u1";"b1"\n',
                        encoding="latin-1")
        assert dispatch(["ingest-check", "--ratings", str(path)]) == 1
        assert "1 malformed" in capsys.readouterr().out

    def test_no_inputs_is_a_usage_problem(self, capsys):
        assert dispatch(["ingest-check"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exits_two(self, tmp_path, capsys):
        missing = str(tmp_path / "absent.csv")
        assert dispatch(["ingest-check", "--ratings", missing]) == 2
        assert missing in capsys.readouterr().err


class TestSynthProfiles:
    def test_covers_every_rater(self, tmp_path, capsys):
        ratings, _ = write_corpus(tmp_path)
        out = tmp_path / "synth.csv"
        assert dispatch(["synth-profiles", "--ratings", ratings,
                         "--synth-seed", "5", "--out", str(out)]) == 0
        result = parse_profiles(out.read_text(encoding="utf-8"))
        assert not result.rejected
        assert {p.learner_id for p in result.profiles} == {
            f"u{i:02d}" for i in range(12)
        }

    def test_existing_profiles_excluded(self, tmp_path):
        ratings, profiles = write_corpus(tmp_path)
        out = tmp_path / "synth.csv"
        assert dispatch(["synth-profiles", "--ratings", ratings,
                         "--profiles", profiles, "--out", str(out)]) == 0
        assert parse_profiles(out.read_text(encoding="utf-8")).profiles == []

    def test_requires_ratings(self, capsys):
        assert dispatch(["synth-profiles"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_deterministic(self, tmp_path, capsys):
        ratings, _ = write_corpus(tmp_path)
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        dispatch(["synth-profiles", "--ratings", ratings,
                  "--synth-seed", "5", "--out", str(first)])
        dispatch(["synth-profiles", "--ratings", ratings,
                  "--synth-seed", "5", "--out", str(second)])
        assert first.read_bytes() == second.read_bytes()


class TestQuantify:
    def test_report_is_sorted_json(self, tmp_path):
        ratings, profiles = write_corpus(tmp_path)
        out = tmp_path / "quant.json"
        assert dispatch(["quantify", "--ratings", ratings,
                         "--profiles", profiles, "--out", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        report = json.loads(text)
        assert set(report) == {"presentation", "strategy"}
        assert sorted(map(int, report["strategy"]["values"])) == [1, 2, 3, 4, 5]
        assert text == json.dumps(report, indent=2, sort_keys=True) + "\n"

    def test_missing_profiles_and_synth_seed(self, tmp_path, capsys):
        ratings, _ = write_corpus(tmp_path)
        assert dispatch(["quantify", "--ratings", ratings]) == 1
        assert "no profiles" in capsys.readouterr().err


class TestTag:
    def test_writes_store_and_report(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        out = tmp_path / "store.json"
        assert dispatch(["tag", "--ratings", ratings, "--profiles", profiles,
                         "--out", str(out)]) == 0
        report = capsys.readouterr().out
        assert report.startswith("b1\t[")
        store = load_store(str(out))
        assert store["b1"].tags and store["b1"].skipped is None
        assert store["b2"].skipped is not None
        assert "b3" not in store

    def test_store_bytes_deterministic(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            assert dispatch(["tag", "--ratings", ratings, "--profiles",
                             profiles, "--seed", "7", "--out", str(out)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_trace_sweeps_down_to_one(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        trace = tmp_path / "trace.tsv"
        assert dispatch(["tag", "--ratings", ratings, "--profiles", profiles,
                         "--trace", str(trace)]) == 0
        rows = [line.split("\t")
                for line in trace.read_text(encoding="utf-8").splitlines()]
        assert [r[0] for r in rows] == ["b1"] * len(rows)
        assert [int(r[1]) for r in rows] == list(range(len(rows), 0, -1))

    def test_synth_seed_fills_profile_gaps(self, tmp_path, capsys):
        ratings, _ = write_corpus(tmp_path)
        out = tmp_path / "store.json"
        assert dispatch(["tag", "--ratings", ratings, "--synth-seed", "4",
                         "--out", str(out)]) == 0
        assert "b1" in load_store(str(out))


class TestMatch:
    def test_ranks_against_store(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        store = tmp_path / "store.json"
        dispatch(["tag", "--ratings", ratings, "--profiles", profiles,
                  "--out", str(store)])
        capsys.readouterr()
        assert dispatch(["match", "--ratings", ratings, "--profiles", profiles,
                         "--store", str(store), "--learner", "u00"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines
        for line in lines:
            rid, score = line.split("\t")
            assert rid == "b1"
            assert re.fullmatch(r"[01]\.\d{3}", score)

    def test_unknown_learner(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        store = tmp_path / "store.json"
        dispatch(["tag", "--ratings", ratings, "--profiles", profiles,
                  "--out", str(store)])
        capsys.readouterr()
        assert dispatch(["match", "--ratings", ratings, "--profiles", profiles,
                         "--store", str(store), "--learner", "ghost"]) == 1
        assert "ghost" in capsys.readouterr().err

    def test_store_flag_required(self, capsys):
        assert dispatch(["match", "--learner", "u00"]) == 1


class TestExportCommands:
    def test_export_values_roundtrip(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        out = tmp_path / "values.svg"
        assert dispatch(["export-values", "--ratings", ratings,
                         "--profiles", profiles, "--attribute", "presentation",
                         "--out", str(out)]) == 0
        root = ET.fromstring(out.read_text(encoding="utf-8"))
        assert root.tag == f"{SVG_NS}svg"
        assert len(list(root.iter(f"{SVG_NS}circle"))) == 5

    def test_export_values_bytes_deterministic(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        first, second = tmp_path / "a.svg", tmp_path / "b.svg"
        for out in (first, second):
            assert dispatch(["export-values", "--ratings", ratings,
                             "--profiles", profiles, "--seed", "9",
                             "--out", str(out)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_bad_attribute_exits_one(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        assert dispatch(["export-values", "--ratings", ratings,
                         "--profiles", profiles, "--attribute", "hours",
                         "--out", str(tmp_path / "x.svg")]) == 1

    def test_export_parcoords_one_polyline_per_member(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        out = tmp_path / "par.svg"
        assert dispatch(["export-parcoords", "--ratings", ratings,
                         "--profiles", profiles, "--resource", "b1",
                         "--out", str(out)]) == 0
        root = ET.fromstring(out.read_text(encoding="utf-8"))
        assert len(list(root.iter(f"{SVG_NS}polyline"))) == 12
        assert len(list(root.iter(f"{SVG_NS}line"))) == 5

    def test_export_parcoords_unknown_resource(self, tmp_path, capsys):
        ratings, profiles = write_corpus(tmp_path)
        assert dispatch(["export-parcoords", "--ratings", ratings,
                         "--profiles", profiles, "--resource", "nope",
                         "--out", str(tmp_path / "x.svg")]) == 1
        assert "nope" in capsys.readouterr().err
