"""Campaign execution, reports, the S4 example record, dumps, caches, CLI."""

import json

import pytest

from bruhatlab import (
    CacheError,
    CampaignSpec,
    PolyTable,
    build_system,
    cache_load,
    cache_store,
    compute_table,
    default_campaign_spec,
    parabolic_r_poly,
    reproduce_remark,
    run_campaign,
    table_dump,
)
from bruhatlab.cli import main
from bruhatlab.harness import (
    CHECK_NAMES,
    HarnessError,
    report_to_json,
    report_to_text,
)


SMALL = CampaignSpec(
    systems=({"type": "A3"},),
    checks=(
        "projection-monotone",
        "coset-slice",
        "w0-duality",
        "invariance-ordinary",
        "invariance-atoms",
        "lower-intervals",
        "coelementary-intervals",
        "remark-example",
    ),
)


@pytest.fixture(scope="module")
def small_report():
    return run_campaign(SMALL)


def test_small_campaign_is_clean(small_report):
    assert small_report["total_violations"] == 0
    assert small_report["conjecture_violations"] == 0
    checks_seen = {row["check"] for row in small_report["results"]}
    assert checks_seen == set(SMALL.checks)
    for row in small_report["results"]:
        assert row["violations"] == []
        assert row["examined"] + row["skipped"] >= 0


def test_examined_counts(small_report):
    by_check = {row["check"]: row for row in small_report["results"]}
    # 213 comparable pairs in S4; 448 (interval, J) objects with both
    # endpoints minimal coset representatives; 8 generator subsets
    assert by_check["w0-duality"]["examined"] == 213
    assert by_check["invariance-ordinary"]["examined"] == 213
    assert by_check["invariance-atoms"]["examined"] == 448
    assert by_check["projection-monotone"]["examined"] == 213 * 8
    assert by_check["remark-example"]["examined"] == 1


def test_report_serialization_is_deterministic(small_report):
    again = run_campaign(SMALL)
    assert report_to_json(small_report) == report_to_json(again)
    text = report_to_text(small_report)
    assert "total violations: 0" in text
    assert "POSSIBLE DISPROOF" not in text


def test_parallel_report_matches_serial(small_report):
    parallel = CampaignSpec(
        systems=SMALL.systems, checks=SMALL.checks, parallelism=3
    )
    assert report_to_json(run_campaign(parallel)) == report_to_json(small_report)


def test_interval_size_cap_is_reported():
    capped = CampaignSpec(
        systems=({"type": "A3"},),
        checks=("invariance-ordinary",),
        max_interval_size=8,
    )
    report = run_campaign(capped)
    row = next(r for r in report["results"] if r["check"] == "invariance-ordinary")
    assert row["skipped"] > 0
    assert row["examined"] + row["skipped"] == 213
    assert report["total_violations"] == 0


def test_height_cap_is_reported():
    report = run_campaign(
        CampaignSpec(
            systems=({"type": "A3"},),
            checks=("invariance-ordinary",),
            max_interval_height=2,
        )
    )
    row = report["results"][0]
    assert row["examined"] + row["skipped"] == 213
    assert all(True for _ in row)  # shape only; math covered elsewhere


def test_campaign_spec_validation():
    with pytest.raises(HarnessError):
        CampaignSpec(systems=(), checks=("w0-duality",))
    with pytest.raises(HarnessError):
        CampaignSpec(systems=({"type": "A3"},), checks=())
    with pytest.raises(HarnessError):
        CampaignSpec(systems=({"type": "A3"},), checks=("no-such-check",))
    with pytest.raises(HarnessError):
        CampaignSpec(systems=({"type": "A3"},), checks=("w0-duality",), parallelism=0)


def test_campaign_spec_round_trip():
    spec = default_campaign_spec()
    again = CampaignSpec.from_dict(spec.to_dict())
    assert again.systems == spec.systems
    assert again.checks == spec.checks
    assert set(spec.checks) == set(CHECK_NAMES)


def test_remark_record():
    record = reproduce_remark()
    assert record["p_J1_xminus1"] == [1]
    assert record["p_J2_xminus1"] == [1, 1]
    assert record["p_J1_xq"] == record["p_J2_xq"]
    assert record["atom_counts"] == [2, 2]
    assert record["interval_sizes"] == [8, 8]
    assert record["rank_vectors"] == [[1, 3, 3, 1], [1, 3, 3, 1]]
    assert record["atom_respecting_iso_found"] is True


def test_infinite_system_campaign():
    spec = CampaignSpec(
        systems=(
            {"type": "matrix", "matrix": [[1, 3, 3], [3, 1, 3], [3, 3, 1]], "length_cap": 4},
        ),
        checks=("projection-monotone", "w0-duality", "invariance-ordinary"),
    )
    report = run_campaign(spec)
    assert report["total_violations"] == 0
    duality = next(r for r in report["results"] if r["check"] == "w0-duality")
    assert duality["examined"] == 0
    assert any("not applicable" in n for n in duality["notes"])


def test_table_dump_and_cache_round_trip(tmp_path):
    sys = build_system("A3")
    path = tmp_path / "table.json"
    table = table_dump(sys, frozenset([0]), "-1", "R", str(path))
    loaded = cache_load(str(path), expected_system_checksum=sys.checksum())
    assert loaded == table
    # entries agree with direct recomputation
    e = sys.identity()
    v = sys.from_word([0, 1])
    expect = parabolic_r_poly(e, v, frozenset([0]), "-1")
    hit = [c for u, w, c in loaded.entries if u == "e" and w == "1,2"]
    assert hit == [expect.coeffs]


def test_table_dump_is_byte_deterministic(tmp_path):
    sys = build_system("B3")
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    table_dump(sys, frozenset([2]), "q", "P", str(p1))
    table_dump(sys, frozenset([2]), "q", "P", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_cache_rejects_corruption(tmp_path):
    sys = build_system("A3")
    path = tmp_path / "table.json"
    table_dump(sys, frozenset(), "q", "P", str(path))
    doc = json.loads(path.read_text())
    doc["payload"]["entries"][0][2] = [99]
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheError):
        cache_load(str(path))


def test_cache_rejects_wrong_schema_and_system(tmp_path):
    sys = build_system("A3")
    path = tmp_path / "table.json"
    table_dump(sys, frozenset(), "q", "R", str(path))
    with pytest.raises(CacheError):
        cache_load(str(path), expected_system_checksum=build_system("B3").checksum())
    doc = json.loads(path.read_text())
    doc["schema_version"] = 999
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheError):
        cache_load(str(path))
    path.write_text("{not json")
    with pytest.raises(CacheError):
        cache_load(str(path))


def test_compute_table_equals_dump(tmp_path):
    sys = build_system("A3")
    path = tmp_path / "t.json"
    assert table_dump(sys, frozenset([1]), "q", "R", str(path)) == compute_table(
        sys, frozenset([1]), "q", "R"
    )


# ---------------------------------------------------------------------------
# CLI


def test_cli_system_validate(capsys):
    assert main(["system", "validate", "B3"]) == 0
    out = capsys.readouterr().out
    assert "order: 48" in out
    assert "finite: True" in out


def test_cli_poly(capsys):
    assert main(["poly", "p", "A3", "e", "2,3,1,2"]) == 0
    out = capsys.readouterr().out
    assert "[1, 1]" in out
    assert main(["poly", "r", "A3", "e", "1,2", "--x", "-1"]) == 0
    assert "[1, -2, 1]" in capsys.readouterr().out


def test_cli_interval_and_iso(capsys):
    assert main(["interval", "show", "A3", "e", "1,2", "--graph"]) == 0
    out = capsys.readouterr().out
    assert "size 4" in out
    assert main(["iso", "A3", "e", "1,2,3", "e", "2,1,3"]) == 0
    assert main(["iso", "A3", "e", "1,2,1", "e", "1,2,3"]) == 1


def test_cli_remark(capsys):
    assert main(["remark"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["p_J2_xminus1"] == [1, 1]


def test_cli_verify_campaign_file(tmp_path, capsys):
    campaign = tmp_path / "campaign.json"
    campaign.write_text(
        json.dumps(
            {
                "systems": ["A3"],
                "checks": ["w0-duality", "remark-example"],
            }
        )
    )
    out_path = tmp_path / "report.json"
    assert main(["verify", str(campaign), "--output", str(out_path)]) == 0
    assert "total violations: 0" in capsys.readouterr().out
    report = json.loads(out_path.read_text())
    assert report["total_violations"] == 0


def test_cli_dump(tmp_path, capsys):
    path = tmp_path / "dump.json"
    assert main(["dump", "r", "A3", str(path), "--J", "1", "--x", "-1"]) == 0
    assert cache_load(str(path)).kind == "R"


def test_cli_error_paths(capsys):
    assert main(["system", "validate", "Z9"]) == 2
    assert main(["poly", "r", "A3", "0,1", "1"]) == 2
    assert main(["no-such-command"]) == 2
    capsys.readouterr()
