import json
import os
import subprocess
import sys

from hh1lab import cli


def run_cli(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_blocks_s3_at_2(capsys):
    code, doc = run_cli(capsys, ["blocks", "--group", "S3", "--prime", "2"])
    assert code == 0
    assert [(b["dim"], b["defect"]) for b in doc["blocks"]] == [(2, 1), (4, 0)]
    assert doc["blocks"][0]["principal"] is True


def test_blocks_s3_at_5_semisimple(capsys):
    code, doc = run_cli(capsys, ["blocks", "--group", "S3", "--prime", "5"])
    assert code == 0
    assert len(doc["blocks"]) == 3
    assert all(b["defect"] == 0 for b in doc["blocks"])


def test_blocks_a4_at_2(capsys):
    code, doc = run_cli(capsys, ["blocks", "--group", "A4", "--prime", "2"])
    assert code == 0
    assert len(doc["blocks"]) == 1
    assert doc["blocks"][0]["defect"] == 2


def test_hh1_v4_both_methods_agree(capsys):
    code, doc = run_cli(capsys, ["hh1", "--group", "V4", "--prime", "2",
                                 "--method", "both"])
    assert code == 0
    assert doc["totals"]["hh1_total"] == 8
    assert doc["totals"]["oracle_total"] == 8
    assert doc["consistency"]["oracle_equals_solver"] is True


def test_hh1_s3_at_3_verdict(capsys):
    code, doc = run_cli(capsys, ["hh1", "--group", "S3", "--prime", "3"])
    assert code == 0
    assert [b["hh1_dim"] for b in doc["blocks"]] == [1]
    assert doc["verdicts"]["all_positive_defect_nonvanishing"] is True


def test_hh1_oracle_only(capsys):
    code, doc = run_cli(capsys, ["hh1", "--group", "D8", "--prime", "2",
                                 "--method", "oracle"])
    assert code == 0
    assert doc["totals"]["hh1_total"] == 9
    assert doc["blocks"] == []


def test_happel_group_as_category(capsys):
    code, doc = run_cli(capsys, ["happel", "--group-as-category", "C2",
                                 "--prime", "2", "--degrees", "4"])
    assert code == 0
    assert doc["verdict"]["hh_dims"] == [2, 2, 2, 2, 2]
    assert doc["verdict"]["gldim"] == "infinite"


def test_happel_transporter(capsys):
    code, doc = run_cli(capsys, ["happel", "--transporter", "C2",
                                 "--points", "3", "--prime", "2",
                                 "--degrees", "3"])
    assert code == 0
    assert doc["verdict"]["frobenius_symmetric"] is True
    assert all(r["injective"] for r in doc["restriction"])


def test_happel_category_file(capsys):
    code, doc = run_cli(capsys, [
        "happel", "--category", "src/hh1lab/data/categories/poset_a_to_b.cat",
        "--prime", "2", "--degrees", "2"])
    assert doc["verdict"]["frobenius_certified"] is False
    assert doc["verdict"]["gldim"] == "unknown"


def test_tensor_command(capsys):
    code, doc = run_cli(capsys, ["tensor", "--group", "S3", "--group-b", "S3",
                                 "--prime", "2"])
    assert code == 0
    assert doc["blocks"]["product_dims"] == [4, 8, 8, 16]
    assert doc["blocks"]["pairwise_matches_product"] is True
    assert doc["kuenneth"]["matches"] is True


def test_unknown_group_exits_nonzero(capsys):
    code = cli.main(["blocks", "--group", "NoSuchGroup", "--prime", "2"])
    assert code == 2


def test_missing_stretch_file_is_a_clean_error(capsys):
    # J2 is in the manifest but its generator file is user-supplied
    if cli.CorpusManifest.packaged().entry("J2") is None:
        return
    try:
        cli.resolve_group("J2", allow_large=True)
    except cli.HH1LabError as exc:
        assert "J2" in str(exc) or "packaged" in str(exc)
    else:
        # a supplied J2.grp makes this path succeed; nothing to assert
        pass


def test_report_marks_missing_files_unavailable(tmp_path, capsys):
    import json as _json
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(_json.dumps({"entries": [
        {"name": "Ghost", "file": "ghost.grp", "order": 1, "notes": "",
         "stretch": False}]}))
    code, doc = run_cli(capsys, ["report", "--corpus", str(manifest_path),
                                 "--primes", "2"])
    assert doc["entries"][0]["status"] == "unavailable"


def test_blocks_deterministic_output(capsys):
    _, doc1 = run_cli(capsys, ["blocks", "--group", "S4", "--prime", "3"])
    _, doc2 = run_cli(capsys, ["blocks", "--group", "S4", "--prime", "3"])
    assert cli.render_document(doc1) == cli.render_document(doc2)


def test_report_small_corpus_caches(tmp_path, capsys, monkeypatch):
    # a reduced corpus manifest keeps this test quick
    from importlib import resources
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    entries = []
    for name in ["C2", "C3", "S3"]:
        data = resources.files("hh1lab").joinpath(f"data/groups/{name}.grp")
        (corpus_dir / f"{name}.grp").write_bytes(data.read_bytes())
        order = {"C2": 2, "C3": 3, "S3": 6}[name]
        entries.append({"name": name, "file": f"{name}.grp",
                        "order": order, "notes": "", "stretch": False})
    manifest_path = corpus_dir / "manifest.json"
    manifest_path.write_text(json.dumps({"entries": entries}))

    cli.CACHE_STATS.update(hits=0, misses=0)
    code1, doc1 = run_cli(capsys, ["report", "--corpus", str(manifest_path),
                                   "--primes", "2,3"])
    assert code1 == 0
    misses_first = cli.CACHE_STATS["misses"]
    assert misses_first == 6 and cli.CACHE_STATS["hits"] == 0
    assert doc1["counterexamples"] == []

    code2, doc2 = run_cli(capsys, ["report", "--corpus", str(manifest_path),
                                   "--primes", "2,3"])
    assert code2 == 0
    assert cli.CACHE_STATS["hits"] == 6
    assert cli.CACHE_STATS["misses"] == misses_first  # no recompute
    assert cli.render_document(doc1) == cli.render_document(doc2)


def test_report_jobs_deterministic(tmp_path, capsys):
    import json as _json
    from importlib import resources
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    entries = []
    for name, order in [("C2", 2), ("C3", 3), ("V4", 4), ("S3", 6)]:
        data = resources.files("hh1lab").joinpath(f"data/groups/{name}.grp")
        (corpus_dir / f"{name}.grp").write_bytes(data.read_bytes())
        entries.append({"name": name, "file": f"{name}.grp", "order": order,
                        "notes": "", "stretch": False})
    manifest_path = corpus_dir / "manifest.json"
    manifest_path.write_text(_json.dumps({"entries": entries}))
    _, doc1 = run_cli(capsys, ["report", "--corpus", str(manifest_path),
                               "--primes", "2", "--jobs", "1"])
    _, doc2 = run_cli(capsys, ["report", "--corpus", str(manifest_path),
                               "--primes", "2", "--jobs", "3"])
    assert cli.render_document(doc1) == cli.render_document(doc2)


def test_report_empty_manifest(tmp_path, capsys):
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps({"entries": []}))
    code, doc = run_cli(capsys, ["report", "--corpus", str(manifest_path)])
    assert code == 0
    assert doc["entries"] == []


def test_report_counterexample_exit_code(tmp_path, capsys, monkeypatch):
    # forge a document with a counterexample to check the exit-code contract
    fake_doc = {
        "schema_version": 1, "kind": "hh1",
        "inputs": {}, "blocks": [],
        "totals": {"hh1_total": 0, "oracle_total": 0},
        "verdicts": {"counterexamples": [0],
                     "all_positive_defect_nonvanishing": False},
        "consistency": {}, "timings": {"seconds": "0.000"},
    }
    monkeypatch.setattr(cli, "hh1_doc_cached",
                        lambda *a, **k: fake_doc)
    code, doc = run_cli(capsys, ["report", "--primes", "2"])
    assert code == 1
    assert doc["counterexamples"]


def test_out_flag_writes_file(tmp_path, capsys):
    out = tmp_path / "doc.json"
    code, doc = run_cli(capsys, ["blocks", "--group", "C2", "--prime", "2",
                                 "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text()) == doc


def test_module_entry_point():
    env = dict(os.environ, HH1LAB_CACHE="/tmp/hh1lab-test-cache")
    proc = subprocess.run(
        [sys.executable, "-m", "hh1lab", "blocks", "--group", "C2",
         "--prime", "2"],
        capture_output=True, text=True, env=env, cwd=os.getcwd())
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["kind"] == "blocks"
