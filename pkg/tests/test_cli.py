import csv
import io
import json
import subprocess
import sys

import pytest

from almostcap.bounds import asymptotic_bq
from almostcap.cli import fnv1a_64, main, read_config, scan_rows
from almostcap.errors import BadConfigError
from almostcap.field import PointSet, parse_set

from cli_cases import CASES, GOLDEN, golden_path, normalize, run


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, out = run(CASES[name])
    assert code == 0
    assert normalize(out) == golden_path(name).read_text(encoding="utf-8")


@pytest.mark.parametrize("name", sorted(CASES))
def test_threads_do_not_change_output(name):
    _, one = run(CASES[name], threads=1)
    _, eight = run(CASES[name], threads=8)
    a, b = normalize(one), normalize(eight)
    if CASES[name][0] == "search":
        a, b = json.loads(a)["results"]["size"], json.loads(b)["results"]["size"]
    assert a == b


def test_every_subcommand_has_a_golden_case():
    from almostcap.cli import COMMANDS

    assert {argv[0] for argv in CASES.values()} == set(COMMANDS)


def test_fnv1a_reference_values():
    assert fnv1a_64(b"") == 0xCBF29CE484222325
    assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a_64(b"foobar") == 0x85944171F73967E8


def test_report_fields_and_examples():
    _, out = run(CASES["profile_caps4"])
    rep = json.loads(out)
    assert set(rep) == {"subcommand", "input_digest", "parameters", "results", "seed", "wall_time_ms"}
    assert [d for _, d in rep["results"]["degrees"]] == [1, 1, 1, 1]
    assert len(rep["input_digest"]) == 16
    _, out = run(CASES["bounds_q3"])
    res = json.loads(out)["results"]
    assert res["b_q"] == pytest.approx(2.7551, abs=1e-3)
    assert res["eps_max"] == pytest.approx(0.2327, abs=1e-3)
    _, out = run(CASES["classify_caps4"])
    assert json.loads(out)["results"]["is_cap"] is True


def test_digest_ignores_file_name_but_tracks_content(tmp_path):
    text = (GOLDEN / "caps4.txt").read_text()
    (tmp_path / "other.txt").write_text(text)
    buf = io.StringIO()
    assert main(["capcheck", "--set", str(tmp_path / "other.txt"), "--threads", "1"], stdout=buf) == 0
    _, ref = run(CASES["capcheck_caps4"])
    assert json.loads(buf.getvalue())["input_digest"] == json.loads(ref)["input_digest"]
    (tmp_path / "other.txt").write_text("3 2\n0,0\n")
    buf = io.StringIO()
    main(["capcheck", "--set", str(tmp_path / "other.txt")], stdout=buf)
    assert json.loads(buf.getvalue())["input_digest"] != json.loads(ref)["input_digest"]


def test_config_values_yield_to_flags():
    _, from_cfg = run(CASES["classify_config"])
    _, explicit = run(["classify", "--set", "line_plus3_f3_3.txt", "--coeffs", "1,1,1", "--eps", "0.5",
                       "--delta", "0.9"])
    assert json.loads(from_cfg)["results"] == json.loads(explicit)["results"]
    _, override = run(CASES["classify_config"] + ["--delta", "0.4"])
    assert json.loads(override)["parameters"]["delta"] == 0.4
    assert json.loads(override)["results"]["is_cap"] is True


def test_domain_errors_exit_1(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0,0\n0,3\n")
    buf = io.StringIO()
    assert main(["profile", "--set", str(bad)], stdout=buf) == 1
    err = json.loads(buf.getvalue())["error"]
    assert err["code"] == "bad_digit" and "line 3" in err["message"]
    code, out = run(["profile", "--set", "caps4.txt", "--coeffs", "1,1,3"])
    assert code == 1 and json.loads(out)["error"]["code"] == "invalid_triple"
    code, out = run(["search", "--q", "3", "--n", "9"])
    assert code == 1 and json.loads(out)["error"]["code"] == "too_large"
    code, out = run(["classify", "--set", "caps4.txt", "--eps", "1.5", "--delta", "0.5"])
    assert code == 1 and "error" in json.loads(out)


def test_usage_errors_exit_2(capsys):
    assert run(["profile"])[0] == 2
    assert run(["classify", "--set", "caps4.txt"])[0] == 2
    assert run(["capcheck", "--set", "caps4.txt", "--format", "csv"])[0] == 2
    assert run(["chain", "--set", "caps4.txt"])[0] == 2
    assert run(["profile", "--set", "caps4.txt", "--coeffs", "1,1"])[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["profile", "--threads", "x"])
    assert exc.value.code == 2


def test_scan_rows_examples():
    with_fixtures = list(csv.reader(io.StringIO(golden_path("scan").read_text())))
    header, rows = with_fixtures[0], with_fixtures[1:]
    assert header == ["q", "n", "density", "seed", "eps", "size", "heavy_fraction"]
    for row in rows:
        if row[2] == "1.0":
            assert row[6] == "1.0"
    caps_rows = [r for r in rows if r[2] == "" and r[5] == "4"]
    assert [r[6] for r in caps_rows if r[4] == "0.5"] == ["0.0"]
    full_rows = [r for r in rows if r[2] == "" and r[5] == "9"]
    assert all(r[6] == "1.0" for r in full_rows)
    assert golden_path("scan_empty").read_text() == "q,n,density,seed,eps,size,heavy_fraction\n"


def test_scan_rejects_unknown_keys(tmp_path):
    with pytest.raises(BadConfigError):
        scan_rows({"q": "3", "n": "2", "colour": "red"})
    cfg = tmp_path / "c.cfg"
    cfg.write_text("q 3\n")
    with pytest.raises(BadConfigError):
        read_config(str(cfg))


def test_gen_writes_set_file(tmp_path):
    out = tmp_path / "g.txt"
    buf = io.StringIO()
    assert main(["gen", "--q", "3", "--n", "2", "--seed", "42", "--out", str(out)], stdout=buf) == 0
    assert parse_set(out.read_text()) == parse_set((GOLDEN / "random_q3_n2_seed42.txt").read_text())
    assert json.loads(buf.getvalue())["results"]["codes"] == [int(c) for c in parse_set(out.read_text()).codes]


def test_planted_gen_output_is_light():
    _, out = run(CASES["gen_planted"])
    res = json.loads(out)["results"]
    assert res["achieved_fraction"] >= 0.9


def test_bounds_sweep_csv():
    rows = list(csv.reader(io.StringIO(run(CASES["bounds_sweep"])[1])))
    assert rows[0] == ["n", "M_n", "finite_rate"]
    assert [int(r[0]) for r in rows[1:]] == [1, 6, 11, 16, 21, 26]
    for r in rows[1:]:
        assert float(r[2]) <= 3 ** (1 / int(r[0])) * asymptotic_bq(3) * (1 + 1e-12)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "almostcap", "bounds", "--q", "2", "--threads", "1"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["results"]["b_q"] == pytest.approx(1.8899, abs=1e-3)


def test_search_json_shape():
    res = json.loads(run(CASES["search_q3_n2"])[1])["results"]
    assert set(res) == {"size", "witness", "nodes"}
    assert res["size"] == 4
    from almostcap.ap import CoeffTriple, is_cap_set

    assert is_cap_set(PointSet(3, 2, res["witness"]), CoeffTriple(1, 1, 1, 3))
