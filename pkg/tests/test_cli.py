import json

import pytest

from pgspread.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_q2_footer(capsys):
    code, out, _ = run(capsys, "enumerate", "--q", "2")
    assert code == 0
    assert out.rstrip().endswith("total=155")
    assert out.startswith("0: 1 0 0 0 0 0 0 0 0 0\n")


def test_enumerate_group_counts(capsys):
    _, out, _ = run(capsys, "enumerate", "--q", "3")
    counts = [int(l.split("=")[1]) for l in out.splitlines() if l.startswith("# group")]
    assert counts == [729, 243, 81, 27, 81, 27, 9, 9, 3, 1]


def test_refuses_large_q(capsys):
    code, _, err = run(capsys, "enumerate", "--q", "17")
    assert code == 2 and "ceiling" in err


def test_rejects_composite(capsys):
    code, _, err = run(capsys, "decode", "--q", "4", "0")
    assert code == 2 and "not prime" in err


def test_bad_serial_is_usage_error(capsys):
    code, _, _ = run(capsys, "decode", "--q", "2", "155")
    assert code == 2


def test_decode_meet_points(capsys):
    assert run(capsys, "decode", "--q", "2", "120")[1] == "120: 0 0 0 0 1 0 0 0 0 0\n"
    assert run(capsys, "meet", "--q", "2", "0", "154")[1] == "false\n"
    assert run(capsys, "meet", "--q", "2", "0", "0")[1] == "true\n"
    _, out, _ = run(capsys, "points", "--q", "2", "0")
    assert len(out.splitlines()) == 3


def test_spread(capsys):
    code, out, _ = run(capsys, "spread", "--q", "3")
    assert code == 0 and "lines=10 valid=true" in out and "source=table" in out
    code, out, _ = run(capsys, "spread", "--q", "2")
    assert code == 0 and "source=backtracking" in out


def test_search_text(capsys):
    code, out, _ = run(capsys, "search", "--q", "3")
    assert code == 0
    assert "t=1 size=13" in out and "t=2 size=16" in out


def test_search_q5_first_steps(capsys):
    code, out, _ = run(capsys, "search", "--q", "5", "--max-steps", "5")
    assert code == 0
    sizes = [int(l.split("size=")[1].split()[0]) for l in out.splitlines() if l.startswith("t=")]
    assert sizes == [31, 36, 41, 46, 51]


def test_search_q2_sizes(capsys, tmp_path):
    assert run(capsys, "search", "--q", "2", "--format", "json")[0] == 2
    out = tmp_path / "q2.json"
    assert run(capsys, "search", "--q", "2", "--format", "json", "--out", str(out))[0] == 0
    assert set(json.loads(out.read_text())["sizes"]) <= {7, 9}


def test_search_csv_needs_out(capsys, tmp_path):
    assert run(capsys, "search", "--q", "3", "--format", "csv")[0] == 2
    out = tmp_path / "q3.csv"
    assert run(capsys, "search", "--q", "3", "--format", "csv", "--out", str(out))[0] == 0
    data = out.read_bytes()
    assert data.startswith(b"t,n\n") and b"\r" not in data
    assert json.loads(out.with_suffix(".json").read_text())["q"] == 3


def test_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "search", "--q", "5", "--format", "csv", "--out", str(a))
    run(capsys, "search", "--q", "5", "--format", "csv", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert run(capsys, "certify", "--q", "3")[1] == run(capsys, "certify", "--q", "3")[1]


@pytest.mark.parametrize("q,size", [(3, 22), (7, 183)])
def test_certify_pass(capsys, q, size):
    code, out, _ = run(capsys, "certify", "--q", str(q))
    assert code == 0
    assert f"size={size} result=PASS" in out
    assert "maximal         ok" in out


def test_certify_q11_skips_maximality(capsys):
    code, out, _ = run(capsys, "certify", "--q", "11")
    assert code == 0
    assert "size=628 result=PASS" in out and "maximal         skipped" in out


def test_certify_violation_exit_code(capsys, tmp_path):
    from pgspread.certify import shipped_results_path

    bad = tmp_path / "q3.csv"
    bad.write_text(shipped_results_path(3).read_text().replace("1,1188\n", "1,1189\n"))
    code, out, _ = run(capsys, "certify", "--q", "3", "--data", str(bad))
    assert code == 1 and "violation" in out
    code, out, _ = run(capsys, "certify", "--q", "3", "--serials", "canonical")
    assert code == 1


def test_certify_json(capsys, tmp_path):
    out = tmp_path / "cert.json"
    assert run(capsys, "certify", "--q", "5", "--format", "json", "--out", str(out))[0] == 0
    assert json.loads(out.read_text())["size"] == 81


def test_max_steps_parsing(capsys):
    with pytest.raises(SystemExit):
        main(["search", "--q", "3", "--max-steps", "x"])
    code, out, _ = run(capsys, "certify", "--q", "3", "--max-steps", "2")
    assert code == 0 and "size=16" in out
    assert run(capsys, "search", "--q", "3", "--max-steps", "all")[0] == 0


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--q-max", "3")
    assert code == 0
    assert "FAIL" not in out and "meeting count 157" in out
