import json
import os

from solvquot.cli import main
from solvquot.groups import builtin_group, chief_series, is_isomorphic


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_epi_command(capsys):
    code, out = run_cli(capsys, "epi", "--source", "builtin:braid(4)", "--target", "S(4)")
    assert code == 0
    doc = json.loads(out)
    assert doc["epi"] == 72 and doc["delta"] == 3 and doc["aut"] == 24
    assert [lvl["q"] for lvl in doc["levels"]] == [2, 3, 2]
    assert doc["config"]["target"] == "S(4)"


def test_delta_command(capsys):
    code, out = run_cli(capsys, "delta", "--source", "builtin:bs(2,6)", "--target", "D(8)")
    assert code == 0
    assert json.loads(out)["delta"] == 3


def test_growth_command(capsys):
    code, out = run_cli(capsys, "growth", "--source", "builtin:braid(3)", "--kmax", "5")
    assert code == 0
    assert json.loads(out)["a"] == [1, 1, 4, 9, 6]
    code, out = run_cli(capsys, "growth", "--source", "builtin:free(2)", "--kmax", "3",
                        "--normal", "--tsv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split("\t") == ["k", "h_k", "t_k", "a_k", "a_k_normal"]
    assert lines[2].split("\t") == ["2", "4", "3", "3", "3"]


def test_moebius_command(capsys):
    code, out = run_cli(capsys, "moebius", "--target", "D(6)")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split("\t") == ["order", "index", "generators", "mu"]
    assert len(lines) == 7  # header + 6 subgroups
    mus = [int(l.split("\t")[-1]) for l in lines[1:]]
    assert mus == [3, -1, -1, -1, -1, 1]


def test_cocycle_command(capsys):
    code, out = run_cli(capsys, "cocycle", "--source", "builtin:klein",
                        "--target", "S(4)", "--images", "2,1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split("\t")[0] == "row"
    assert len(lines) == 3  # one relator, two rows over Z_2^2
    bad_code = main(["cocycle", "--source", "builtin:klein", "--target", "S(4)",
                     "--images", "0,0,0"])
    capsys.readouterr()
    assert bad_code == 1


def test_aut_command(capsys):
    code, out = run_cli(capsys, "aut", "--target", "Q(8)")
    assert code == 0 and json.loads(out)["aut"] == 24


def test_verify_command(capsys):
    code, out = run_cli(capsys, "verify", "--sources", "builtin:bs(1,3)",
                        "--targets", "S(3)", "D(8)")
    assert code == 0
    lines = out.strip().splitlines()
    assert all(line.split("\t")[-1] == "pass" for line in lines[1:])


def test_catalog_and_roundtrip(capsys, tmp_path):
    code, out = run_cli(capsys, "catalog")
    assert code == 0 and "D(8)" in out
    code, out = run_cli(capsys, "catalog", "--dump", "D(12)")
    assert code == 0
    path = tmp_path / "d12.tbl"
    path.write_text(out)
    from solvquot.cli import read_table_file

    table = read_table_file(str(path))
    tower = chief_series(table)
    assert is_isomorphic(tower.group, builtin_group("D(12)").group)
    code, out = run_cli(capsys, "roundtrip", "--spec", "Q(16)",
                        "--out", str(tmp_path / "q16.tbl"))
    assert code == 0 and json.loads(out)["roundtrip_isomorphic"]


def test_byte_determinism_across_threads(capsys):
    outs = []
    for threads in ("1", "3"):
        code, out = run_cli(capsys, "growth", "--source", "builtin:braid(4)",
                            "--kmax", "5", "--threads", threads, "--tsv")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    outs = []
    for threads in ("1", "2"):
        code, out = run_cli(capsys, "epi", "--source", "builtin:braid(4)",
                            "--target", "S(4)", "--threads", threads)
        assert code == 0
        outs.append(json.loads(out))
        outs[-1]["config"].pop("threads")
    assert outs[0] == outs[1]


def test_exit_codes(capsys):
    assert main(["epi", "--source", "builtin:nosuch(1)", "--target", "S(4)"]) == 1
    capsys.readouterr()
    assert main(["epi", "--source", "builtin:braid(3)", "--target", "S(9)"]) == 1
    capsys.readouterr()
    assert main(["aut", "--target", "Z(2)^10"]) == 2
    capsys.readouterr()
    assert main(["epi", "--source", "nosuchfile.txt", "--target", "S(3)"]) == 1
    capsys.readouterr()


def test_inline_and_file_sources(capsys, tmp_path):
    code, out = run_cli(capsys, "epi", "--source", "< x, y | y x y^-1 x >",
                        "--target", "S(3)")
    assert code == 0 and json.loads(out)["epi"] == 6
    path = tmp_path / "pres.txt"
    path.write_text("# the Klein bottle group\n< x, y | y x y^-1 x >\n")
    code, out = run_cli(capsys, "epi", "--source", str(path), "--target", "S(3)")
    assert code == 0 and json.loads(out)["epi"] == 6


def test_table2_command(capsys):
    code, out = run_cli(capsys, "table2", "--nmax", "4", "--kmax", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1].split("\t") == ["B3", "1", "1", "4", "9"]
    assert lines[2].split("\t") == ["B4", "1", "1", "4", "17"]


def test_scan_braid_deltas(capsys):
    # the scan only reports observations; nothing about the observed bounds
    # is asserted here by design
    code, out = run_cli(capsys, "scan-braid-deltas", "--max-order", "12")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split("\t") == ["target", "order", "delta_B3", "delta_B4"]
    assert len(lines) > 3
