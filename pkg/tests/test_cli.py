from __future__ import annotations

from artifact import graph, voltage
from artifact.cli import main
from artifact.families import delta12
from artifact.labelled import dumps as dumps_lg
from artifact.quotients import named_quotients


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_family_list_and_build(tmp_path, capsys):
    code, out = run(capsys, "family", "--list")
    assert code == 0 and "SDW:" in out.out
    path = tmp_path / "pet.txt"
    assert run(capsys, "family", "--name", "GP", "--params", "5,2", "--out", str(path))[0] == 0
    assert graph.loads(path.read_text()).n_vertices == 10


def test_cover_check_and_simplify(tmp_path, capsys):
    src = tmp_path / "d12.ccv"
    src.write_text(voltage.dumps(delta12(5, 1, 2)))
    out_g, fib = tmp_path / "cover.txt", tmp_path / "fibres.txt"
    assert run(capsys, "cover", "--in", str(src), "--out", str(out_g), "--fibres", str(fib))[0] == 0
    assert graph.loads(out_g.read_text()).n_vertices == 30
    assert fib.read_text().startswith("vertex 0 0 0")
    code, out = run(capsys, "check-ccv", "--in", str(src))
    assert code == 0 and out.out.strip() == "ccv: ok"
    simp = tmp_path / "simp.ccv"
    assert run(capsys, "simplify", "--in", str(src), "--out", str(simp))[0] == 0
    assert voltage.is_simplified(voltage.loads(simp.read_text()))


def test_check_ccv_reports_failure(tmp_path, capsys):
    bad = tmp_path / "bad.ccv"
    c = voltage.make_ccv(named_quotients()["K1"], (6,), (3, 3, 3))  # loop parallel to the semiedge
    bad.write_text(voltage.dumps(c))
    code, out = run(capsys, "check-ccv", "--in", str(bad))
    assert code == 1 and "condition 2" in out.out


def test_analyze_and_classify(capsys):
    code, out = run(capsys, "analyze", "--name", "GP", "--params", "5,2")
    assert code == 0 and "|Aut|: 120" in out.out and "eta: 5/3" in out.out
    code, out = run(capsys, "classify", "--name", "SDW", "--params", "9,3")
    assert code == 0 and "case-4" in out.out


def test_classify_error_exit_code(tmp_path, capsys):
    sq = tmp_path / "c4.txt"
    sq.write_text(graph.dumps(graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])))
    code, out = run(capsys, "classify", "--in", str(sq))
    assert code == 2 and out.err.startswith("error:")


def test_probe_quotient(tmp_path, capsys):
    code, out = run(capsys, "probe-quotient", "--quotient", "D12", "--max-m", "7")
    assert code == 0 and "orders=[30, 42]" in out.out
    lg = tmp_path / "d8.lg"
    lg.write_text(dumps_lg(named_quotients()["D8"]))
    code, out = run(capsys, "probe-quotient", "--in", str(lg), "--floor", "0")
    assert code == 0 and "orders=[6]" in out.out


def test_enumerate_writes_provenance(tmp_path, capsys):
    out_dir = tmp_path / "q"
    code, out = run(capsys, "enumerate-quotients", "--stage", "diagram", "--out", str(out_dir))
    assert code == 0 and out.out.startswith("stage diagram: 108 labelled graphs")
    prov = (out_dir / "provenance.txt").read_text().splitlines()
    assert prov[0].startswith("# stage=diagram")
    assert sum(line.startswith("keep ") for line in prov) == 108
    assert len(list(out_dir.glob("*.lg"))) == 108


def test_report(tmp_path, capsys):
    path = tmp_path / "report.tsv"
    assert run(capsys, "report", "--max-order", "30", "--out", str(path))[0] == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith("graph\torder\teta")
    assert any(line.startswith("# max kappa with eta <= 3:") for line in lines)


def test_enumerate_probe_stage_records_probe_summaries(tmp_path, capsys):
    out_dir = tmp_path / "q"
    code, out = run(capsys, "enumerate-quotients", "--stage", "probe", "--out", str(out_dir))
    assert code == 0 and out.out.startswith("stage probe: 9 labelled graphs")
    keeps = [l for l in (out_dir / "provenance.txt").read_text().splitlines() if l.startswith("keep ")]
    assert len(keeps) == 9 and all("vt_covers=" in l for l in keeps)
