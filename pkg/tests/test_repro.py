import json
import os

from steintile import cli, repro


def test_run_all_writes_reports(tmp_path):
    out = tmp_path / "report"
    summary = repro.run_all(str(out))
    assert set(summary["criteria"]) == {str(i) for i in range(1, 13)}
    for i in range(1, 13):
        path = out / f"criterion_{i:02d}.json"
        assert path.exists()
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        assert doc["criterion"] == i
        assert doc["pass"] == summary["criteria"][str(i)]["pass"]
    table = (out / "criterion_04_table.csv").read_text(encoding="utf-8").splitlines()
    assert table[0] == "m,n,S,lower,nw_upper"
    assert len(table) == 1 + 25  # header + 5x5 grid
    # criterion 10's density-trend clause is a known red; everything else green
    for i in range(1, 13):
        expected = i != 10
        assert summary["criteria"][str(i)]["pass"] is expected
    assert summary["all_pass"] is False


def test_repro_all_via_cli(tmp_path):
    out = str(tmp_path / "r")
    rr = cli.run(["repro", "all", "--out", out])
    assert rr.exit_code == 0
    assert os.path.exists(os.path.join(out, "criterion_01.json"))
    assert rr.result["criteria"]["3"]["pass"] is True
