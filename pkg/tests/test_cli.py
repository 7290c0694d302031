import json

from steintile import cli


def run_json(argv):
    rr = cli.run(argv)
    return rr, rr.to_json()


def test_copula_min_support():
    rr, doc = run_json(["copula", "min-support", "-m", "3", "-n", "5"])
    assert rr.exit_code == 0
    assert doc["result"]["S"] == 7
    assert doc["result"]["lower_bound"] == 6
    assert doc["result"]["nw_upper_bound"] == 7
    assert "witness" in doc["result"]


def test_pp1d_bound():
    rr, doc = run_json(["pp1d", "bound", "--alpha", "2/3"])
    assert rr.exit_code == 0
    assert doc["result"] == {"lower_bound": "4/3"}


def test_lattice_many_relations():
    rr, doc = run_json(["lattice", "many-relations", "-p", "3", "-d", "2"])
    assert rr.exit_code == 0
    assert doc["result"]["count"] == 4
    assert doc["result"]["volume"] == "3"


def test_lattice_many_relations_with_verification():
    rr, doc = run_json(["lattice", "many-relations", "-p", "3", "-d", "2",
                        "--verify-samples", "5"])
    assert rr.exit_code == 0
    assert doc["result"]["verified_multiplicity"] == 3
    assert doc["result"]["verified_points"] == 20


def test_byte_identical_output():
    argv = ["copula", "min-support", "-m", "3", "-n", "5"]
    assert cli.render(cli.run(argv)) == cli.render(cli.run(argv))
    argv = ["density", "multiples", "-N", "5", "-X", "1000"]
    assert cli.render(cli.run(argv)) == cli.render(cli.run(argv))


def test_output_is_single_sorted_json_document():
    out = cli.render(cli.run(["pp1d", "bound", "--alpha", "1/2"]))
    doc = json.loads(out)
    assert set(doc) == {"subcommand", "params", "result", "exit_code"}
    assert out == json.dumps(doc, sort_keys=True, separators=(",", ":"))


def test_group_min_support_and_cfd():
    rr, doc = run_json(["group", "min-support", "--orders", "3,5",
                        "--g1", "[[1,0]]", "--g2", "[[0,1]]"])
    assert rr.exit_code == 0
    assert doc["result"]["S"] == 7
    rr, doc = run_json(["group", "cfd", "--orders", "2,2",
                        "--g1", "[[1,0]]", "--g2", "[[0,1]]"])
    assert doc["result"]["domain"] == [[0, 0], [1, 1]]


def test_group_tile_check():
    fn = json.dumps({"group": [6], "values": [{"at": [x], "v": "1"} for x in range(6)]})
    rr, doc = run_json(["group", "tile-check", "--function", fn, "--gens", "[[2]]"])
    assert rr.exit_code == 0
    assert doc["result"] == {"tiles": True, "level": "3", "normalized": True}
    fn = json.dumps({"group": [4], "values": [{"at": [0], "v": "1"}]})
    rr, doc = run_json(["group", "tile-check", "--function", fn, "--gens", "[[2]]"])
    assert doc["result"]["tiles"] is False
    assert doc["result"]["witness_x"] == [0]


def test_pp1d_conv_tile_and_verify():
    rr, doc = run_json(["pp1d", "conv-tile", "--lambdas", "1,2/3"])
    assert rr.exit_code == 0
    assert doc["result"]["levels"] == {"1": "2/3", "2/3": "1"}
    assert doc["result"]["support"]["measure"] == "5/3"
    fn = json.dumps(doc["result"]["function"])
    rr2, doc2 = run_json(["pp1d", "verify", "--function", fn, "--lam", "2/3"])
    assert doc2["result"] == {"tiles": True, "level": "1"}
    rr3, doc3 = run_json(["pp1d", "verify", "--function",
                          json.dumps([{"from": "0", "to": "1", "coeffs": ["1"]}]),
                          "--lam", "2/3"])
    assert doc3["result"] == {"tiles": False, "witness": ["1/3", "2/3"]}


def test_pp1d_d2c():
    rr, doc = run_json(["pp1d", "d2c", "-m", "2", "-k", "1"])
    assert rr.exit_code == 0
    assert doc["result"]["support"]["measure"] == "4"
    assert doc["result"]["levels"] == {"2": "3", "3": "2"}


def test_copula_construct_and_table():
    rr, doc = run_json(["copula", "construct", "--family", "lmr", "-m", "2", "-k", "1"])
    assert doc["result"]["matrix"]["entries"] == [["1", "2", "0"], ["1", "0", "2"]]
    rr, doc = run_json(["copula", "construct", "--family", "nw", "-m", "4", "-n", "6"])
    assert doc["result"]["support_size"] == 8
    rr = cli.run(["--csv", "copula", "table", "--max-m", "3", "--max-n", "3"])
    assert rr.exit_code == 0
    lines = cli.render(rr).splitlines()
    assert lines[0] == "m\\n,1,2,3"
    assert lines[1] == "1,1,2,3"
    assert lines[3] == "3,3,4,3"


def test_lattice_dual_and_meet_join():
    rr, doc = run_json(["lattice", "dual", "--basis", '[["2","0"],["0","1/2"]]'])
    assert doc["result"]["dual"]["basis"] == [["1/2", "0"], ["0", "2"]]
    rr, doc = run_json(["lattice", "meet-join", "--basis1", '[["2"]]', "--basis2", '[["3"]]'])
    assert doc["result"]["sum"]["basis"] == [["1"]]
    assert doc["result"]["intersection"]["basis"] == [["6"]]
    assert doc["result"]["volumes"]["product"] == "6"


def test_density_subcommands():
    rr, doc = run_json(["density", "multiples", "-N", "3", "-X", "60"])
    assert doc["result"]["sieve_count"] == 28
    assert doc["result"]["exact_density"] == "7/15"
    rr, doc = run_json(["density", "union-window", "-N", "5"])
    assert doc["result"] == {"window": 50, "count": 24}


def test_exit_codes():
    assert cli.run(["nonsense"]).exit_code == 2
    assert cli.run(["pp1d", "bound", "--alpha", "zz"]).exit_code == 2
    assert cli.run(["pp1d", "bound", "--alpha", "3/2"]).exit_code == 2
    assert cli.run(["copula", "min-support", "-m", "9", "-n", "9"]).exit_code == 3
    assert cli.run(["density", "multiples", "-N", "3", "-X", str(10**9)]).exit_code == 3
    assert cli.run(["group", "min-support", "--orders", "0", "--g1", "[]",
                    "--g2", "[]"]).exit_code == 2


def test_error_documents_are_json():
    rr = cli.run(["pp1d", "bound", "--alpha", "zz"])
    doc = json.loads(cli.render(rr))
    assert doc["result"]["kind"] == "validation"
    rr = cli.run(["copula", "min-support", "-m", "9", "-n", "9"])
    assert json.loads(cli.render(rr))["result"]["kind"] == "cap"


def test_threads_flag_does_not_change_output():
    a = cli.render(cli.run(["pp1d", "bound", "--alpha", "2/3"]))
    b = cli.render(cli.run(["--threads", "4", "pp1d", "bound", "--alpha", "2/3"]))
    assert a == b


def test_pretty_and_csv_modes():
    rr = cli.run(["--pretty", "pp1d", "bound", "--alpha", "2/3"])
    assert "\n" in cli.render(rr)
    rr = cli.run(["--csv", "pp1d", "conv-tile", "--lambdas", "1,1",
                  "--samples-per-unit", "1"])
    assert cli.render(rr).splitlines()[0] == "x,value"


def test_console_entry_point(capsys):
    code = cli.main(["pp1d", "bound", "--alpha", "2/3"])
    out = capsys.readouterr().out
    assert code == 0
    assert json.loads(out)["result"]["lower_bound"] == "4/3"


def test_function_argument_accepts_file(tmp_path):
    doc = {"group": [6], "values": [{"at": [x], "v": "1"} for x in range(6)]}
    path = tmp_path / "f.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    rr, out = run_json(["group", "tile-check", "--function", str(path),
                        "--gens", "[[3]]"])
    assert rr.exit_code == 0
    assert out["result"] == {"tiles": True, "level": "2", "normalized": True}


def test_group_min_support_with_trivial_subgroups():
    rr, doc = run_json(["group", "min-support", "--orders", "4",
                        "--g1", "[]", "--g2", "[]"])
    assert rr.exit_code == 0
    assert doc["result"]["S"] == 4
