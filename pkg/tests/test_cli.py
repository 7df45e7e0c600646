"""End-to-end CLI tests: every subcommand, every format, exit codes."""

import json

import pytest

from lattice_net import cli

EXAMPLE2 = "4,0,0;0,4,2;0,0,4"


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# analyze ---------------------------------------------------------------

def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "--topology", "bcc", "--a", "2",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["nodes"] == 32
    assert doc["diameter"] == 3
    assert doc["avg_num"] == 66 and doc["avg_den"] == 31
    assert doc["bound_kind"] == "symmetric"


def test_analyze_csv_golden(capsys):
    code, out, _ = run(capsys, "analyze", "--topology", "bcc", "--a", "2",
                       "--format", "csv")
    assert code == 0
    assert out == (
        "topology,a,nodes,diameter,avg_num,avg_den,bound_num,bound_den\r\n"
        "bcc,2,32,3,66,31,31,11\r\n"
    )


def test_analyze_table(capsys):
    code, out, _ = run(capsys, "analyze", "--topology", "pc", "--a", "4")
    assert code == 0
    assert "nodes" in out and "64" in out
    assert "diameter" in out and "bound_kind" in out


def test_analyze_torus_and_matrix(capsys):
    code, out, _ = run(capsys, "analyze", "--topology", "torus",
                       "--sides", "8,4,4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["nodes"] == 128 and doc["a"] is None
    assert doc["bound_kind"] == "mixed-radix"

    code, out, _ = run(capsys, "analyze", "--matrix", EXAMPLE2,
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["nodes"] == 64


def test_analyze_missing_bound_is_empty(capsys):
    # Order above the per-dim cap and not linearly symmetric: no bound.
    code, out, _ = run(capsys, "analyze", "--topology", "torus",
                       "--sides", "32,16,16", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].endswith(",,")


def test_analyze_byte_stable(capsys):
    args = ("analyze", "--topology", "fcc", "--a", "3", "--format", "json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_analyze_resource_cap_is_validation_failure(capsys):
    code, _, err = run(capsys, "analyze", "--topology", "pc", "--a", "101")
    assert code == 1
    assert "validation" in err


# usage errors ----------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("analyze",),
    ("analyze", "--topology", "torus"),
    ("analyze", "--topology", "pc"),
    ("analyze", "--topology", "pc", "--a", "2", "--matrix", EXAMPLE2),
    ("analyze", "--matrix", "1,2;3"),
    ("analyze", "--matrix", "1,x;3,4"),
    ("analyze", "--topology", "torus", "--sides", "8,oops"),
    ("route", "--topology", "pc", "--a", "2", "--from", "0,0", "--to",
     "1,1,1"),
    ("sweep", "--topology", "pc", "--a", "2", "--loads", "0.1,zz"),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_unknown_flag_exits_2(capsys):
    assert run(capsys, "analyze", "--no-such-flag")[0] == 2
    assert run(capsys, "analyze", "--topology", "nosuch", "--a", "2")[0] == 2


# symmetry --------------------------------------------------------------

def test_symmetry_symmetric_case(capsys):
    code, out, _ = run(capsys, "symmetry", "--topology", "fcc", "--a", "2",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["symmetric"] is True
    assert doc["members"] == 48
    assert len(doc["witnesses"]) == 3
    assert all(w is not None for w in doc["witnesses"])


def test_symmetry_asymmetric_case(capsys):
    code, out, _ = run(capsys, "symmetry", "--topology", "torus",
                       "--sides", "8,4,4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["symmetric"] is False
    assert any(w is None for w in doc["witnesses"])


def test_symmetry_table_and_csv(capsys):
    code, out, _ = run(capsys, "symmetry", "--topology", "pc", "--a", "2")
    assert code == 0
    assert "yes" in out and "axis 1" in out
    code, out, _ = run(capsys, "symmetry", "--topology", "pc", "--a", "2",
                       "--format", "csv")
    assert code == 0
    assert out.startswith("topology,nodes,symmetric,members\r\n")


# route -----------------------------------------------------------------

def test_route_worked_example_table_golden(capsys):
    code, out, _ = run(capsys, "route", "--topology", "fcc", "--a", "4",
                       "--from", "1,3,3", "--to", "6,0,1")
    assert code == 0
    assert out == (
        "topology  fcc\n"
        "source    (1, 3, 3)\n"
        "target    (6, 0, 1)\n"
        "record    (1, 1, -2)\n"
        "norm      4\n"
        "path    (1,3,3) -> (2,3,3) -> (6,0,3) -> (6,0,2) -> (6,0,1)\n"
    )


def test_route_json_fields(capsys):
    code, out, _ = run(capsys, "route", "--topology", "fcc", "--a", "4",
                       "--from", "1,3,3", "--to", "6,0,1",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["record"] == [1, 1, -2]
    assert doc["norm"] == 4
    assert doc["path"][0] == [1, 3, 3]
    assert doc["path"][-1] == [6, 0, 1]
    assert len(doc["path"]) == 5


def test_route_csv_and_torus(capsys):
    code, out, _ = run(capsys, "route", "--topology", "torus",
                       "--sides", "8,8", "--from", "0,0", "--to", "5,1",
                       "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "topology,source,target,record,norm,path"
    assert ",-3 1,4," in lines[1]


def test_route_random_tie_deterministic(capsys):
    args = ("route", "--topology", "torus", "--sides", "4,4",
            "--from", "0,0", "--to", "2,2", "--tie", "random",
            "--seed", "7", "--format", "json")
    code, first, _ = run(capsys, *args)
    assert code == 0
    _, second, _ = run(capsys, *args)
    assert first == second
    doc = json.loads(first)
    assert doc["norm"] == 4
    assert sorted(abs(x) for x in doc["record"]) == [2, 2]


# verify ----------------------------------------------------------------

def test_verify_specialized_bcc3(capsys):
    code, out, _ = run(capsys, "verify", "--topology", "bcc", "--a", "3",
                       "--router", "specialized")
    assert code == 0
    assert "0 violations" in out
    assert "11664 pairs checked" in out


def test_verify_generic_and_json(capsys):
    code, out, _ = run(capsys, "verify", "--matrix", EXAMPLE2,
                       "--router", "generic", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["violations"] == 0
    assert doc["pairs_checked"] == 64 * 64


def test_verify_sampled_large_graph(capsys):
    code, out, _ = run(capsys, "verify", "--topology", "pc", "--a", "17",
                       "--max-pairs", "150", "--seed", "3",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["pairs_checked"] == 150
    assert doc["violations"] == 0


# lift ------------------------------------------------------------------

def test_lift_pc_bcc_json(capsys):
    code, out, _ = run(capsys, "lift", "--left-topology", "pc",
                       "--left-a", "4", "--right-topology", "bcc",
                       "--right-a", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["overlap"] == 2
    assert doc["dims"] == 4
    assert doc["nodes"] == 128
    assert doc["matrix"] == "4,0,0,2;0,4,0,2;0,0,4,0;0,0,0,2"


def test_lift_matrix_reusable_as_literal(capsys):
    code, out, _ = run(capsys, "lift", "--left-topology", "torus",
                       "--left-sides", "4,4", "--right-topology", "rtt",
                       "--right-a", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["nodes"] == 32
    code, out, _ = run(capsys, "analyze", "--matrix", doc["matrix"],
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["nodes"] == 32


def test_lift_table_and_missing_side(capsys):
    code, out, _ = run(capsys, "lift", "--left-topology", "fcc",
                       "--left-a", "2", "--right-topology", "bcc",
                       "--right-a", "2")
    assert code == 0
    assert "overlap" in out and "nodes" in out
    code, _, err = run(capsys, "lift", "--left-topology", "fcc",
                       "--left-a", "2")
    assert code == 2 and err


# simulate --------------------------------------------------------------

SIM_ARGS = ("simulate", "--topology", "pc", "--a", "3", "--load", "0.3",
            "--warmup", "200", "--measure", "600", "--seed", "5")


def test_simulate_flags_json(capsys):
    code, out, _ = run(capsys, *SIM_ARGS, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["topology"] == "pc(3)"
    assert 0.2 <= doc["accepted_load"] <= 0.4
    assert doc["created_packets"] == (
        doc["delivered_total"] + doc["in_network_end"] + doc["queued_end"]
    )


def test_simulate_byte_stable(capsys):
    _, first, _ = run(capsys, *SIM_ARGS, "--format", "json")
    _, second, _ = run(capsys, *SIM_ARGS, "--format", "json")
    assert first == second


def test_simulate_table_and_csv(capsys):
    code, out, _ = run(capsys, *SIM_ARGS)
    assert code == 0
    assert "accepted_load" in out
    code, out, _ = run(capsys, *SIM_ARGS, "--format", "csv")
    assert code == 0
    assert out.startswith("topology,pattern,offered_load,seed,cycles,")


def test_simulate_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "topology": {"kind": "bcc4", "a": 2},
        "pattern": "centralsymmetric",
        "offered_load": 0.2,
        "warmup_cycles": 200,
        "measure_cycles": 400,
        "seed": 9,
    }), encoding="utf-8")
    code, out, _ = run(capsys, "simulate", "--config", str(cfg),
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["topology"] == "bcc4(2)"
    assert doc["pattern"] == "centralsymmetric"
    assert doc["pattern_info"] == {"fixed_points": 16}


def test_simulate_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json", encoding="utf-8")
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 2

    cfg.write_text(json.dumps({"topology": {"kind": "pc", "a": 2},
                               "bandwidth": 3}), encoding="utf-8")
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 2

    cfg.write_text(json.dumps({"topology": {"kind": "pc", "a": 2},
                               "offered_load": 1.5}), encoding="utf-8")
    code, _, err = run(capsys, "simulate", "--config", str(cfg))
    assert code == 1 and "invalid configuration" in err

    code, _, _ = run(capsys, "simulate", "--config", str(cfg),
                     "--topology", "pc", "--a", "2")
    assert code == 2

    code, _, _ = run(capsys, "simulate", "--config",
                     str(tmp_path / "absent.json"))
    assert code == 2


def test_simulate_order_cap_exit_1(capsys):
    code, _, err = run(capsys, "simulate", "--topology", "torus",
                       "--sides", "32,32,32", "--load", "0.1")
    assert code == 1
    assert "invalid configuration" in err


# sweep -----------------------------------------------------------------

def test_sweep_csv(capsys, monkeypatch):
    monkeypatch.setenv("LATTICE_NET_THREADS", "1")
    code, out, _ = run(capsys, "sweep", "--topology", "pc", "--a", "3",
                       "--loads", "0.0,0.4", "--seeds", "2",
                       "--warmup", "200", "--measure", "600",
                       "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "topology,pattern,offered,accepted,avg_latency,seed_count"
    assert len(lines) == 3
    assert lines[1].startswith("pc(3),uniform,0.0,0.0,")


def test_sweep_empty_is_header_only(capsys, monkeypatch):
    monkeypatch.setenv("LATTICE_NET_THREADS", "1")
    code, out, _ = run(capsys, "sweep", "--topology", "pc", "--a", "3",
                       "--loads", "", "--format", "csv")
    assert code == 0
    assert out == "topology,pattern,offered,accepted,avg_latency,seed_count\r\n"


def test_sweep_table_and_json(capsys, monkeypatch):
    monkeypatch.setenv("LATTICE_NET_THREADS", "1")
    base = ("sweep", "--topology", "pc", "--a", "2", "--loads", "0.2",
            "--seeds", "2", "--warmup", "100", "--measure", "300")
    code, out, _ = run(capsys, *base)
    assert code == 0
    assert out.splitlines()[0].startswith("topology")
    code, out, _ = run(capsys, *base, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert isinstance(doc, list) and len(doc) == 1
    assert doc[0]["seed_count"] == 2


# output file -----------------------------------------------------------

def test_output_flag_writes_identical_bytes(capsys, tmp_path):
    args = ("analyze", "--topology", "bcc", "--a", "2", "--format", "json")
    _, stdout_text, _ = run(capsys, *args)
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, *args, "--output", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text(encoding="utf-8") == stdout_text
