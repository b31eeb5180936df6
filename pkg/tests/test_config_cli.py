import json
import subprocess
import sys
from pathlib import Path

import pytest

from fogsplit.cli import EXIT_CONFIG, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, main
from fogsplit.config import ConfigError, parse_config, parse_range
from fogsplit.results import csv_to_rows, manifest_path
from fogsplit.topology import CandidatePolicy, NodeKind

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

TINY = """
[scenario]
id = tiny
[topology]
site_count = 1
iot_per_site = 2
core_hops = 1
[demands]
active_iot_count = 1
[sweep]
traffic_mbps = 1, 5
k = 1..2
"""


def write(tmp_path, text, name="c.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_range():
    assert parse_range("1..3, 8", int) == (1, 2, 3, 8)
    assert parse_range("0.5..2.5") == (0.5, 1.5, 2.5)
    for bad in ("3..1", "", "1..2.5"):
        with pytest.raises(ConfigError):
            parse_range(bad)
    with pytest.raises(ConfigError):
        parse_range("1.5", int)


def test_shipped_configs_parse():
    for path in CONFIGS.glob("*.cfg"):
        cfg = parse_config(path.read_text(), path.stem)
        assert cfg.k_values
    s1 = parse_config((CONFIGS / "scenario1.cfg").read_text())
    assert (s1.site_count, s1.iot_per_site, s1.core_hops, s1.active_iot_count) == (4, 5, 4, 5)
    assert s1.traffic_mbps == tuple(float(t) for t in range(1, 11))
    assert s1.k_values == (1, 2, 3, 4, 5, 6)
    assert s1.candidate_policy is CandidatePolicy.PEERS
    assert parse_config((CONFIGS / "scenario2.cfg").read_text()).active_iot_count == 20


def test_parse_profiles_and_explicit_demands():
    cfg = parse_config(TINY + "[profiles]\niot.network.idle_power = 0.3\n"
                       "[solver]\ntime_limit = 5\n", "x")
    assert cfg.profiles()[NodeKind.IOT_DEVICE].network.idle_power == 0.3
    assert cfg.time_limit == 5.0
    cfg = parse_config(TINY.replace("active_iot_count = 1", "demand.0 = 0, 2\ndemand.1 = 1, 7"))
    assert cfg.explicit_demands == ((0, 2.0), (1, 7.0))


@pytest.mark.parametrize("extra, match", [
    ("[bogus]\na = 1\n", "section"),
    ("[solver]\nflavour = x\n", "flavour"),
    ("[solver]\nengine = cplex\n", "engine"),
    ("[profiles]\nwidget.network.pue = 2\n", "widget"),
    ("[profiles]\niot.network = 2\n", "KIND.SUBSYSTEM.FIELD"),
    ("[profiles]\nedgefog.processing.idle_power = 500\n", "edgefog.processing"),
])
def test_config_errors(extra, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(TINY + extra)


def test_solve_writes_csv_and_manifest(tmp_path, capsys):
    out = tmp_path / "r" / "tiny.csv"
    assert main(["solve", "--config", write(tmp_path, TINY), "--out", str(out)]) == EXIT_OK
    rows = csv_to_rows(out.read_text())
    assert len(rows) == 4
    manifest = json.loads(manifest_path(out).read_text())
    for key in ("config_checksum", "catalog_version", "solver", "node_limit", "started", "finished",
                "artifact_version"):
        assert key in manifest


def test_solve_is_byte_stable(tmp_path):
    cfg = write(tmp_path, TINY)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["solve", "--config", cfg, "--out", str(a)])
    main(["solve", "--config", cfg, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_overrides_and_dump(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    code = main(["solve", "--config", cfg, "--out", "-", "--k", "3", "--traffic", "4",
                 "--solver", "greedy", "--dump-placement"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].startswith("scenario,")
    assert lines[1].split(",")[3:5] == ["3", "greedy"]
    dump = [line for line in lines if line.startswith("traffic_gbps=")]
    assert dump and dump[0].endswith("total=4000")


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["solve", "--config", "x.cfg", "--solver", "magic"])
    assert info.value.code == EXIT_USAGE


def test_config_error_exit(tmp_path, capsys):
    assert main(["solve", "--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG
    cfg = write(tmp_path, TINY + "[profiles]\niot.network.idle_power = 9\n")
    assert main(["validate", "--config", cfg]) == EXIT_CONFIG
    assert "iot.network" in capsys.readouterr().err
    assert main(["solve", "--config", write(tmp_path, TINY), "--k", "0"]) == EXIT_CONFIG


def test_oracle_on_scenario_one_hits_the_size_cap(tmp_path, capsys):
    code = main(["solve", "--config", str(CONFIGS / "scenario1.cfg"), "--solver", "oracle",
                 "--out", str(tmp_path / "o.csv")])
    assert code == EXIT_SOLVER
    assert "size cap" in capsys.readouterr().err


def test_budget_exhaustion_exit(tmp_path, capsys):
    cfg = write(tmp_path, TINY.replace("site_count = 1", "site_count = 4")
                .replace("iot_per_site = 2", "iot_per_site = 5")
                .replace("active_iot_count = 1", "active_iot_count = 5"))
    out = tmp_path / "b.csv"
    code = main(["solve", "--config", cfg, "--traffic", "8", "--k", "4", "--node-limit", "1", "--out", str(out)])
    assert code == EXIT_SOLVER
    assert "budget" in capsys.readouterr().err
    assert csv_to_rows(out.read_text())[0].optimal is False


def test_validate_prints_table_and_warnings(tmp_path, capsys):
    cfg = write(tmp_path, TINY)
    assert main(["validate", "--config", cfg, "--traffic", "20"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "W/Gbps" in out and "warning" in out and "20" in out


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fogsplit", "validate", "--config", write(tmp_path, TINY)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "config OK" in proc.stdout
