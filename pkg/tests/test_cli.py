import json
import logging

import pytest

from pynearfield import cli
from pynearfield.log_utils import init_logger
from pynearfield.core.exceptions import SingularBasisError
from pynearfield.harness import figures


@pytest.fixture(autouse=True)
def no_log_file(monkeypatch):
    monkeypatch.setenv("NEARFIELD_LOG_FILE", "")
    monkeypatch.delenv("NEARFIELD_WORKERS", raising=False)


def test_parser():
    args = cli.build_parser().parse_args(["fig4", "--seed", "3", "--trials", "7", "--paper-scale"])
    assert (args.command, args.seed, args.trials, args.paper_scale) == ("fig4", 3, 7, True)
    config = cli.load_config(args)
    assert (config.seed, config.trials, config.n_antennas, config.workers) == (3, 7, 512, 1)
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["fig9"])


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("NEARFIELD_WORKERS", "3")
    assert cli.load_config(cli.build_parser().parse_args(["run"])).workers == 3
    assert cli.load_config(cli.build_parser().parse_args(["run", "--threads", "2"])).workers == 2


def test_configuration_error_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"antennas": 4}))
    assert cli.main(["fig3", "--config", str(path), "--out", str(tmp_path)]) == cli.EXIT_CONFIGURATION
    assert cli.main(["fig3", "--trials", "0", "--out", str(tmp_path)]) == cli.EXIT_CONFIGURATION


def test_numerical_error_exit_code(tmp_path, monkeypatch):
    def failing(config):
        raise SingularBasisError(1e13)

    monkeypatch.setitem(figures.FIGURES, "run", failing)
    assert cli.main(["run", "--out", str(tmp_path)]) == cli.EXIT_NUMERICAL


def test_fig3_writes_results(tmp_path):
    assert cli.main(["fig3", "--trials", "1", "--out", str(tmp_path)]) == cli.EXIT_OK
    lines = (tmp_path / "fig3.csv").read_text().splitlines()
    assert lines[0].startswith("# config: ")
    echo = json.loads(lines[0][len("# config: "):])
    assert echo["config"]["trials"] == 1
    assert lines[1] == "snr_db,r_m,inv_spectrum"
    summary = json.loads((tmp_path / "fig3_summary.json").read_text())
    assert [entry["snr_db"] for entry in summary["summary"]["per_snr"]] == [40.0, 50.0, 60.0]


def test_output_is_bit_identical(tmp_path):
    runs = {
        "a": ["fig3", "--trials", "2", "--seed", "5"],
        "b": ["fig3", "--trials", "2", "--seed", "5"],
        "c": ["fig3", "--trials", "2", "--seed", "5", "--threads", "2"],
    }
    for name, argv in runs.items():
        assert cli.main(argv + ["--out", str(tmp_path / name)]) == cli.EXIT_OK
    for stem in ("fig3.csv", "fig3_summary.json"):
        reference = (tmp_path / "a" / stem).read_bytes()
        assert (tmp_path / "b" / stem).read_bytes() == reference
        assert (tmp_path / "c" / stem).read_bytes() == reference


def test_repeated_runs_do_not_duplicate_log_handlers(tmp_path):
    root = logging.getLogger()
    before = list(root.handlers)
    try:
        for _ in range(3):
            assert cli.main(["fig3", "--trials", "1", "--out", str(tmp_path)]) == cli.EXIT_OK
        added = [h for h in root.handlers if h not in before]
        assert len(added) == 1
        init_logger("debug", str(tmp_path / "nearfield.log"))
        init_logger("warning", str(tmp_path / "nearfield.log"))
        added = [h for h in root.handlers if h not in before]
        assert len(added) == 2
        assert all(h.level == logging.WARNING for h in added)
    finally:
        for handler in root.handlers[:]:
            if handler not in before:
                root.removeHandler(handler)
                handler.close()
