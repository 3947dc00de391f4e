import csv

import pytest

from matrix_anderson import ConfigParseError, ConfigValidationError
from matrix_anderson.cli import (EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK, RunConfig,
                                 exponents_header, fmt, main, parse_config, run)
from matrix_anderson.model import ModelConfig

MINIMAL = """
n = 1
ell = 0.5
couplings = [1]
bg_radius = 1
"""


def test_minimal_document_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.model == ModelConfig(1, 0.5, (1.0,))
    assert (cfg.steps, cfg.grid_points, cfg.qr_stride) == (10**6, 21, 1)
    assert cfg.rank_tol == 1e-8 and cfg.seeds == (1, 2, 3) and cfg.emit_csv
    assert cfg.model.site_law.atoms == (0.0, 1.0)
    assert cfg.model.site_law.probabilities == (0.5, 0.5)


def test_full_document():
    cfg = parse_config(MINIMAL + """
grid_points = 5
steps = 1000
seeds = [4, 5]
qr_stride = 3
rank_tol = 1e-9
output = "out"
emit_csv = false
[site_law]
atoms = [0, 1, 2]
probabilities = [0.25, 0.5, 0.25]
""")
    assert cfg.grid_points == 5 and cfg.seeds == (4, 5) and not cfg.emit_csv
    assert cfg.model.site_law.atoms == (0.0, 1.0, 2.0)
    assert str(cfg.output_path) == "out"


def test_zero_coupling_rejected():
    with pytest.raises(ConfigValidationError, match="coupling must be nonzero"):
        parse_config(MINIMAL.replace("[1]", "[0]"))


def test_missing_atom_one_rejected():
    doc = MINIMAL + "[site_law]\natoms = [0, 2]\nprobabilities = [0.5, 0.5]\n"
    with pytest.raises(ConfigValidationError, match="support"):
        parse_config(doc)


def test_nonpositive_ell_rejected():
    with pytest.raises(ConfigValidationError):
        parse_config(MINIMAL.replace("ell = 0.5", "ell = -0.5"))


@pytest.mark.parametrize("doc, key", [
    (MINIMAL + "bogus = 1\n", "bogus"),
    (MINIMAL.replace("n = 1", "n = 'one'"), "n"),
    (MINIMAL.replace("couplings = [1]", "couplings = 1"), "couplings"),
    ("ell = 0.5\ncouplings = [1]\n", "n"),
    (MINIMAL + "seeds = [1.5]\n", "seeds"),
    (MINIMAL + "[site_law]\nweights = [1]\natoms = [0, 1]\n", "site_law.weights"),
])
def test_schema_errors_name_key(doc, key):
    with pytest.raises(ConfigParseError) as exc:
        parse_config(doc)
    assert exc.value.key == key
    assert key in str(exc.value)


def test_malformed_toml():
    with pytest.raises(ConfigParseError):
        parse_config("n = = 1")


def test_run_config_constraints():
    with pytest.raises(ConfigValidationError):
        RunConfig(ModelConfig(1, 0.5, (1.0,)), seeds=())
    with pytest.raises(ConfigValidationError):
        RunConfig(ModelConfig(1, 0.5, (1.0,)), steps=0)


def test_fmt():
    assert fmt(2 / 3) == "0.666666666667"
    assert fmt(1.0) == "1"
    assert fmt(-1.5e-20) == "-1.5e-20"


def read(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_run_writes_artifacts(tmp_path):
    cfg = parse_config(MINIMAL + f'steps = 20000\noutput = "{tmp_path}"\n')
    assert run(cfg) == EXIT_OK
    rows = read(tmp_path / "exponents.csv")
    assert rows[0] == exponents_header(1)
    assert rows[0][:7] == ["E", "gamma_1", "gamma_2", "se_1", "se_2", "lie_rank", "separable"]
    assert len(rows) == 22 and all(len(r) == 2 + 4 * 1 + 2 for r in rows)
    assert all(r[5] == "3" and r[6] == "1" for r in rows[1:])
    iv = read(tmp_path / "interval.csv")
    assert iv[0] == ["lambda_min", "lambda_max", "delta", "ell_c", "r_ell", "lower", "upper"]
    assert iv[1] == ["0", "1", "0.5", "1", "2", "-1", "2"]
    summary = (tmp_path / "summary.txt").read_text()
    assert "separable = 21" in summary and "seeds = 1, 2, 3" in summary
    assert "wall_time_s" in summary
    raw = (tmp_path / "exponents.csv").read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")


def test_no_csv_writes_only_summary(tmp_path):
    assert main(["--n", "1", "--ell", "0.5", "--couplings", "1", "--steps", "2000",
                 "--grid-points", "3", "--output", str(tmp_path), "--no-csv"]) == EXIT_OK
    assert sorted(p.name for p in tmp_path.iterdir()) == ["summary.txt"]


def test_empty_interval_exit_code(tmp_path, capsys):
    status = main(["--n", "2", "--ell", "0.9", "--couplings", "1,1", "--bg-radius", "1",
                   "--output", str(tmp_path)])
    assert status == EXIT_ERROR
    assert "ell_c=0.666" in capsys.readouterr().err


def test_inconclusive_exit_code(tmp_path):
    # ten steps cannot resolve any gap at 100 standard errors
    status = main(["--n", "2", "--ell", "0.5", "--couplings", "1,1", "--steps", "100",
                   "--grid-points", "2", "--significance", "100", "--seeds", "1",
                   "--output", str(tmp_path)])
    assert status == EXIT_INCONCLUSIVE
    assert "inconclusive = 2" in (tmp_path / "summary.txt").read_text()


def test_config_file_with_flag_override(tmp_path):
    conf = tmp_path / "run.toml"
    conf.write_text(MINIMAL + "steps = 500\ngrid_points = 2\nseeds = [1]\n")
    out = tmp_path / "out"
    status = main(["--config", str(conf), "--grid-points", "4", "--output", str(out)])
    assert status in (EXIT_OK, EXIT_INCONCLUSIVE)
    assert len(read(out / "exponents.csv")) == 5


def test_cli_validation_error(tmp_path, capsys):
    assert main(["--n", "1", "--ell", "0.5", "--couplings", "0"]) == EXIT_ERROR
    assert "nonzero" in capsys.readouterr().err
    assert main(["--n", "1", "--ell", "0.5", "--couplings", "1", "--atoms", "0,2",
                 "--probabilities", "0.5,0.5"]) == EXIT_ERROR


def test_custom_site_law_flags(tmp_path):
    assert main(["--n", "1", "--ell", "0.5", "--couplings", "1", "--atoms", "0,1,2",
                 "--probabilities", "0.3,0.4,0.3", "--steps", "2000", "--grid-points", "2",
                 "--seeds", "1", "--output", str(tmp_path)]) in (EXIT_OK, EXIT_INCONCLUSIVE)
    assert (tmp_path / "exponents.csv").exists()
