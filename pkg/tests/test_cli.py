"""Command-line interface: exit codes, CSV contract, manifests."""

import json

import numpy as np
import pytest

from udcdma import cli, codebook


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_figure(capsys, c8_eq10):
    code, out, _ = run(["gen", "--l", "8", "--variant", "eq10"], capsys)
    assert code == 0
    assert np.array_equal(codebook.parse_figure(out), c8_eq10.entries)


def test_gen_csv(capsys):
    code, out, _ = run(["gen", "--l", "4", "--format", "csv"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 4


def test_gen_rejects_bad_length(capsys):
    code, _, err = run(["gen", "--l", "7"], capsys)
    assert code == 2 and "error" in err


def test_verify_exhaustive(capsys):
    code, out, _ = run(["verify", "--l", "8", "--variant", "eq10"], capsys)
    assert code == 0 and "UD pass" in out


def test_verify_exhaustive_budget(capsys):
    code, _, err = run(["verify", "--l", "16"], capsys)
    assert code == 2 and "K <= 16" in err


def test_verify_sampled(capsys):
    code, out, _ = run(["verify", "--l", "8", "--mode", "sampled",
                        "--trials", "10000"], capsys)
    assert code == 0 and "mode=sampled" in out


def test_dmin(capsys):
    code, out, _ = run(["dmin", "--l", "8", "--variant", "eq10"], capsys)
    assert code == 0
    assert out.strip() == "d_min=4 witness=(9,12)"


def test_dmin_budget(capsys):
    code, _, err = run(["dmin", "--l", "16"], capsys)
    assert code == 2


def test_ber_missing_flags(capsys):
    code, _, err = run(["ber"], capsys)
    assert code == 2 and "--l" in err and "--ebn0" in err


def test_ber_malformed_grid(capsys):
    code, _, err = run(["ber", "--l", "8", "--ebn0", "10:1:8"], capsys)
    assert code == 2


def test_ber_ml_budget(capsys):
    code, _, err = run(["ber", "--l", "16", "--decoder", "ml",
                        "--ebn0", "8:1:8"], capsys)
    assert code == 1 and "K <= 25" in err


def test_ber_stdout_csv(capsys):
    code, out, _ = run(["ber", "--l", "8", "--ebn0", "8:1:9",
                        "--bits", "2000", "--noiseless", "--seed", "1"],
                       capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 3
    for line in lines[1:]:
        dec, L, K, ebn0, bits, errors, ber, wall = line.split(",")
        assert dec == "fda" and (L, K) == ("8", "13")
        assert int(bits) >= 2000 and int(errors) == 0
        assert float(ber) == 0.0


def test_ber_manifest_replay(tmp_path, capsys):
    out1 = tmp_path / "run1.csv"
    code, _, _ = run(["ber", "--l", "4", "--ebn0", "4:2:6", "--bits", "4000",
                      "--seed", "5", "--out", str(out1)], capsys)
    assert code == 0
    manifest_path = out1.with_suffix(".csv.manifest.json")
    assert manifest_path.exists()
    manifest = json.loads(manifest_path.read_text())
    assert manifest["command"] == "ber"
    assert manifest["config"]["seed"] == 5

    out2 = tmp_path / "run2.csv"
    code, _, _ = run(["ber", "--from-manifest", str(manifest_path),
                      "--out", str(out2)], capsys)
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_ber_plot(tmp_path, capsys):
    out = tmp_path / "run.csv"
    png = tmp_path / "run.png"
    code, _, _ = run(["ber", "--l", "4", "--ebn0", "0:2:4", "--bits", "2000",
                      "--out", str(out), "--plot", str(png)], capsys)
    assert code == 0
    assert png.exists() and png.stat().st_size > 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


@pytest.mark.slow
def test_appendix_c_report(capsys):
    code, out, err = run(["appendix-c"], capsys)
    assert code == 0 and err == ""
    assert out.strip() == ("pairs=7140 forbidden=308 classes=22 "
                           "extensions_blocked=115/115")


def test_version(capsys):
    code, out, _ = run(["--version"], capsys)
    assert code == 0
