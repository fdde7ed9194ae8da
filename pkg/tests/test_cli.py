from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from deltac import io
from deltac.cli import main, parse_complex, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("text,value", [("2", 2), ("2i", 2j), ("-1+2i", -1 + 2j), ("1-0.5i", 1 - 0.5j),
                                        ("i", 1j), ("-i", -1j), ("1e-3+2e1i", 0.001 + 20j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["1 + 2i", "abc", "2j", "1+", ""])
def test_parse_complex_rejects(text):
    import argparse
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex(text)


def test_parse_range_inclusive():
    r = parse_range("-3:3:0.1")
    assert r.size == 61 and r[0] == -3 and r[-1] == pytest.approx(3)


def test_classify_exit_codes(capsys):
    assert run(capsys, "classify", "--z", "-2")[:2] == (10, "BoundState E=-1\n")
    assert run(capsys, "classify", "--z", "2i")[:2] == (11, "SpectralSingularity E=1\n")
    assert run(capsys, "classify", "--z", "1+0.5i")[0] == 0
    assert run(capsys, "classify", "--z", "-1+2i")[0] == 10
    code, out, err = run(capsys, "classify", "--z", "0")
    assert code == 2 and "z = 0" in err


def test_invalid_syntax_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--z", "1 + 2i"])
    assert exc.value.code == 2


def test_kernel_first_order_file(tmp_path, capsys):
    out = tmp_path / "k.csv"
    assert run(capsys, "kernel", "--m", "1", "--z", "2", "--grid", "-3:3:0.1", "--out", str(out))[0] == 0
    header, rows = io.read_csv(out)
    assert header == list(io.KERNEL_COLUMNS)
    assert len(rows) == 61 * 61
    assert all(r[3] == 0 for r in rows)
    assert all(r[4] == 0 for r in rows if r[0] == r[1])
    # reload and compare against the library bit for bit
    from deltac.metric import eta_order_kernel
    from deltac.spectrum import Coupling
    for r in rows[::97]:
        assert r[4] == float(np.imag(eta_order_kernel(1, Coupling(2), r[0], r[1])))


def test_kernel_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "kernel", "--m", "2", "--z", "1+0.1i", "--grid", "-1:1:0.25", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "#schema=deltac-v1"


def test_kernel_unsupported_order(capsys):
    assert run(capsys, "kernel", "--m", "4", "--z", "2", "--grid", "0:1:0.5")[0] == 2


def test_kernel_h2_and_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "kernel", "--m", "h2", "--z", "2", "--grid", "0:1:0.5")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "deltac-v1" and len(data["rows"]) == 9


def test_sweep_omega_table(tmp_path, capsys):
    out = tmp_path / "omega.csv"
    assert run(capsys, "sweep", "--target", "omega", "--out", str(out))[0] == 0
    header, rows = io.read_csv(out)
    assert header == list(io.SWEEP_COLUMNS)
    table = {}
    for r in rows:
        table.setdefault(r[0], {})[r[1]] = r[3]
    for sigma, by_k in table.items():
        assert by_k[0.0] > max(by_k[1.0], by_k[2.0], by_k[4.0])


def test_sweep_gamma_table_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(capsys, "sweep", "--target", "gamma", "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    _, rows = io.read_csv(a)
    g = {(r[0], round(r[1], 6)): r[3] for r in rows}
    assert g[(0.5, 3.0)] < 0.05 * g[(0.5, 0.0)]
    assert g[(0.5, -3.0)] < 0.05 * g[(0.5, 0.0)]


def test_sweep_energy_general_packet_uses_quadrature(capsys):
    code, out, _ = run(capsys, "sweep", "--target", "energy", "--sigma", "1", "--k", "1",
                       "--at-xmean", "0.5")
    assert code == 0 and out.strip().endswith("quadrature")


def test_verify_hermitian_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hermitian", "--z", "2+0.2i")
    assert code == 0
    assert "xmean_coupling_factor_gap" in out and ",info" in out


def test_verify_biortho_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "biortho", "--z", "1+0.3i")
    assert code == 0 and ",fail" not in out


def test_verify_refuses_singular(capsys):
    code, _, err = run(capsys, "verify", "--suite", "metric", "--z", "3i")
    assert code == 2 and "spectral singularity" in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    from deltac import cli
    monkeypatch.setitem(cli.SUITES, "hermitian", lambda z, cfg, eps: [cli.Check("x", "broken", 1.0, 0.0)])
    code, _, err = run(capsys, "verify", "--suite", "hermitian", "--z", "2")
    assert code == 1 and "broken" in err


def test_estimate_report(capsys):
    code, out, _ = run(capsys, "estimate")
    assert code == 0
    assert "eps << 0.0001" in out and "eps > 1e-05" in out
    assert "DISCREPANCY" in out and "L = 7.61996 angstrom" in out


def test_estimate_si_matches_ev(capsys):
    _, ev, _ = run(capsys, "--format", "json", "estimate")
    _, si, _ = run(capsys, "--format", "json", "estimate", "--units", "SI", "--d", "1e-10",
                   "--strength", "1.602176634e-19", "--kT", "1.602176634e-21")
    ev, si = json.loads(ev), json.loads(si)
    for key in ("computed_L_angstrom", "computed_strength_scale_eV", "quoted_eps_validity",
                "quoted_eps_thermal"):
        assert si[key] == pytest.approx(ev[key], rel=1e-6)


def test_estimate_negative_input(capsys):
    assert run(capsys, "estimate", "--d", "-1")[0] == 2


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "deltac.cli", "classify", "--z", "-2"],
                         capture_output=True, text=True)
    assert res.returncode == 10 and res.stdout.strip() == "BoundState E=-1"
