import numpy as np
import pytest

from mkpolar import cli
from mkpolar.arith import QScheme
from mkpolar.construction import bits_to_hex, load_code_spec
from mkpolar.decoder import decode
from mkpolar.hdl import emit_decoder_hdl
from mkpolar.kernels import KernelOrder, encode
from mkpolar.sim import StopRule, run_fer_trials


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_lengths(capsys):
    code, out, _ = run(capsys, "lengths", "--max", 4096)
    assert code == 0 and len(out.splitlines()) == 55


def test_compile_matches_library(tmp_path, capsys):
    code, out, _ = run(capsys, "compile", "--n", 48, "--order", "3,2,2,2,2", "--q", "5,5", "--out", tmp_path)
    assert code == 0
    target = tmp_path / "48_32222"
    fs = emit_decoder_hdl(KernelOrder.of(3, 2, 2, 2, 2), QScheme(5, 5))
    for name, text in fs.files.items():
        assert (target / name).read_text() == text
    assert "generation_time" in (target / "manifest.txt").read_text()


def test_construct_encode_decode(tmp_path, capsys):
    code_file = tmp_path / "code.txt"
    assert run(capsys, "construct", "--order", "3,2,2", "--k", 6, "--frames", 2000, "--out", code_file)[0] == 0
    spec = load_code_spec(code_file)
    rng = np.random.default_rng(0)
    msgs = rng.integers(0, 2, (4, 6))
    (tmp_path / "m.txt").write_text("".join(bits_to_hex(m) + "\n" for m in msgs))
    assert run(capsys, "encode", "--code", code_file, "--in", tmp_path / "m.txt",
               "--out", tmp_path / "x.txt")[0] == 0
    u = np.zeros((4, 12), dtype=np.uint8)
    u[:, spec.information_set] = msgs
    x = encode(u, spec.order)
    assert (tmp_path / "x.txt").read_text().split() == [bits_to_hex(r) for r in x]
    llr = np.where(x == 1, -9, 9)
    (tmp_path / "l.txt").write_text("".join(",".join(map(str, r)) + "\n" for r in llr))
    assert run(capsys, "decode", "--code", code_file, "--in", tmp_path / "l.txt",
               "--out", tmp_path / "d.txt")[0] == 0
    assert (tmp_path / "d.txt").read_text().split() == [bits_to_hex(m) for m in msgs]


def test_decode_inline_frozen_matches_library(tmp_path, capsys):
    order = KernelOrder.of(3, 2)
    a = np.array([0, 1, 0, 1, 1, 1], dtype=np.uint8)
    llr = np.array([[3, -4, 5, 1, 2, -7]])
    (tmp_path / "l.txt").write_text("3,-4,5,1,2,-7\n")
    code, out, _ = run(capsys, "decode", "--order", "3,2", "--frozen", bits_to_hex(a), "--in",
                       tmp_path / "l.txt", "--codeword")
    assert code == 0
    assert out.split() == [bits_to_hex(decode(llr, a, order, width=5).x_hat[0])]


def test_decode_length_mismatch_writes_nothing(tmp_path, capsys):
    (tmp_path / "l.txt").write_text("3,-4,5\n")
    out_file = tmp_path / "d.txt"
    code, _, err = run(capsys, "decode", "--order", "3,2", "--frozen", "fc", "--in", tmp_path / "l.txt",
                       "--out", out_file)
    assert code != 0 and "error" in err and len(err.strip().splitlines()) == 1
    assert not out_file.exists()
    assert list(tmp_path.iterdir()) == [tmp_path / "l.txt"]


def test_simulate_matches_library(tmp_path, capsys):
    out_file = tmp_path / "fer.csv"
    args = ["simulate", "--order", "2,2,2,2,2", "--k", 16, "--snr", "1:2:1", "--min-errors", 20,
            "--max-frames", 2000, "--seed", 3, "--q", "5,5", "--out", out_file]
    assert run(capsys, *args)[0] == 0
    from mkpolar.construction import construct_code
    from mkpolar.sim import to_csv
    spec = construct_code(KernelOrder.of(*[2] * 5), 16, 1.5)
    pts = run_fer_trials(spec, [1.0, 2.0], QScheme(5, 5), StopRule(20, 2000), seed=3)
    assert out_file.read_text() == to_csv(pts)


def test_complexity(capsys):
    code, out, _ = run(capsys, "complexity", "--n", 32)
    assert code == 0
    fields = dict(line.split() for line in out.splitlines())
    assert fields["total"] == "208" and fields["binary_closed_form"] == "208"
    assert fields["gain_percent"] == "0.00"


def test_domain_errors(capsys):
    assert run(capsys, "complexity", "--n", 10)[0] == 1
    assert run(capsys, "complexity", "--n", 6, "--order", "2,2")[0] == 1
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])
    with pytest.raises(SystemExit):
        cli.main(["lengths", "--bogus"])
