import os
import re
import subprocess
import sys

import pytest

from pi_otp import cli, pad
from pi_otp.errors import BoundsError, CapacityError, DigitFileError, DomainError, ValidationError
from pi_otp.pad import PadConfig, generate_pad

from oracles import reference_pad


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_digits(capsys):
    assert run(capsys, "digits", "--at", 0, "--count", 16) == (0, "243f6a8885a308d3\n", "")


def test_digits_out_of_range(capsys):
    code, _, err = run(capsys, "digits", "--at", 1 << 24, "--count", 1)
    assert code == DomainError.exit_code
    assert err.startswith("pi-otp: error:") and err.count("\n") == 1


def test_genpad_file_source(capsys, tmp_path, pi_file, pi_digits):
    out = tmp_path / "pad.txt"
    code, stdout, _ = run(capsys, "genpad", "password", "--source", "pi-file", pi_file, "--out", out)
    assert code == 0 and stdout.strip() == str(out)
    text = out.read_text()
    assert re.fullmatch(r"[0-9a-f]{256}\n", text)
    assert text.strip() == reference_pad("password", pi_digits)


def test_genpad_three_rounds(capsys, tmp_path, pi_file, file_source):
    out = tmp_path / "pad3.txt"
    code, _, err = run(capsys, "genpad", "a", "b", "c", "--source", "pi-file", pi_file, "--out", out, "-v")
    assert code == 0
    assert "Rounds = 3" in err and "Computation time" in err
    expected = generate_pad(["a", "b", "c"], PadConfig(rounds=3), file_source)
    assert pad.read_pad(out).nibbles == expected.nibbles


def test_genpad_env_passphrases(capsys, tmp_path, pi_file, monkeypatch):
    monkeypatch.setenv("OTP_PHRASES", "a\nb")
    run(capsys, "genpad", "a", "b", "--source", "pi-file", pi_file, "--out", tmp_path / "args.txt")
    run(capsys, "genpad", "--passphrase-env", "OTP_PHRASES", "--source", "pi-file", pi_file, "--out", tmp_path / "env.txt")
    assert (tmp_path / "args.txt").read_text() == (tmp_path / "env.txt").read_text()


def test_genpad_prompt(capsys, tmp_path, pi_file, monkeypatch):
    monkeypatch.setattr("getpass.getpass", lambda prompt="": "password")
    code, _, _ = run(capsys, "genpad", "--prompt", 1, "--source", "pi-file", pi_file, "--out", tmp_path / "p.txt")
    assert code == 0
    run(capsys, "genpad", "password", "--source", "pi-file", pi_file, "--out", tmp_path / "q.txt")
    assert (tmp_path / "p.txt").read_text() == (tmp_path / "q.txt").read_text()


def test_genpad_default_name(capsys, tmp_path, pi_file, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, stdout, _ = run(capsys, "genpad", "password", "--source", "pi-file", pi_file)
    assert code == 0
    assert re.fullmatch(r"OTP_\d{8}-\d{6}\.txt", stdout.strip())
    assert (tmp_path / stdout.strip()).exists()


def test_genpad_computed_matches_file(capsys, tmp_path, pi_file):
    a, b = tmp_path / "c.txt", tmp_path / "f.txt"
    run(capsys, "genpad", "password", "--source", "computed", "--out", a)
    run(capsys, "genpad", "password", "--source", "pi-file", pi_file, "--out", b)
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv, exit_code", [
    (["genpad", "--source", "pi-file"], ValidationError.exit_code),
    (["genpad", "x", "--source", "tape"], ValidationError.exit_code),
    (["genpad", "x", "--source", "pi-file", "/nonexistent/pi.txt"], DigitFileError.exit_code),
    (["genpad", "", "--source", "computed"], ValidationError.exit_code),
    (["genpad", "x", "--nibbles", "0"], ValidationError.exit_code),
])
def test_genpad_errors(capsys, argv, exit_code):
    code, out, err = run(capsys, *argv)
    assert code == exit_code
    assert out == "" and err.startswith("pi-otp: error:")


def test_pool_file_too_small(capsys, tmp_path):
    pool = tmp_path / "pool.txt"
    pool.write_text("ab" * 100)
    code, _, _ = run(capsys, "genpad", "x", "--source", "pool-file", pool, "--out", tmp_path / "o")
    assert code == ValidationError.exit_code


def test_mkdigits(capsys, tmp_path):
    out = tmp_path / "d.txt"
    code, _, _ = run(capsys, "mkdigits", "--count", 100, "--out", out, "--engine", "bbp")
    assert code == 0
    assert "".join(out.read_text().split()) == cli.pi_hex_at(0, 100).hex()


def test_encrypt_decrypt(capsys, tmp_path, pi_file):
    padfile = tmp_path / "pad.txt"
    run(capsys, "genpad", "secret", "--source", "pi-file", pi_file, "--out", padfile)
    msg = tmp_path / "m.bin"
    msg.write_bytes(os.urandom(100))
    assert run(capsys, "encrypt", "--pad", padfile, "--in", msg, "--out", tmp_path / "c.bin")[0] == 0
    assert (tmp_path / "c.bin").read_bytes() != msg.read_bytes()
    assert run(capsys, "decrypt", "--pad", padfile, "--in", tmp_path / "c.bin", "--out", tmp_path / "d.bin")[0] == 0
    assert (tmp_path / "d.bin").read_bytes() == msg.read_bytes()


def test_encrypt_too_long(capsys, tmp_path):
    padfile = tmp_path / "pad.txt"
    padfile.write_text("0" * 256)
    msg = tmp_path / "m.bin"
    msg.write_bytes(bytes(129))
    code, _, _ = run(capsys, "encrypt", "--pad", padfile, "--in", msg, "--out", tmp_path / "c")
    assert code == CapacityError.exit_code


def test_encrypt_stdin_stdout(tmp_path):
    padfile = tmp_path / "pad.txt"
    padfile.write_text("ff" * 128)
    proc = subprocess.run([sys.executable, "-m", "pi_otp", "encrypt", "--pad", str(padfile), "--in", "-", "--out", "-"],
                          input=b"\x00\x0f", capture_output=True, check=True)
    assert proc.stdout == b"\xff\xf0"


def test_phrase(capsys, tmp_path):
    doc = tmp_path / "book.txt"
    doc.write_text("title page\f" + " ".join(["w"] * 30) + " be firs a husbandman and more")
    code, out, _ = run(capsys, "phrase", "--doc", doc, "--page", 2, "--start", 31, "--words", 4, "--hash")
    assert code == 0
    assert out.splitlines() == [
        "be firs a husbandman",
        "61d44985f82b046740d3ac4f0c0e291ffe6bf3bc6fe4a3d5169fb7523f178d9a",
    ]


def test_phrase_out_of_range(capsys, tmp_path):
    doc = tmp_path / "short.txt"
    doc.write_text("a b c")
    code, _, _ = run(capsys, "phrase", "--doc", doc, "--start", 9)
    assert code == BoundsError.exit_code


def test_phrase_bytes(capsys, tmp_path):
    blob = tmp_path / "b.bin"
    blob.write_bytes(bytes(range(50)))
    code, out, _ = run(capsys, "phrase", "--doc", blob, "--byte-offset", 10, "--length", 4)
    assert code == 0 and out.strip() == "0a0b0c0d"


def test_stats(capsys, tmp_path):
    hexfile = tmp_path / "h.txt"
    hexfile.write_text(bytes(range(256)).hex() * 5 + "\n")
    code, out, _ = run(capsys, "stats", "--in", hexfile, "--histogram")
    assert code == 0
    kv = dict(line.split("=", 1) for line in out.splitlines() if "=" in line)
    assert kv["total"] == "1280" and float(kv["mean"]) == 5.0
    assert float(kv["cv"]) == 0.0 and float(kv["chi_square"]) == 0.0
    hist = [line for line in out.splitlines() if re.fullmatch(r"\d+ \d+", line)]
    assert len(hist) == 256 and hist[0] == "0 5"


def test_stats_small_sample(capsys, tmp_path):
    hexfile = tmp_path / "h.txt"
    hexfile.write_text("00ff")
    code, out, _ = run(capsys, "stats", "--in", hexfile)
    assert code == 0 and "chi_square=nan" in out


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "pi_otp", "digits", "--at", "1", "--count", "4"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "43f6\n"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["digits"])
    assert info.value.code == 2
