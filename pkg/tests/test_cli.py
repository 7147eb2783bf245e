import json

import pytest

from ampsample import bits
from ampsample.cli import main

BELL = "qubits 2\nh 0\ncx 0 1\n"
SQUARE = "edges\na 0 1\nb 1 2\nc 2 3\nd 3 0\nfaces\na b c d\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "bell.qc").write_text(BELL)
    (tmp_path / "negx.ham").write_text("qubits 1\nterm -1 X\n")
    (tmp_path / "sq.graph").write_text(SQUARE)
    (tmp_path / "h.sched").write_text("h 0\nh 1\nh 2\nh 3\n")
    (tmp_path / "ct.qc").write_text("qubits 2\nh 0\nt 0\ncx 0 1\nt 1\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def body(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_sample_circuit_deterministic(files, capsys):
    _, a, _ = run(capsys, "sample-circuit", files / "bell.qc", "--shots", 1000, "--seed", 7)
    _, b, _ = run(capsys, "sample-circuit", files / "bell.qc", "--shots", 1000, "--seed", 7)
    _, c, _ = run(capsys, "sample-circuit", files / "bell.qc", "--shots", 1000, "--seed", 7, "--threads", 3)
    assert a == b == c
    rows = body(a)
    assert len(rows) == 1000 and set(rows) == {"00", "11"}
    assert a.startswith("# ampsample/1 sample-circuit")


def test_seed_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("AMPSAMPLE_SEED", "7")
    _, a, _ = run(capsys, "sample-circuit", files / "bell.qc", "--shots", 50)
    _, b, _ = run(capsys, "sample-circuit", files / "bell.qc", "--shots", 50, "--seed", 7)
    assert a == b


def test_output_file_and_json(files, capsys):
    out = files / "o.json"
    assert run(capsys, "sample-circuit", files / "bell.qc", "--shots", 5, "--json", "-o", out)[0] == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == "ampsample/1" and len(doc["rows"]) == 5
    assert doc["diagnostics"]["evaluations_max_per_shot"] <= doc["diagnostics"]["evaluation_bound_per_shot"]


def test_qubit_algorithm_needs_marginals(files, capsys):
    code, _, err = run(capsys, "sample-circuit", files / "bell.qc", "--algorithm", "qubit", "--backend", "pathsum")
    assert code == 2 and "marginals unsupported" in err
    code, out, _ = run(capsys, "sample-circuit", files / "bell.qc", "--algorithm", "qubit", "--shots", 20)
    assert code == 0 and set(body(out)) <= {"00", "11"}


@pytest.mark.parametrize("backend", ["statevector", "pathsum", "stabdecomp"])
def test_backends_and_trace(files, capsys, backend):
    code, out, _ = run(capsys, "sample-circuit", files / "ct.qc", "--backend", backend, "--shots", 3, "--trace")
    assert code == 0 and "# trace" in out


def test_stabdecomp_rejects_general_gate(files, capsys):
    (files / "rx.qc").write_text("qubits 1\nrx 0 0.3\n")
    code, _, err = run(capsys, "sample-circuit", files / "rx.qc", "--backend", "stabdecomp")
    assert code == 2 and "error" in err


def test_parse_error_names_file_and_line(files, capsys):
    (files / "bad.qc").write_text("qubits 2\nh 0\nbogus 1\n")
    code, _, err = run(capsys, "sample-circuit", files / "bad.qc")
    assert code == 2 and "bad.qc" in err and "3" in err


def test_noise_flags(files, capsys):
    code, out, _ = run(capsys, "sample-circuit", files / "bell.qc", "--eps", 0.01, "--shots", 10)
    assert code == 0 and "noise=16sum=0.16" in out
    (files / "plan.txt").write_text("seed 3\n1 0.01\n2 0.02\n")
    assert run(capsys, "sample-circuit", files / "bell.qc", "--noise", files / "plan.txt")[0] == 0


def test_guard_and_force(files, capsys):
    (files / "big.qc").write_text("qubits 21\nh 0\n")
    code, _, err = run(capsys, "sample-circuit", files / "big.qc")
    assert code == 2 and "--force" in err
    code, _, err = run(capsys, "sample-circuit", files / "big.qc", "--force")
    assert code == 0 and "warning" in err


def test_sample_ground_minus_x(files, capsys):
    code, out, _ = run(capsys, "sample-ground", files / "negx.ham", "--chains", 10000, "--steps", 30, "--seed", 1)
    assert code == 0
    assert "# gap 2" in out and "# s 1" in out
    assert len(body(out)) == 10000


def test_sample_ground_threads_match(files, capsys):
    argv = ["sample-ground", files / "negx.ham", "--chains", 3000, "--steps", 10, "--seed", 4]
    assert run(capsys, *argv)[1] == run(capsys, *argv, "--threads", 4)[1]


def test_sample_ground_magic(files, capsys):
    r = 2**-0.5
    (files / "m.magic").write_text(f"qubits 1\nfamily\nstate 0 {r},0 1 {r},0\n")
    code, out, _ = run(capsys, "sample-ground", files / "m.magic", "--magic", "--chains", 100, "--steps", 10)
    assert code == 0 and "oracle=magic-ratio" in out


def test_sample_mbqc(files, capsys):
    code, out, _ = run(capsys, "sample-mbqc", files / "sq.graph", "--shots", 200, "--seed", 2)
    assert code == 0 and set(body(out)) <= {"0000", "1111"}
    code, out, _ = run(capsys, "sample-mbqc", files / "sq.graph", "--schedule", files / "h.sched", "--shots", 20)
    assert code == 0 and len(body(out)) == 20


def test_budget_uniform_for_clifford(capsys):
    code, out, _ = run(capsys, "budget", "--xi", "1,1,1,1", "--delta", 0.1)
    eps = {row.split()[3] for row in body(out) if row.split()[3] != "-"}
    assert code == 0 and len(eps) == 1
    assert "# eps_sum 0.00625" in out


def test_budget_from_circuit(files, capsys):
    code, out, _ = run(capsys, "budget", files / "ct.qc")
    assert code == 0 and len(body(out)) == 4


def test_distribution(files, capsys):
    code, out, _ = run(capsys, "distribution", files / "bell.qc")
    assert code == 0 and body(out) == ["00 0.5", "11 0.5"]


def test_verify_quick_and_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "gadgets", "--suite", "reduction")
    assert code == 0 and out.count("PASS") == 2
    code, out, _ = run(capsys, "verify", "--suite", "gadgets", "--perturb-gadget", 1.01)
    assert code == 1 and "FAIL" in out


def test_verify_robustness_eps(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "robustness", "--eps", 0.001, "--quick")
    assert code == 0 and "# robustness_l1_vs_bound" in out


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "--suite", "nope")[0] == 2


def test_bits_output_order(files, capsys):
    (files / "x0.qc").write_text("qubits 3\nx 0\n")
    _, out, _ = run(capsys, "sample-circuit", files / "x0.qc")
    assert body(out) == [bits.to_str(1, 3)] == ["100"]
