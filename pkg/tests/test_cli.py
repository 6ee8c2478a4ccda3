from kvalued.cli import main, parse_letter_map
from kvalued.core import validate
from kvalued.oracle import eval_relation
from kvalued.textio import parse_machine, read_machine, serialize_machine

from .conftest import DATA

COUNTER, SHIFTED, SOURCE, MERGE_MAP = (
    str(DATA / f) for f in ("counter.naut", "shifted.trans", "shifted_source.trans", "merge.map"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def emitted(path):
    text = path.read_text()
    m = parse_machine(text)
    validate(m)
    assert serialize_machine(m) == text
    return m


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", COUNTER, "ba", "_", "bb")
    assert code == 0
    assert out == "ba\t2\n_\t0\nbb\t3\n"
    code, out, _ = run(capsys, "eval", SHIFTED, "aa")
    assert out == "aa\t{bb,bbb}\n"


def test_oracle_tables(capsys):
    code, out, _ = run(capsys, "oracle", "ambiguity", COUNTER, "--max-len", "2")
    assert code == 0 and out.splitlines()[-1] == "bb\t3"
    code, out, _ = run(capsys, "oracle", "valuedness", SHIFTED, "--max-len", "3")
    assert code == 0 and out.splitlines()[1:] == ["a\t2", "aa\t2", "aaa\t2"]
    code, _, _ = run(capsys, "oracle", "equiv", SHIFTED, SHIFTED, "--max-len", "4")
    assert code == 0
    code, out, _ = run(capsys, "oracle", "equiv", SHIFTED, SOURCE, "--max-len", "2")
    assert code == 2 and "differ" in out


def test_skim_covering_and_layers(tmp_path, capsys):
    out = tmp_path / "skim.naut"
    code, _, err = run(capsys, "skim", "--k", "3", COUNTER, "--out", str(out),
                       "--emit-layers", str(tmp_path / "layers"), "--report")
    assert code == 0
    assert emitted(out).n_states == 5
    assert "stage\tskim\t5\t19" in err and "verdict\tcovering\tok" in err
    names = sorted(p.name for p in (tmp_path / "layers").iterdir())
    assert names == ["layer_0.naut", "layer_1.naut", "layer_2.naut", "rest.naut"]
    for p in (tmp_path / "layers").iterdir():
        emitted(p)


def test_skim_reverse_order(tmp_path, capsys):
    out = tmp_path / "skim.naut"
    code, _, _ = run(capsys, "skim", "--k", "3", "--order", "perm:0,2,1,3,4,5,6", COUNTER, "--out", str(out))
    assert code == 0 and emitted(out).n_states == 8


def test_lagsep_select_and_trim(tmp_path, capsys):
    out = tmp_path / "v.trans"
    code, _, _ = run(capsys, "lagsep", "--n", "1", SHIFTED, "--select-psi", "--trim", "--out", str(out))
    assert code == 0
    v = emitted(out)
    assert list(v.states) == ["p__{}", "q__{p:~b}"]
    code, _, _ = run(capsys, "lagsep", "--n", "1", SHIFTED, "--out", str(out))
    assert emitted(out).n_states == 4


def test_decompose_shifted_copy(tmp_path, capsys):
    code, _, _ = run(capsys, "decompose", "--k", "2", "--n", "1", SHIFTED, "--out", str(tmp_path))
    assert code == 0
    first = emitted(tmp_path / "component_0.trans")
    second = emitted(tmp_path / "component_1.trans")
    for n in range(9):
        assert eval_relation(first, "a" * n) == {"b" * n}
        assert eval_relation(second, "a" * n) == ({"b" * (n + 1)} if n else set())
    lines = (tmp_path / "metrics.txt").read_text().splitlines()
    assert lines[0] == "source\t2\t3"
    assert all(len(line.split("\t")) == 3 for line in lines)


def test_decompose_with_morphism(tmp_path, capsys):
    assert parse_letter_map(MERGE_MAP) == {"b": "b", "c": "b"}
    code, _, err = run(capsys, "decompose", "--k", "2", "--morphism", MERGE_MAP, SOURCE,
                       "--out", str(tmp_path), "--report")
    assert code == 0
    assert "param\tK\t96" in err
    for i in range(2):
        emitted(tmp_path / f"component_{i}.trans")


def test_not_k_valued_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "decompose", "--k", "1", SHIFTED, "--out", str(tmp_path))
    assert code == 2 and "not 1-valued" in err


def test_usage_and_parse_errors(tmp_path, capsys):
    code, _, _ = run(capsys, "skim", COUNTER)
    assert code == 1
    bad = tmp_path / "bad.naut"
    bad.write_text("nautomaton X\nalphabet a\nstates p\ntrans p a r\n")
    code, _, err = run(capsys, "skim", "--k", "2", str(bad))
    assert code == 1 and "error" in err
    code, _, _ = run(capsys, "eval", str(tmp_path / "missing.naut"), "a")
    assert code == 1
    assert main(["frobnicate"]) == 1
    assert main(["--help"]) == 0


def test_cap_exit_code(capsys):
    code, _, err = run(capsys, "skim", "--k", "3", "--cap-states", "2", COUNTER)
    assert code == 3 and "n(k+1)^n = 32" in err
    code, _, err = run(capsys, "lagsep", "--n", "1", "--cap-states", "2", SHIFTED)
    assert code == 3


def _identity_map(path, m):
    lines = [f"state {s} {s}" for s in m.states]
    lines += [f"trans {t.id} {t.id}" for t in m.transitions]
    path.write_text("\n".join(lines) + "\n")


def test_verify(tmp_path, capsys):
    counter = read_machine(COUNTER)
    good = tmp_path / "good.map"
    _identity_map(good, counter)
    code, out, _ = run(capsys, "verify", "--covering", COUNTER, COUNTER, str(good))
    assert code == 0 and out == "covering\tok\n"
    broken = tmp_path / "broken.map"
    broken.write_text(good.read_text().replace("trans 0 0", "trans 0 1"))
    code, out, _ = run(capsys, "verify", "--covering", COUNTER, COUNTER, str(broken))
    assert code == 2 and out == "covering\tFAIL\n"
    partial = tmp_path / "partial.map"
    partial.write_text("state p p\n")
    code, _, _ = run(capsys, "verify", "--morphism", COUNTER, COUNTER, str(partial))
    assert code == 1


def test_verify_immersion_of_selection(tmp_path, capsys):
    v = tmp_path / "v.trans"
    run(capsys, "lagsep", "--n", "1", SHIFTED, "--select-psi", "--out", str(v))
    m = read_machine(str(v))
    mp = tmp_path / "v.map"
    lines = [f"state {s} {s.split('__')[0]}" for s in m.states]
    lines += [f"trans {t.id} {[0, 1, 2, 0, 1, 2][t.id]}" for t in m.transitions]
    mp.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify", "--immersion", str(v), SHIFTED, str(mp))
    assert code == 0 and out == "immersion\tok\n"


def test_runs_are_byte_identical(tmp_path, capsys):
    texts = []
    for i in range(2):
        d = tmp_path / str(i)
        run(capsys, "decompose", "--k", "2", "--n", "1", SHIFTED, "--out", str(d))
        run(capsys, "skim", "--k", "3", COUNTER, "--out", str(d / "skim.naut"))
        run(capsys, "lagsep", "--n", "1", SHIFTED, "--out", str(d / "lag.trans"))
        texts.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert texts[0] == texts[1]
