import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from denselogz.errors import ParseError
from denselogz.instance_io import format_instance, load_instance, parse_instance, save_instance
from denselogz.model import IsingInstance, MrfInstance, gen_curie_weiss, gen_random_dense, gen_random_mrf, norms


def test_parse_ising_with_comments_and_field():
    text = "# a comment\nising 3\n1 2 0.5\n# another\n2 3 -1.25\nh 1 0.3\n\n"
    inst = parse_instance(text)
    assert isinstance(inst, IsingInstance)
    assert inst.J[0, 1] == inst.J[1, 0] == 0.5
    assert inst.J[1, 2] == inst.J[2, 1] == -1.25
    assert inst.h.tolist() == [0.3, 0.0, 0.0]


def test_parse_mrf():
    inst = parse_instance("mrf 3 4\n1 2 3 0.5\n4 4 4 -2\n")
    assert isinstance(inst, MrfInstance)
    assert inst.entries == {(0, 1, 2): 0.5, (3, 3, 3): -2.0}


@pytest.mark.parametrize(
    "text, line",
    [
        ("ising 3\n1 2 x\n", 2),
        ("ising 3\n1 4 1.0\n", 2),
        ("ising 3\n\n# c\n1 2\n", 4),
        ("potts 3\n", 1),
        ("ising 2\nh 1\n", 2),
        ("mrf 3 3\n1 2 0.5\n", 2),
        ("ising 2\n1 2 inf\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_instance(text)
    assert exc.value.line == line
    assert f"line {line}:" in str(exc.value)


def test_empty_file_is_an_error():
    with pytest.raises(ParseError):
        parse_instance("# nothing here\n")


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_instance(tmp_path / "missing.ising")


@given(n=st.integers(2, 9), delta=st.floats(0.1, 1.0), seed=st.integers(0, 500))
@settings(max_examples=30, deadline=None)
def test_round_trip_lossless(n, delta, seed):
    inst = gen_random_dense(n, delta, seed)
    back = parse_instance(format_instance(inst))
    assert np.array_equal(back.J, inst.J)
    assert np.array_equal(back.J, back.J.T)
    for a, b in zip((norms(inst).l1, norms(inst).l2), (norms(back).l1, norms(back).l2)):
        assert abs(a - b) <= 1e-12 * max(1.0, a)


def test_round_trip_files(tmp_path):
    for inst in (gen_curie_weiss(14, 0.8), gen_random_mrf(3, 3, 0.5, 1),
                 IsingInstance(np.zeros((3, 3)), h=np.array([0.1, 0.0, -0.7]))):
        path = tmp_path / "x.txt"
        save_instance(inst, path)
        back = load_instance(path)
        if isinstance(inst, IsingInstance):
            assert np.array_equal(back.J, inst.J) and np.array_equal(back.h, inst.h)
        else:
            assert back.entries == inst.entries
