import pytest

from ltlflearn.traces import (
    Alphabet,
    Sample,
    TaskFormatError,
    Trace,
    parse_sample,
    parse_task,
    serialize_sample,
)

WORKED = """1;1;0;1;1
0;1;1;1
---
1;0;1;0
1;1;0
"""


def test_parse_two_sections():
    sample = parse_sample(WORKED)
    assert sample.n_pos == 2
    assert sample.n_neg == 2
    assert len(sample.alphabet) == 1
    assert sample.positives[0].letters == (1, 1, 0, 1, 1)
    assert sample.negatives[1].letters == (1, 1, 0)


def test_parse_multi_prop_letters():
    sample = parse_sample("1,0;0,1\n---\n0,0\n")
    assert len(sample.alphabet) == 2
    assert sample.positives[0].letters == (0b01, 0b10)


def test_names_section():
    task = parse_task("1;0\n---\n0;1\n---\nreq\n")
    assert task.sample.alphabet.props == ("req",)
    assert task.op_names is None


def test_ops_section_is_recognized_by_vocabulary():
    task = parse_task("1\n---\n0\n---\nX!,F,&,|\n")
    assert task.op_names == ("X!", "F", "&", "|")
    assert task.sample.alphabet.props == ("p0",)


def test_ops_then_names():
    task = parse_task("1,0\n---\n0,0\n---\nF,G,U,&\n---\nreq,ack\n")
    assert task.op_names == ("F", "G", "U", "&")
    assert task.sample.alphabet.props == ("req", "ack")


def test_names_then_ops_rejected():
    with pytest.raises(TaskFormatError):
        parse_task("1\n---\n0\n---\nreq\n---\nF,G\n")


def test_blank_lines_and_crlf():
    sample = parse_sample("1;1\r\n\r\n---\r\n0;0\r\n")
    assert sample.n_pos == 1
    assert sample.positives[0].letters == (1, 1)


def test_empty_positive_block_rejected():
    with pytest.raises(TaskFormatError):
        parse_sample("---\n0;1\n")


def test_empty_trace_line_detail():
    with pytest.raises(TaskFormatError, match="line 1"):
        parse_sample(";\n---\n0\n")


def test_ragged_letter_width_rejected():
    with pytest.raises(TaskFormatError):
        parse_sample("1,0;1\n---\n0,0\n")


def test_bad_bit_rejected():
    with pytest.raises(TaskFormatError, match="line 3"):
        parse_sample("1;0\n---\n2;0\n")


def test_width_must_match_names():
    with pytest.raises(TaskFormatError):
        parse_task("1,0\n---\n0,0\n---\nonly_one\n")


def test_reserved_prop_names_rejected():
    # "F,req" is not all operator tokens, so it must be a names line,
    # and "F" is reserved.
    with pytest.raises(TaskFormatError, match="F"):
        parse_task("1,0\n---\n0,0\n---\nF,req\n")
    with pytest.raises(ValueError):
        Alphabet(("true",))


def test_overlapping_classes_rejected():
    with pytest.raises(ValueError, match="both"):
        Sample(Alphabet.default(1), (Trace((1, 0)),), (Trace((1, 0)),))


def test_duplicates_within_class_kept():
    sample = parse_sample("1;0\n1;0\n---\n0;0\n")
    assert sample.n_pos == 2


def test_trace_accessors():
    w = Trace((0b01, 0b10, 0b11))
    assert w.length == 3
    assert w.has(0, 1) and not w.has(1, 1)
    assert w.has(1, 2) and w.has(0, 3) and w.has(1, 3)


def test_serialize_round_trip_default_names():
    sample = parse_sample(WORKED)
    text = serialize_sample(sample)
    assert "---" in text and "a" not in text  # default names omitted
    again = parse_sample(text)
    assert again.positives == sample.positives
    assert again.negatives == sample.negatives


def test_serialize_round_trip_custom_names():
    task = parse_task("1,0;0,1\n---\n0,0\n---\nreq,ack\n")
    text = serialize_sample(task.sample)
    assert text.splitlines()[-1] == "req,ack"
    assert parse_task(text).sample == task.sample


def test_serialize_with_ops():
    task = parse_task("1\n---\n0\n---\nF,G\n")
    text = serialize_sample(task.sample, op_names=task.op_names)
    round_tripped = parse_task(text)
    assert round_tripped.op_names == ("F", "G")


def test_alphabet_default_and_index():
    alpha = Alphabet.default(3)
    assert alpha.props == ("p0", "p1", "p2")
    assert alpha.index("p1") == 1
