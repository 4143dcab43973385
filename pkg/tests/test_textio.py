import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from twdiag import instances as inst
from twdiag import textio
from twdiag import twisted as tw

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
seeds = st.integers(0, 10**6)

HEADER = "category c\nobject a 0\nobject b 1\narrow f : a -> b\n"


def parse_error(text):
    with pytest.raises(textio.TwParseError) as e:
        textio.parse(text, "t.tw")
    return e.value


@pytest.mark.parametrize("name", sorted(p.name for p in FIXTURES.glob("*.tw")))
def test_fixture_round_trip(name):
    a = textio.load(str(FIXTURES / name))
    text = textio.serialize(a)
    b = textio.parse(text)
    assert textio.same_instance(a, b)
    assert textio.serialize(b) == text


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(inst.FIBER_KINDS))
def test_generated_round_trip(seed, kind):
    rng = random.Random(seed)
    b = inst.random_bundle(kind, rng)
    y, z = inst.random_diagram(b, rng, 2), inst.random_diagram(b, rng, 2)
    f = inst.random_twisted_map(y, z, rng)
    a = textio.instance_of(y, {"f": f}, {"Y": y, "Z": z})
    back = textio.parse(textio.serialize(a))
    assert textio.same_instance(a, back)
    assert tw.validate_twisted(back.diagram("Y")) == []
    assert back.map("f") == f


def test_comments_and_blank_lines_ignored():
    a = textio.parse(HEADER)
    b = textio.parse("# leading\n\n" + HEADER.replace("\n", "   # trailing\n", 1) + "\n\n")
    assert textio.same_instance(a, b)


def test_composition_inferred_for_chains():
    a = textio.parse("category c\nobject a 0\nobject b 1\nobject d 2\n"
                     "arrow f : a -> b\narrow g : b -> d\narrow h : a -> d\ncompose g . f = h\n")
    assert a.category.comp[("g", "f")] == "h"
    assert a.category.degree == {"a": 0, "b": 1, "d": 2}


def test_error_before_section():
    e = parse_error("object a 0\n")
    assert e.line == 1 and "before any section" in e.msg


def test_error_unknown_object():
    e = parse_error("category c\nobject a 0\narrow f : a -> b\n")
    assert e.line == 3 and "unknown object" in e.msg
    assert str(e).startswith("t.tw:3:")


def test_error_section_order():
    e = parse_error(HEADER + "bundle x\nfiber a chain QQ\nfiber b chain QQ\nadjoint f identity\ncategory d\n")
    assert e.line == 9 and "out of order" in e.msg


def test_error_must_start_with_category():
    assert parse_error("bundle b\n").line == 1


def test_error_kind_mismatch():
    text = ("category c\nobject a 0\nbundle b\nfiber a chain QQ\n"
            "diagram Y\nat a mset [0]\n")
    e = parse_error(text)
    assert e.line == 6 and "chain" in e.msg


def test_error_unknown_arrow():
    text = ("category c\nobject a 0\nbundle b\nfiber a chain QQ\n"
            "diagram Y\nat a complex\ndeg 0 orders 0\nflat zz chain\n")
    e = parse_error(text)
    assert e.line == 8 and "zz" in e.msg


def test_error_bad_matrix():
    text = (HEADER + "bundle x\nfiber a module QQ\nfiber b module QQ\nadjoint f identity\n"
            "diagram Y\nat a module 1\nat b module 1\nflat f [1 2]\n")
    e = parse_error(text)
    assert e.line == 12 and "1x2" in e.msg


def test_load_missing_file():
    with pytest.raises(OSError):
        textio.load(str(FIXTURES / "missing.tw"))


def test_load_reports_path(tmp_path):
    p = tmp_path / "bad.tw"
    p.write_text("category c\nobject a 0\narrow f : a -> zz\n")
    with pytest.raises(textio.TwParseError) as e:
        textio.load(str(p))
    assert str(e.value).startswith(f"{p}:3:")


def test_nested_error_keeps_single_prefix():
    text = ("category c\nobject a 0\nobject b 1\narrow f : a -> b\n"
            "bundle s\nfiber a chain ZZ\nfiber b chain ZZ\nadjoint f shift 1\n"
            "diagram Y\nat a complex\ndeg 0 orders 0\nat b complex\ndeg 0 orders\n"
            "deg 1 orders 0 d []\nflat f chain\ndeg 0 []\n")
    e = parse_error(text)
    assert str(e).count("t.tw:") == 1 and e.line == 16
