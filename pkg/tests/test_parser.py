import pytest
from hypothesis import given, settings

from solp.errors import ParseError, ValidationError
from solp.model import AgentCount, BinOp, Cardinal, Member, Num
from solp.parser import (
    SourceUnit,
    format_rule,
    load_sources,
    parse_atom,
    parse_collection,
    print_collection,
)

from conftest import GOLDEN, VALID_GOLDEN, collections, golden


def test_table1_shape(wedding):
    assert wedding.n == 4 and wedding.ids == ("p1", "p2", "p3", "p4")
    (rule,) = wedding.program("p1").rules
    (sl,) = rule.social
    assert isinstance(sl.sc.cond, Cardinal)
    assert wedding.program("p4").rules == ()


def test_classical_single_rule():
    c = parse_collection("#program p. a :- b.")
    (r,) = c.programs[0].rules
    assert str(r.head) == "a" and not r.social and not r.okay


def test_grounded_nested_rule_has_depth_one_skel():
    c = golden("sharing")
    r2 = c.program("p1").rules[1]
    assert r2.okay and str(r2.head) == "share(song)"
    (sl,) = r2.social
    assert len(sl.sc.skel) == 1 and sl.sc.skel[0].skel == ()


def test_dangling_member_reference():
    with pytest.raises(ValidationError) as e:
        parse_collection("#program p. a :- [p9]{c}.")
    assert "p9" in str(e.value)


@pytest.mark.parametrize("text", [
    "#program p. a(X) :- b.",
    "#program p. a :- [1,]{b(Y)}.",
    "#program p. A :- b.",
])
def test_variables_rejected(text):
    with pytest.raises(ParseError) as e:
        parse_collection(text)
    assert "variables unsupported" in str(e.value)


@pytest.mark.parametrize("text,fragment", [
    ("#program p. a :- [2]{b}.", "ambiguous"),
    ("#program p. a :- [1,]{not [p]{b}}.", "negated social"),
    ("#program p. a :- [1, m]{b}.", "unknown symbol"),
    ("a.", "#program"),
    ("#program p. a :- b", "expected '.'"),
    ("#program p. :- .", "expected an atom"),
    ("#program p. a__b.", "separator"),
    ("#program p. a :- [1,]{[p]{c}}.", "at least one literal"),
    ("#program p. a :- [1,]b, [p]{c}, [1,]{[p]c}.", "at least one literal"),
])
def test_syntax_errors_carry_spans(text, fragment):
    with pytest.raises(ParseError) as e:
        parse_collection(text)
    assert fragment in str(e.value)
    assert all(d.line is not None and d.severity == "error" for d in e.value.diagnostics)


def test_selection_disambiguation():
    c = parse_collection("#program p. a :- [p]{b}, [1,]{b}, [,2]{b}, []{b}, [n/2-1, n]{b}.", validate=False)
    conds = [sl.sc.cond for sl in c.programs[0].rules[0].social]
    assert conds[0] == Member("p")
    assert conds[1] == Cardinal(Num(1), None)
    assert conds[2] == Cardinal(None, Num(2))
    assert conds[3] == Cardinal()
    assert conds[4].upper == AgentCount()
    assert isinstance(conds[4].lower, BinOp) and conds[4].lower.op == "-"


def test_brace_omission_only_for_single_literal():
    c = parse_collection("#program p. a :- [p]b, not [1,]c. #program q.")
    social = c.programs[0].rules[0].social
    assert [len(sl.sc.content) for sl in social] == [1, 1]
    assert social[1].negated


def test_comments_and_multiple_units():
    c = parse_collection([SourceUnit("x", "% hi\n#program a. p. % trailing\n"), SourceUnit("y", "#program b.")])
    assert c.ids == ("a", "b")


def test_directory_loads_alphabetically(tmp_path):
    (tmp_path / "b.solp").write_text("#program second.")
    (tmp_path / "a.solp").write_text("#program first.")
    (tmp_path / "ignored.txt").write_text("junk")
    assert parse_collection(load_sources([tmp_path])).ids == ("first", "second")


def test_parse_atom():
    assert str(parse_atom("share(song)")) == "share(song)"
    with pytest.raises(ParseError):
        parse_atom("a b")


@pytest.mark.parametrize("name", VALID_GOLDEN)
def test_golden_round_trip(name):
    c = golden(name)
    assert parse_collection(print_collection(c)) == c


def test_every_golden_solp_parses_or_is_a_known_negative():
    for path in sorted(GOLDEN.glob("*.solp")):
        if path.stem.endswith("_bad"):
            with pytest.raises(ValidationError):
                parse_collection(load_sources([path]))
        else:
            parse_collection(load_sources([path]))


def test_empty_program_prints_header_only():
    assert print_collection(parse_collection("#program solo.")).strip() == "#program solo."


def test_okay_rule_printing():
    r = parse_collection("#program p. okay(a) :- b.").programs[0].rules[0]
    assert format_rule(r) == "okay(a) :- b."


def test_printed_bounds_comment(wedding):
    assert "% n=4: [n / 2 - 1, ]=[1,3]" in print_collection(wedding)


@settings(max_examples=300, deadline=None)
@given(collections())
def test_round_trip_property(c):
    assert parse_collection(print_collection(c), validate=False) == c
